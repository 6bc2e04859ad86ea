"""Spectrum of quantum multiplication by c1 (and by Euler-type fields) on the extremal ring."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

from .algebra import AlgebraElement, EigenMultiset, eigen_multiset, match_multisets, mult_operator_matrix
from .errors import ConfigError, NumericalError
from .geometry import BundleRing, GeometryConfig, build_quantum_ring, c1_element


@dataclass
class SpectrumReport:
    computed: EigenMultiset
    theoretical: EigenMultiset
    max_match_error: float
    zero_multiplicity: int

    def to_json(self) -> dict:
        return {"computed": self.computed.to_json(), "theoretical": self.theoretical.to_json(),
                "max_match_error": self.max_match_error, "zero_multiplicity": self.zero_multiplicity}


def eigenvalue_lambda(k: int, r: int, s: int, q: complex) -> complex:
    """lambda_k(q) = (r-s) exp(-pi i (2k+s)/(r-s)) q."""
    nu = r - s
    return nu * np.exp(-1j * np.pi * (2 * k + s) / nu) * complex(q)


def theoretical_spectrum(cfg: GeometryConfig, q: complex | None = None) -> EigenMultiset:
    """0 with multiplicity s dim H*(Z), each lambda_k(q) with multiplicity dim H*(Z)."""
    if cfg.nu <= 1:
        raise ConfigError("the spectrum statement needs r - s > 1")
    q = cfg.q_value if q is None else complex(q)
    dB = cfg.base_dim
    pairs = []
    if cfg.s * dB:
        pairs.append((0j, cfg.s * dB))
    lam = [eigenvalue_lambda(k, cfg.r, cfg.s, q) for k in range(cfg.nu)]
    if q == 0:
        pairs = [(0j, cfg.r * dB)]
    else:
        pairs.extend((l, dB) for l in lam)
    tol = 1e-6 * (1 + max(abs(v) for v, _ in pairs))
    return EigenMultiset(pairs, tol)


def _report(cfg, q, element_fn) -> SpectrumReport:
    ring = build_quantum_ring(cfg, q)
    x = element_fn(ring)
    M = mult_operator_matrix(ring, x)
    comp = eigen_multiset(M)
    theo = theoretical_spectrum(cfg, q)
    err = match_multisets(comp, theo)
    zt = max(comp.cluster_tol, 1e-6)
    return SpectrumReport(comp, theo, err, comp.multiplicity_of(0j, zt))


def computed_spectrum(cfg: GeometryConfig, q: complex | None = None) -> SpectrumReport:
    q = cfg.q_value if q is None else complex(q)
    return _report(cfg, q, lambda ring: c1_element(cfg, ring))


def euler_field_spectrum(cfg: GeometryConfig, q: complex | None, gamma) -> SpectrumReport:
    """Spectrum of ((r-s)H + gamma) for gamma pulled back from H^{>=2}(Z)."""
    q = cfg.q_value if q is None else complex(q)
    B = cfg.base_ring
    g = gamma if isinstance(gamma, AlgebraElement) else B.element(gamma)
    for i in np.nonzero(np.abs(g.coeffs) > 0)[0]:
        if B.degrees[i] < 2:
            raise ConfigError("gamma must be a class of degree >= 2 on the base")
    return _report(cfg, q, lambda ring: cfg.nu * ring.H() + ring.from_base(g))


def c1_matrix_in_Q(cfg: GeometryConfig) -> list:
    """Matrices M_k with c1* = sum_k Q^k M_k, Q = q^(r-s).

    Obtained exactly by interpolating rings built at integer values of Q
    (entries are then integers for integral base data).
    """
    nodes = list(range(cfg.r + 2))
    mats = []
    for Qv in nodes:
        ring = BundleRing(cfg, 1.0, q_power=Qv)
        mats.append(mult_operator_matrix(ring, c1_element(cfg, ring)))
    deg = cfg.r
    # Newton divided differences on nodes 0..deg, exact for integer nodes
    n = mats[0].shape[0]
    table = [np.array(m, dtype=complex) for m in mats[: deg + 1]]
    newton = [table[0]]
    for j in range(1, deg + 1):
        table = [(table[i + 1] - table[i]) / j for i in range(len(table) - 1)]
        newton.append(table[0])
    # convert Newton form prod_{i<j}(Q - i) to monomials
    poly = [np.zeros((n, n), complex) for _ in range(deg + 1)]
    basis = [Fraction(1)]
    for j in range(deg + 1):
        for k, b in enumerate(basis):
            poly[k] = poly[k] + float(b) * newton[j]
        nxt = [Fraction(0)] * (len(basis) + 1)
        for k, b in enumerate(basis):
            nxt[k] -= b * j
            nxt[k + 1] += b
        basis = nxt
    check = sum(p * float(nodes[-1]) ** k for k, p in enumerate(poly))
    if np.abs(check - mats[-1]).max() > 1e-9 * (1 + np.abs(mats[-1]).max()):
        raise NumericalError("c1 matrix is not polynomial of the expected degree in q^(r-s)")
    return poly


def char_poly_block_check(cfg: GeometryConfig, q: complex | None = None, dps: int = 60) -> float:
    """max coefficient error between det(lambda - c1*) and the block product.

    The block polynomial is lambda^s (lambda^(r-s) - (r-s)^(r-s) (-1)^s q^(r-s)),
    raised to the power dim H*(Z).  Coefficients reach ~1e11 on desk-size
    examples, so both sides are formed in ``dps``-digit arithmetic from the
    exact matrix decomposition in q^(r-s).
    """
    q = cfg.q_value if q is None else complex(q)
    with mp.workdps(dps):
        Q = mp.mpc(q.real, q.imag) ** cfg.nu
        parts = c1_matrix_in_Q(cfg)
        n = parts[0].shape[0]
        M = mp.matrix(n, n)
        for k, P in enumerate(parts):
            Qk = Q ** k
            for i, j in zip(*np.nonzero(P)):
                M[int(i), int(j)] += Qk * mp.mpc(P[i, j].real, P[i, j].imag)
        computed = _charpoly_mp(M)
        nu = cfg.nu
        block = [mp.mpc(0)] * (cfg.r + 1)
        block[0] = mp.mpc(1)
        block[nu] = -(nu ** nu) * (-1) ** cfg.s * Q
        expected = [mp.mpc(1)]
        for _ in range(cfg.base_dim):
            expected = _poly_mul_mp(expected, block)
        return float(max(abs(a - b) for a, b in zip(computed, expected)))


def _poly_mul_mp(a, b):
    out = [mp.mpc(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _charpoly_mp(M) -> list:
    """Coefficients (highest first) of det(lambda I - M), Faddeev-LeVerrier."""
    n = M.rows
    c = [mp.mpc(1)] + [mp.mpc(0)] * n
    Mk = mp.zeros(n, n)
    I = mp.eye(n)
    for k in range(1, n + 1):
        Mk = M * (Mk + c[k - 1] * I)
        tr = mp.fsum(Mk[i, i] for i in range(n))
        c[k] = -tr / k
    return c
