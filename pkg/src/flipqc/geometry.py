"""Base rings, projective-bundle rings and the extremal quantum rings of P(V) and T."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import AlgebraElement, GradedAlgebra, tensor_algebra
from .errors import ConfigError

GENERICITY_TOL = 1e-6
ROOT_BOUND = 0.3


# -- base spaces ----------------------------------------------------------------

@dataclass(frozen=True)
class BaseSpec:
    """point | projective(n) | product(factors) | explicit(algebra).

    ``explicit`` bases may carry ``c1`` (coefficients of c_1(TZ)) and
    ``tangent_roots`` (coefficient vectors of the Chern roots of TZ, used
    for its Gamma class); both default to zero.
    """

    kind: str = "point"
    n: int = 0
    factors: tuple = ()
    algebra: GradedAlgebra | None = None
    c1: tuple | None = None
    tangent_roots: tuple = ()

    @staticmethod
    def point() -> "BaseSpec":
        return BaseSpec("point")

    @staticmethod
    def projective(n: int) -> "BaseSpec":
        if n < 0:
            raise ConfigError("projective space dimension must be >= 0")
        return BaseSpec("projective", n=int(n))

    @staticmethod
    def product(*factors: "BaseSpec") -> "BaseSpec":
        return BaseSpec("product", factors=tuple(factors))

    @staticmethod
    def explicit(algebra: GradedAlgebra, c1=None, tangent_roots=()) -> "BaseSpec":
        return BaseSpec("explicit", algebra=algebra, c1=None if c1 is None else tuple(c1),
                        tangent_roots=tuple(tuple(t) for t in tangent_roots))

    def factor_list(self) -> list:
        if self.kind == "product":
            out = []
            for f in self.factors:
                out.extend(f.factor_list())
            return out
        return [self]

    def describe(self) -> str:
        if self.kind == "point":
            return "pt"
        if self.kind == "projective":
            return f"P^{self.n}"
        if self.kind == "product":
            return " x ".join(f.describe() for f in self.factors) or "pt"
        return f"explicit(dim={self.algebra.dim})"


def _projective_ring(n: int, label: str = "h") -> GradedAlgebra:
    dim = n + 1
    c = np.zeros((dim, dim, dim))
    for i in range(dim):
        for j in range(dim - i):
            c[i, j, i + j] = 1
    labels = ["1"] + [label if k == 1 else f"{label}^{k}" for k in range(1, dim)]
    return GradedAlgebra(labels, [2 * k for k in range(dim)], c, 0, n)


def build_base_ring(spec: BaseSpec) -> GradedAlgebra:
    """H*(Z) for the supported base specs (products via the Kunneth tensor product)."""
    if spec.kind == "point":
        return GradedAlgebra(["1"], [0], np.ones((1, 1, 1)), 0, 0)
    if spec.kind == "projective":
        return _projective_ring(spec.n)
    if spec.kind == "product":
        factors = spec.factor_list()
        if not factors:
            return build_base_ring(BaseSpec.point())
        ring = None
        for idx, f in enumerate(factors):
            if f.kind == "projective":
                R = _projective_ring(f.n, f"h{idx + 1}")
            else:
                R = build_base_ring(f)
            ring = R if ring is None else tensor_algebra(ring, R)
        return ring
    if spec.kind == "explicit":
        if spec.algebra is None or spec.algebra.top_index is None:
            raise ConfigError("explicit base needs an algebra with a top class")
        return spec.algebra
    raise ConfigError(f"unsupported base spec {spec.kind!r}")


def _factor_generators(spec: BaseSpec, ring: GradedAlgebra) -> list:
    """(factor, hyperplane generator element or None) for each factor."""
    factors = spec.factor_list()
    out = []
    if spec.kind == "projective":
        return [(spec, ring.basis(1) if spec.n >= 1 else None)]
    if spec.kind != "product":
        return [(f, None) for f in factors]
    dims = [build_base_ring(f).dim for f in factors]
    for idx, f in enumerate(factors):
        if f.kind == "projective" and f.n >= 1:
            stride = int(np.prod(dims[idx + 1:])) if idx + 1 < len(dims) else 1
            out.append((f, ring.basis(stride)))
        else:
            out.append((f, None))
    return out


def base_c1(spec: BaseSpec, ring: GradedAlgebra) -> AlgebraElement:
    if spec.kind == "explicit":
        return ring.zero() if spec.c1 is None else ring.element(spec.c1)
    c1 = ring.zero()
    for f, h in _factor_generators(spec, ring):
        if h is not None:
            c1 = c1 + (f.n + 1) * h
    return c1


def base_tangent_roots(spec: BaseSpec, ring: GradedAlgebra) -> list:
    """Chern roots of TZ (plus trivial summands, which do not affect any class used here)."""
    if spec.kind == "explicit":
        return [ring.element(t) for t in spec.tangent_roots]
    roots = []
    for f, h in _factor_generators(spec, ring):
        if h is not None:
            roots.extend([h] * (f.n + 1))
    return roots


# -- configuration ----------------------------------------------------------------

@dataclass
class GeometryConfig:
    """Data of the local model: ranks, base, Chern roots and the value of q.

    ``mode='equivariant'``: rho and sigma are complex scalars (torus weights).
    ``mode='nilpotent'``: rho and sigma are degree-2 classes of the base ring,
    given as AlgebraElements or coefficient vectors.
    Without an explicit mode, scalar roots select equivariant mode and
    missing roots select nilpotent mode with all roots zero.
    """

    r: int
    s: int = 0
    base: BaseSpec = field(default_factory=BaseSpec.point)
    mode: str | None = None
    rho: Sequence = ()
    sigma: Sequence = ()
    q_value: complex = 1.0
    check_bounds: bool = True

    def __post_init__(self):
        self.r = int(self.r)
        self.s = int(self.s)
        if self.r < 1 or self.s < 0 or self.s >= self.r:
            raise ConfigError(f"need r >= 1 and 0 <= s < r, got r={self.r}, s={self.s}")
        if self.mode is None:
            given = list(self.rho) + list(self.sigma)
            scalar = bool(given) and all(np.isscalar(x) for x in given)
            self.mode = "equivariant" if scalar else "nilpotent"
        if self.mode not in ("equivariant", "nilpotent"):
            raise ConfigError(f"unknown root mode {self.mode!r}")
        rho = list(self.rho) if len(self.rho) else [0.0] * self.r
        sigma = list(self.sigma) if len(self.sigma) else [0.0] * self.s
        if len(rho) != self.r or len(sigma) != self.s:
            raise ConfigError("rho must have r entries and sigma s entries")
        self.q_value = complex(self.q_value)
        self.base_ring = build_base_ring(self.base)
        if self.mode == "equivariant":
            self.rho = tuple(complex(x) for x in rho)
            self.sigma = tuple(complex(x) for x in sigma)
            if self.check_bounds and any(abs(x) > ROOT_BOUND + 1e-12 for x in self.rho + self.sigma):
                raise ConfigError(f"equivariant roots must satisfy |root| <= {ROOT_BOUND}")
            bad = genericity_violations(self.rho, self.sigma)
            if bad:
                raise ConfigError("non-generic equivariant roots: " + "; ".join(bad))
        else:
            B = self.base_ring
            conv = []
            for x in rho + sigma:
                e = x if isinstance(x, AlgebraElement) else (B.zero() if np.isscalar(x) and x == 0 else B.element(x))
                if e.parent is not B:
                    raise ConfigError("nilpotent roots must live in the base ring")
                for i in np.nonzero(np.abs(e.coeffs) > 0)[0]:
                    if B.degrees[i] != 2:
                        raise ConfigError("nilpotent roots must be classes of degree 2")
                conv.append(e)
            self.rho = tuple(conv[: self.r])
            self.sigma = tuple(conv[self.r:])

    @property
    def nu(self) -> int:
        return self.r - self.s

    @property
    def equivariant(self) -> bool:
        return self.mode == "equivariant"

    @property
    def base_dim(self) -> int:
        return self.base_ring.dim

    def with_q(self, q: complex) -> "GeometryConfig":
        return GeometryConfig(self.r, self.s, self.base, self.mode, self.rho, self.sigma, q, self.check_bounds)

    def rho_base(self) -> list:
        """rho_i as base-ring elements (scalars times the unit in equivariant mode)."""
        B = self.base_ring
        return [B.scalar(x) if self.equivariant else x for x in self.rho]

    def sigma_base(self) -> list:
        B = self.base_ring
        return [B.scalar(x) if self.equivariant else x for x in self.sigma]

    def c1_V(self) -> AlgebraElement:
        return sum(self.rho_base(), self.base_ring.zero())

    def c1_Vp(self) -> AlgebraElement:
        return sum(self.sigma_base(), self.base_ring.zero())

    def c1_Z(self) -> AlgebraElement:
        return base_c1(self.base, self.base_ring)

    def describe(self) -> dict:
        def enc(x):
            if isinstance(x, AlgebraElement):
                return [[float(c.real), float(c.imag)] for c in x.coeffs]
            return [float(x.real), float(x.imag)]
        return {"r": self.r, "s": self.s, "base": self.base.describe(), "mode": self.mode,
                "rho": [enc(x) for x in self.rho], "sigma": [enc(x) for x in self.sigma],
                "q": [self.q_value.real, self.q_value.imag]}


def _dist_to_int(x: complex) -> float:
    return abs(x - round(x.real))


def genericity_violations(rho, sigma, tol: float = GENERICITY_TOL) -> list:
    bad = []
    for i in range(len(rho)):
        for k in range(i + 1, len(rho)):
            if _dist_to_int(rho[i] - rho[k]) < tol:
                bad.append(f"rho_{i + 1} - rho_{k + 1} is an integer")
    for j in range(len(sigma)):
        for l in range(j + 1, len(sigma)):
            if _dist_to_int(sigma[j] - sigma[l]) < tol:
                bad.append(f"sigma_{j + 1} - sigma_{l + 1} is an integer")
    for i in range(len(rho)):
        for j in range(len(sigma)):
            if _dist_to_int(rho[i] + sigma[j]) < tol:
                bad.append(f"rho_{i + 1} + sigma_{j + 1} is an integer")
    return bad


def sample_equivariant_params(seed: int, r: int, s: int, margin: float = 0.02):
    """Deterministic generic roots in the disc |x| <= 0.3.

    Pairwise separations keep a distance ``margin`` from the integers so
    that localization denominators stay well conditioned.
    """
    rng = np.random.default_rng(int(seed))

    def draw(n):
        rad = ROOT_BOUND * np.sqrt(rng.uniform(0, 1, n))
        ang = rng.uniform(0, 2 * np.pi, n)
        return rad * np.exp(1j * ang)

    rho, sigma = draw(r), draw(s)
    while genericity_violations(rho, sigma, margin):
        # perturb and pull back into the disc
        rho = rho + 0.05 * draw(r)
        sigma = sigma + 0.05 * draw(s)
        rho = np.where(np.abs(rho) > ROOT_BOUND, rho * ROOT_BOUND / np.abs(rho) * 0.999, rho)
        sigma = np.where(np.abs(sigma) > ROOT_BOUND, sigma * ROOT_BOUND / np.abs(sigma) * 0.999, sigma)
    return [complex(x) for x in rho], [complex(x) for x in sigma]


# -- bundle rings ---------------------------------------------------------------------

class BundleRing(GradedAlgebra):
    """H*(Z)[H]/(relation) with basis index b * r + a  <->  x_b H^a.

    The relation is prod(rho_i + H) = q^(r-s) prod(sigma_j - H); at q = 0 it
    is the classical presentation of H*(P(V)).
    """

    def __init__(self, cfg: GeometryConfig, q: complex, q_power: complex | None = None):
        self.cfg = cfg
        self.q = complex(q)
        # q_power overrides the value of q^(r-s) in the relation
        self.q_power = None if q_power is None else complex(q_power)
        self.base = cfg.base_ring
        self.r = cfg.r
        B, r = self.base, cfg.r
        dB = B.dim
        # relation polynomial P(H) = sum_k p_k H^k (p_k base elements), monic in H
        P = _poly_from_roots(B, cfg.rho_base(), +1)
        qn = self.q ** cfg.nu if self.q_power is None else self.q_power
        if qn != 0:
            Q = _poly_from_roots(B, cfg.sigma_base(), -1)
            for k, c in enumerate(Q):
                P[k] = P[k] - qn * c
        self.relation = P
        # H^n in normal form for n <= 2r - 2, as arrays (dB, r)
        red = []
        for n in range(2 * r - 1):
            if n < r:
                R = np.zeros((dB, r), complex)
                R[B.unit_index, n] = 1
            else:
                prev = red[-1]
                R = np.zeros((dB, r), complex)
                R[:, 1:] = prev[:, :-1]
                top = B.element(prev[:, r - 1])
                for k in range(r):
                    R[:, k] -= (top * P[k]).coeffs
            red.append(R)
        self._powers = red
        # (b1,a1)*(b2,a2) = sum_b cB[b1,b2,b] x_b * H^{a1+a2}
        cB = B.struct_consts
        Rarr = np.array(red)  # (2r-1, dB, r)
        # x_b * (base element v) -> coefficients: sum_{b'} cB[b, b', b3] v[b']
        # struct[b1 a1, b2 a2, b3 a3] = sum_{b,b'} cB[b1,b2,b] cB[b,b',b3] R[a1+a2][b',a3]
        idx = np.add.outer(np.arange(r), np.arange(r))
        Rpair = Rarr[idx]  # (r, r, dB, r)
        c = np.einsum("ijb,bkm,pqka->ipjqma", cB, cB, Rpair)
        n = dB * r
        labels = []
        for bl in B.basis_labels:
            for a in range(r):
                h = "" if a == 0 else ("H" if a == 1 else f"H^{a}")
                if bl == "1":
                    labels.append(h or "1")
                else:
                    labels.append(bl + ("*" + h if h else ""))
        degrees = [B.degrees[b] + 2 * a for b in range(dB) for a in range(r)]
        deformed = qn != 0 or (cfg.equivariant and any(x != 0 for x in cfg.rho + cfg.sigma))
        top = B.top_index * r + (r - 1)
        super().__init__(labels, degrees, c.reshape(n, n, n), B.unit_index * r, top, deformed)

    def H(self) -> AlgebraElement:
        if self.r > 1:
            return self.basis(self.base.unit_index * self.r + 1)
        # r = 1: the relation is linear in H
        return self.from_base(-self.relation[0])

    def from_base(self, alpha: AlgebraElement) -> AlgebraElement:
        v = np.zeros((self.base.dim, self.r), complex)
        v[:, 0] = alpha.coeffs
        return self.from_array(v)

    def from_array(self, arr) -> AlgebraElement:
        return self.element(np.asarray(arr, complex).reshape(-1))

    def to_array(self, x: AlgebraElement) -> np.ndarray:
        return x.coeffs.reshape(self.base.dim, self.r)

    def H_coefficients(self, x: AlgebraElement) -> list:
        """x = sum_a alpha_a H^a with alpha_a base elements."""
        arr = self.to_array(x)
        return [self.base.element(arr[:, a]) for a in range(self.r)]

    def from_H_polynomial(self, coeffs) -> AlgebraElement:
        """sum_a c_a H^a for base elements (or scalars) c_a of any length (reduced)."""
        out = self.zero()
        Hp = self.unit()
        Hel = self.H()
        for c in coeffs:
            cb = c if isinstance(c, AlgebraElement) else self.base.scalar(c)
            out = out + self.from_base(cb) * Hp
            Hp = Hp * Hel
        return out


def _poly_from_roots(B: GradedAlgebra, roots, sign: int) -> list:
    """Coefficients (base elements) of prod(root + sign*H) in powers of H."""
    coeffs = [B.unit()]
    for x in roots:
        new = [B.zero() for _ in range(len(coeffs) + 1)]
        for k, c in enumerate(coeffs):
            new[k] = new[k] + c * x
            new[k + 1] = new[k + 1] + c * sign
        coeffs = new
    return coeffs


def build_quantum_ring(cfg: GeometryConfig, q: complex | None = None) -> BundleRing:
    q = cfg.q_value if q is None else q
    return BundleRing(cfg, q)


def build_classical_ring(cfg: GeometryConfig) -> BundleRing:
    return BundleRing(cfg, 0.0)


def c1_element(cfg: GeometryConfig, ring: BundleRing) -> AlgebraElement:
    """c1(T) = (r-s)H + c1(Z) + c1(V) + c1(V') (for s = 0 this is c1 of P(V))."""
    base_part = cfg.c1_Z() + cfg.c1_V() + cfg.c1_Vp()
    return cfg.nu * ring.H() + ring.from_base(base_part)


# -- fixed loci ---------------------------------------------------------------------------

@dataclass
class FixedLocusData:
    T_restrictions: list      # value of H at F_k: -rho_k
    T_euler: list             # e(N_{F_k|T})
    Tp_restrictions: list     # value of H' at F'_l: -sigma_l
    Tp_euler: list            # e(N_{F'_l|T'})


def euler_T(rho, sigma, k: int) -> complex:
    e = 1.0 + 0j
    for sj in sigma:
        e *= sj + rho[k]
    for i, ri in enumerate(rho):
        if i != k:
            e *= ri - rho[k]
    return e


def euler_Tp(rho, sigma, l: int) -> complex:
    e = 1.0 + 0j
    for ri in rho:
        e *= ri + sigma[l]
    for j, sj in enumerate(sigma):
        if j != l:
            e *= sj - sigma[l]
    return e


def fixed_locus_data(cfg: GeometryConfig) -> FixedLocusData:
    if not cfg.equivariant:
        raise ConfigError("fixed-point data needs equivariant roots")
    rho, sigma = cfg.rho, cfg.sigma
    Te = [euler_T(rho, sigma, k) for k in range(cfg.r)]
    Tpe = [euler_Tp(rho, sigma, l) for l in range(cfg.s)]
    if any(abs(e) == 0 for e in Te + Tpe):
        raise ConfigError("vanishing Euler class at a fixed point")
    return FixedLocusData([-x for x in rho], Te, [-x for x in sigma], Tpe)
