"""Modified J- and I-functions of the local models in closed form.

    J(q, -z) = sum_d (q/z)^{(r-s)d - c1(T)} prod_i prod_{m=1}^d (rho_i + H - m)^{-1}
                                            prod_j prod_{m=0}^{d-1} (sigma_j - H + m)
    I(q', -z) = sum_d (q'z)^{(r-s)d + c1(T')} prod_j prod_{m=1}^d (sigma_j + H' - m)^{-1}
                                             prod_i prod_{m=0}^{d-1} (rho_i - H' + m)

with q' = 1/q.  For s = 0 the first series is the modified J-function of
P(V).  Gamma ratios only ever appear as these finite products, so the
nilpotent case rho = 0 never meets a pole.

Nilpotent roots give values in the classical ring of P(V); equivariant roots
give :class:`LocalizedClass` values, one base-ring value per fixed locus.
Every evaluation takes arg(q/z) explicitly: (q/z)^w = exp(w (ln|q/z| + i arg)).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import germs
from .algebra import AlgebraElement, GradedAlgebra, alg_integrate
from .errors import ConfigError, NumericalError, PrecisionWarning
from .geometry import BundleRing, GeometryConfig, build_classical_ring, c1_element
from .localization import LocalizedClass, from_function, localization_pairing, localize, residue_pushforward

MODES = ("J-P(V)", "J-T", "I-T'", "Kappa")
_TERM_TOL = 1e-18
_MAX_LOG_TERM = 575.0        # e^575 ~ 1e250: beyond this the series is useless in double precision


def _log_ratio(x_abs: float, arg: float | None, x: complex | None = None) -> complex:
    if x_abs <= 0:
        raise ConfigError("|q/z| must be positive")
    if arg is None:
        arg = 0.0 if x is None else float(np.angle(x))
    return complex(math.log(x_abs), float(arg))


def _exp_class(w, L: complex):
    """(q/z)^{-w} = exp(-w L) for a ring element, a LocalizedClass or a scalar."""
    if isinstance(w, AlgebraElement):
        return (-L * w).apply(germs.EXP)
    if isinstance(w, LocalizedClass):
        return w.map(lambda v: (-L * v).apply(germs.EXP))
    return np.exp(-L * complex(w))


def _norm(x) -> float:
    if isinstance(x, AlgebraElement):
        return float(np.abs(x.coeffs).max())
    if isinstance(x, LocalizedClass):
        return max((float(np.abs(v.coeffs).max()) for v in x.values), default=0.0)
    return abs(complex(x))


# -- series container ---------------------------------------------------------------

@dataclass
class QZSeries:
    """sum_{d <= truncation} (q/z)^{direction (r-s) d - w} terms[d].

    ``step(prev, d)`` produces terms[d] from terms[d-1]; the series is
    extended on demand.  ``multiplier`` (if set) multiplies term d by a
    polynomial in (direction (r-s) d - w), which is how q-derivatives act.
    """

    step: Callable
    first: object
    exponent_base: object
    nu: int
    mode: str
    direction: int = 1
    asymptotic: bool = False
    deriv_order: int = 0
    terms: list = field(default_factory=list)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown series mode {self.mode!r}")
        if not self.terms:
            self.terms = [self.first]

    @property
    def truncation(self) -> int:
        return len(self.terms) - 1

    def extend(self, D: int) -> None:
        while len(self.terms) <= D:
            d = len(self.terms)
            self.terms.append(self.step(self.terms[-1], d))

    def term(self, d: int):
        """Coefficient of (q/z)^{direction nu d - w}, with the derivative factor applied."""
        self.extend(d)
        t = self.terms[d]
        if self.deriv_order:
            f = self.exponent_factor(d)
            for _ in range(self.deriv_order):
                t = t * f
        return t

    def exponent_factor(self, d: int):
        """direction nu d - w."""
        return -self.exponent_base + self.direction * self.nu * d

    def evaluate(self, L: complex, D: int | None = None, max_terms: int = 4000):
        """Value at log(q/z) = L; adaptive cutoff unless D is given.

        Convergent series stop once terms fall 1e-18 below the largest;
        asymptotic series are cut at their smallest term.
        """
        L = complex(L)
        lin = self.direction * self.nu * L
        if D is not None:
            total = None
            for d in range(D + 1):
                w = self.term(d) * np.exp(lin * d)
                total = w if total is None else total + w
            return total * _exp_class(self.exponent_base, L), D
        x = math.exp(L.real)
        total = None
        peak = 0.0
        prev_norm = math.inf
        best = None
        d = 0
        while True:
            if d > max_terms:
                raise NumericalError(f"series did not settle within {max_terms} terms (|q/z| = {x:.3g})")
            if lin.real * d > _MAX_LOG_TERM:
                raise NumericalError(f"|q/z| = {x:.3g} is too large for double-precision summation")
            w = self.term(d) * np.exp(lin * d)
            n = _norm(w)
            if self.asymptotic and d > 1 and n > prev_norm:
                best = d - 1
                break
            total = w if total is None else total + w
            peak = max(peak, n)
            if not self.asymptotic and d > x + 4 and n <= _TERM_TOL * peak and prev_norm <= _TERM_TOL * peak * 1e3:
                break
            if self.asymptotic and n <= _TERM_TOL * peak and d > 1:
                break
            prev_norm = n
            d += 1
        if math.log(max(peak, 1e-300)) - math.log(max(_norm(total), 1e-300)) > 6 * math.log(10):
            warnings.warn("cancellation above 1e6 in the series sum", PrecisionWarning, stacklevel=2)
        used = d if best is None else best
        return total * _exp_class(self.exponent_base, L), used


def q_derivative(series: QZSeries, order: int) -> QZSeries:
    """(q d/dq)^order, acting termwise on the q-exponents."""
    if order < 0:
        raise ConfigError("derivative order must be >= 0")
    return replace(series, deriv_order=series.deriv_order + order, terms=list(series.terms))


# -- J-function of T (and of P(V) for s = 0) -------------------------------------------

def _classical_ring(cfg: GeometryConfig, ring: BundleRing | None) -> BundleRing:
    R = ring or build_classical_ring(cfg)
    if R.q != 0 or R.q_power not in (None, 0):
        raise ConfigError("J-function coefficients live in the classical ring")
    return R


def _j_factor_ring(R, rho, sigma, H, d):
    f = R.unit()
    for x in rho:
        f = f * (R.from_base(x) + H - d).inverse()
    for y in sigma:
        f = f * (R.from_base(y) - H + (d - 1))
    return f


def _j_factor_scalar(rho, sigma, h, d):
    f = 1.0 + 0j
    for x in rho:
        f /= x + h - d
    for y in sigma:
        f *= y - h + (d - 1)
    return f


def modified_j_series(cfg: GeometryConfig, ring: BundleRing | None = None) -> QZSeries:
    """The modified J-function of T (of P(V) when s = 0) as a QZSeries."""
    mode = "J-P(V)" if cfg.s == 0 else "J-T"
    if not cfg.equivariant:
        R = _classical_ring(cfg, ring)
        H = R.H()
        rho, sigma = cfg.rho_base(), cfg.sigma_base()
        step = lambda prev, d: prev * _j_factor_ring(R, rho, sigma, H, d)  # noqa: E731
        return QZSeries(step, R.unit(), c1_element(cfg, R), cfg.nu, mode)
    rho, sigma = cfg.rho, cfg.sigma
    B = cfg.base_ring
    hs = [-x for x in rho]
    first = from_function(cfg, lambda k: B.unit())

    def step(prev, d):
        return LocalizedClass(cfg, "T", [v * _j_factor_scalar(rho, sigma, h, d) for v, h in zip(prev.values, hs)])

    c1Z = cfg.c1_Z()
    w = from_function(cfg, lambda k: c1Z + (cfg.nu * hs[k] + sum(rho) + sum(sigma)))
    return QZSeries(step, first, w, cfg.nu, mode)


@dataclass
class TTwist:
    """Big-quantum parameters t^i phi_i with phi_i pulled back from H^{>=2}(Z)."""

    entries: list = field(default_factory=list)   # (t_i, phi_i, degree)

    def __post_init__(self):
        out = []
        for e in self.entries:
            t, phi = e[0], e[1]
            deg = e[2] if len(e) > 2 else None
            if not isinstance(phi, AlgebraElement):
                raise ConfigError("twist classes must be base-ring elements")
            A = phi.parent
            degs = {A.degrees[i] for i in np.nonzero(np.abs(phi.coeffs) > 0)[0]}
            if deg is None:
                if len(degs) != 1:
                    raise ConfigError("twist class must be homogeneous (or pass its degree)")
                deg = degs.pop()
            if deg < 2 or any(g < 2 for g in degs):
                raise ConfigError("twist classes must have degree >= 2")
            out.append((complex(t), phi, int(deg)))
        self.entries = out


def t_twist_prefactor(tw: TTwist, z: complex, base: GradedAlgebra) -> AlgebraElement:
    """exp(-sum z^{deg phi_i - 1} t^i phi_i) in the base ring."""
    x = base.zero()
    for t, phi, deg in tw.entries:
        if phi.parent is not base:
            raise ConfigError("twist class belongs to another ring")
        x = x + phi * (t * complex(z) ** (deg - 1))
    return (-x).apply(germs.EXP)


def t_twist_apply(tw: TTwist, value, z: complex):
    """Multiply a J-value by the twist prefactor (pulled back from the base)."""
    if not tw.entries:
        return value
    base = tw.entries[0][1].parent
    pre = t_twist_prefactor(tw, z, base)
    if isinstance(value, LocalizedClass):
        return value.map(lambda v: v * pre)
    if isinstance(value, AlgebraElement):
        if isinstance(value.parent, BundleRing):
            return value.parent.from_base(pre) * value
        return value * pre
    raise ConfigError("twist applies to ring elements or localized classes")


def modified_j_eval(cfg: GeometryConfig, q: complex, z: complex, arg_q_over_z: float | None = None,
                    D: int | None = None, twist: TTwist | None = None, ring: BundleRing | None = None,
                    deriv_order: int = 0):
    """Value of the modified J-function at (q, z) on the branch ``arg_q_over_z``."""
    q, z = complex(q), complex(z)
    if q == 0:
        L = _log_ratio(1.0, 0.0)
        ser = modified_j_series(cfg, ring)
        val = ser.term(0)
    else:
        L = _log_ratio(abs(q / z), arg_q_over_z, q / z)
        ser = q_derivative(modified_j_series(cfg, ring), deriv_order)
        val, _ = ser.evaluate(L, D)
    return t_twist_apply(twist, val, z) if twist is not None else val


# -- I-function of T' ---------------------------------------------------------------------

def modified_i_series(cfg: GeometryConfig) -> QZSeries:
    """Modified I-function of T' (equivariant roots) as a QZSeries in (q/z)^{-1}."""
    if not cfg.equivariant:
        raise ConfigError("the I-function of T' is evaluated with equivariant roots")
    rho, sigma = cfg.rho, cfg.sigma
    B = cfg.base_ring
    hs = [-y for y in sigma]
    first = from_function(cfg, lambda l: B.unit(), "T'")

    def step(prev, d):
        vals = []
        for v, h in zip(prev.values, hs):
            f = 1.0 + 0j
            for y in sigma:
                f /= y + h - d
            for x in rho:
                f *= x - h + (d - 1)
            vals.append(v * f)
        return LocalizedClass(cfg, "T'", vals)

    c1Z = cfg.c1_Z()
    w = from_function(cfg, lambda l: c1Z + (-cfg.nu * hs[l] + sum(rho) + sum(sigma)), "T'")
    return QZSeries(step, first, w, cfg.nu, "I-T'", direction=-1, asymptotic=True)


def i_tprime_eval(cfg: GeometryConfig, q_prime: complex, z: complex, arg_qp_z: float | None = None,
                  D: int | None = None, deriv_order: int = 0) -> LocalizedClass:
    """Modified I-function of T' at (q', z); q' = 1/q, branch from arg(q' z).

    The series diverges (factorials in the numerator); without ``D`` it is
    cut at its smallest term.
    """
    qp, z = complex(q_prime), complex(z)
    ser = modified_i_series(cfg)
    if deriv_order:
        ser = q_derivative(ser, deriv_order)
    if qp == 0:
        return ser.term(0)
    Lp = _log_ratio(abs(qp * z), arg_qp_z, qp * z)
    val, _ = ser.evaluate(-Lp, D)
    return val


# -- kappa_m ---------------------------------------------------------------------------------

def _kappa_log_t(cfg: GeometryConfig, m: int, L: complex) -> complex:
    return -1j * math.pi * (2 * m + cfg.s) + cfg.nu * L


def kappa_meijer_params(cfg: GeometryConfig):
    from .meijer import MeijerParams
    if cfg.equivariant:
        rho, sigma = cfg.rho, cfg.sigma
    else:
        if cfg.base_dim != 1 or any(np.abs(x.coeffs).max() > 0 for x in cfg.rho + cfg.sigma):
            raise ConfigError("Meijer route for nilpotent roots needs Z = pt (all roots zero)")
        rho, sigma = [0.0] * cfg.r, [0.0] * cfg.s
    return MeijerParams.of([1 - y for y in sigma], list(rho)), rho, sigma


def kappa_eval(cfg: GeometryConfig, m: int, q: complex, z: complex, arg_q_over_z: float | None = None,
               path: str = "meijer") -> AlgebraElement:
    """kappa_m = e^{-pi i c1(V')} G^{r,0}_{s,r}(1 - sigma; rho | e^{-pi i (2m+s)} (q/z)^{r-s}).

    ``path='meijer'`` evaluates the G-function; ``path='residue'`` pushes the
    Gamma-weighted J-series forward by residues (equivariant roots), or
    extracts the top fibre coefficient (nilpotent roots).
    """
    q, z = complex(q), complex(z)
    L = _log_ratio(abs(q / z), arg_q_over_z, q / z)
    B = cfg.base_ring
    if path == "meijer":
        from .meijer import meijer_eval
        P, rho, sigma = kappa_meijer_params(cfg)
        G = meijer_eval(P, _kappa_log_t(cfg, m, L)).complex()
        return B.scalar(np.exp(-1j * math.pi * sum(sigma)) * G)
    if path != "residue":
        raise ConfigError(f"unknown kappa path {path!r}")
    return _kappa_residue(cfg, m, L)


def _gamma_weight_scalar(cfg, m, h):
    """e^{2 pi i m H} e^{pi i s H} prod Gamma(1 + rho_i + H) / prod Gamma(1 - sigma_j + H) at H = h."""
    v = np.exp(1j * math.pi * (2 * m + cfg.s) * h)
    for x in cfg.rho:
        v *= germs.germ_value(germs.GAMMA_1P, x + h)
    for y in cfg.sigma:
        v *= germs.germ_value(germs.RGAMMA_1P, -y + h)
    return v


def _kappa_residue(cfg: GeometryConfig, m: int, L: complex) -> AlgebraElement:
    B = cfg.base_ring
    if cfg.equivariant:
        J = modified_j_series(cfg)
        val, _ = J.evaluate(L)
        W = sum(cfg.rho) + sum(cfg.sigma)
        pref = np.exp(L * W) * np.exp(-1j * math.pi * sum(cfg.sigma))
        hs = [-x for x in cfg.rho]
        jvals = {complex(h): v for h, v in zip(hs, val.values)}

        def F(h):
            # J already carries (q/z)^{-c1}; (q/z)^{c1(V)+c1(V')} restores the Meijer normalization
            return jvals[complex(h)] * (_gamma_weight_scalar(cfg, m, h) * pref)

        cZ = cfg.c1_Z()
        out = residue_pushforward(cfg, F)
        return out * (L * cZ).apply(germs.EXP)
    R = build_classical_ring(cfg)
    H = R.H()
    J = modified_j_series(cfg, R)
    val, _ = J.evaluate(L)
    weight = ((2j * math.pi * m + 1j * math.pi * cfg.s) * H).apply(germs.EXP)
    for x in cfg.rho_base():
        weight = weight * (R.from_base(x) + H).apply(germs.GAMMA_1P)
    for y in cfg.sigma_base():
        weight = weight * (H - R.from_base(y)).apply(germs.RGAMMA_1P)
    shift = R.from_base(cfg.c1_V() + cfg.c1_Vp() + cfg.c1_Z())
    pref = (L * shift).apply(germs.EXP) * (-1j * math.pi * R.from_base(cfg.c1_Vp())).apply(germs.EXP)
    total = val * weight * pref
    return R.H_coefficients(total)[cfg.r - 1]


# -- central charges -------------------------------------------------------------------

def _as_T_class(cfg, cls, ring):
    if isinstance(cls, LocalizedClass):
        return cls
    if isinstance(cls, AlgebraElement):
        return localize(cfg, cls)
    if np.isscalar(cls):
        return from_function(cfg, lambda k: cfg.base_ring.scalar(cls))
    raise ConfigError("class must be a LocalizedClass or a bundle-ring element")


def central_charge(cfg: GeometryConfig, cls, q: complex, z: complex, arg_q_over_z: float | None = None,
                   twist: TTwist | None = None, deriv_order: int = 0, route: str = "series",
                   ring: BundleRing | None = None) -> complex:
    """<J(q, -z), cls>: localization pairing on T, or integration over P(V) for nilpotent s = 0.

    ``route='meijer'`` uses the Meijer G representation of the pairing
    instead (Z = pt), which stays accurate for small |z|.
    """
    if route == "meijer":
        from .asymptotics import central_charge_meijer
        return central_charge_meijer(cfg, cls, q, z, arg_q_over_z, deriv_order).value()
    if route != "series":
        raise ConfigError(f"unknown route {route!r}")
    if cfg.equivariant:
        J = modified_j_eval(cfg, q, z, arg_q_over_z, twist=twist, deriv_order=deriv_order)
        return complex(localization_pairing(cfg, J, _as_T_class(cfg, cls, ring)))
    if cfg.s != 0:
        raise ConfigError("pairings on the non-compact T need equivariant roots")
    R = _classical_ring(cfg, ring if ring is not None else (cls.parent if isinstance(cls, AlgebraElement) else None))
    J = modified_j_eval(cfg, q, z, arg_q_over_z, twist=twist, ring=R, deriv_order=deriv_order)
    if np.isscalar(cls):
        cls = R.scalar(cls)
    if not isinstance(cls, AlgebraElement) or cls.parent is not R:
        raise ConfigError("class must be an element of the classical ring of P(V)")
    return alg_integrate(R, J * cls)
