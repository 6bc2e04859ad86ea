"""Central charges through Meijer G-functions, and asymptotic checks along rays.

For Z = pt the pairings of the modified J-function with the classes

    psi(m) = Gamma_T Psi_m(1)        and        fm(l) = Gamma_T U(1'_l / e(N'_l))

are single Meijer G-functions (L = log(q/z)):

    <J, psi(m)> = (2 pi i)^s (q/z)^{-W} e^{-pi i sum sigma} G^{r,0}_{s,r}(1 - sigma; rho | t),
                  log t = -pi i (2m + s) + (r-s) L,  W = sum rho + sum sigma,
    <J, fm(l)>  = prod_{j != l} pi / sin(pi (sigma_j - sigma_l)) (q/z)^{-w_l} G^{r,1}_{s,r}(a; b | t'),
                  a = (1, 1 - sigma_j + sigma_l (j != l)), b = rho + sigma_l,
                  log t' = pi i (1 - s) + (r-s) L,  w_l = (r-s) sigma_l + W.

A (q d/dq)^i derivative multiplies the integrand by ((r-s) x - W)^i.  A
general class is expanded in these r classes first (for nilpotent roots and
s = 0 the classes Gamma Ch(O(m)) play the role of psi(m)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import AlgebraElement
from .charclasses import ch_line, gamma_Tprime, psi_m, relative_gamma_T
from .errors import ConfigError, NumericalError
from .fm import fm_coefficients, u_transform
from .geometry import GeometryConfig, build_classical_ring, fixed_locus_data
from .jfunctions import i_tprime_eval
from .localization import LocalizedClass, fixed_point_class
from .meijer import MeijerParams, ScaledComplex, meijer_eval

DEFAULT_ZGRID = tuple(np.geomspace(10 ** -0.5, 10 ** -2.5, 12))
_SNAP = 1e-10
_OVERFLOW_LOG = 690.0
_BOUND_SLOPE = -10.0


@dataclass(frozen=True)
class BasisClass:
    """psi(m) (kind 'psi') or fm(l) (kind 'fm'); used to skip the basis expansion."""

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in ("psi", "fm"):
            raise ConfigError(f"unknown basis class kind {self.kind!r}")


def psi_class(cfg: GeometryConfig, m: int):
    """Gamma_T Psi_m(1) (for nilpotent roots and s = 0: Gamma Ch(O(m)))."""
    if cfg.equivariant:
        return relative_gamma_T(cfg) * psi_m(cfg, m)
    R = build_classical_ring(cfg)
    return relative_gamma_T(cfg, ring=R) * psi_m(cfg, m, ring=R)


def fm_class(cfg: GeometryConfig, l: int) -> LocalizedClass:
    """Gamma_T U(1'_l / e(N'_l))."""
    return relative_gamma_T(cfg) * u_transform(cfg, fixed_point_class(cfg, l, "T'"))


def _require_point(cfg):
    if cfg.base_dim != 1:
        raise ConfigError("Meijer representation of central charges is implemented for Z = pt")
    if not cfg.equivariant:
        if cfg.s != 0:
            raise ConfigError("pairings on the non-compact T need equivariant roots")
        return [0.0] * cfg.r, []
    return list(cfg.rho), list(cfg.sigma)


def _deriv_poly(nu: int, W: complex, order: int):
    """Coefficients (low to high) of (nu x - W)^order."""
    p = np.array([1.0 + 0j])
    for _ in range(order):
        p = np.convolve(p, np.array([-W, nu], complex))
    return list(p)


def basis_charge(cfg: GeometryConfig, bc: BasisClass, L: complex, deriv_order: int = 0,
                 method: str = "auto") -> ScaledComplex:
    """(q d/dq)^i <J(q,-z), bc> at log(q/z) = L."""
    rho, sigma = _require_point(cfg)
    nu, s = cfg.nu, cfg.s
    W = sum(rho) + sum(sigma)
    if bc.kind == "psi":
        P = MeijerParams.of([1 - y for y in sigma], rho)
        Lt = -1j * math.pi * (2 * bc.index + s) + nu * L
        pref = ScaledComplex.from_log(-W * L - 1j * math.pi * sum(sigma), (2j * math.pi) ** s)
        res = meijer_eval(P, Lt, _deriv_poly(nu, W, deriv_order) if deriv_order else None, method)
        return pref * res.value
    if not cfg.equivariant:
        raise ConfigError("fm classes need equivariant roots")
    l = bc.index
    sl = sigma[l]
    a = [1.0] + [1 - sj + sl for j, sj in enumerate(sigma) if j != l]
    b = [ri + sl for ri in rho]
    P = MeijerParams.of(a, b, n=1)
    wl = nu * sl + W
    c = 1.0 + 0j
    for j, sj in enumerate(sigma):
        if j != l:
            c *= math.pi / np.sin(math.pi * (sj - sl))
    Lt = 1j * math.pi * (1 - s) + nu * L
    res = meijer_eval(P, Lt, _deriv_poly(nu, wl, deriv_order) if deriv_order else None, method)
    return ScaledComplex.from_log(-wl * L, c) * res.value


def _near_window(cfg, theta: float) -> list:
    """nu consecutive m's whose Meijer arguments are closest to arg t = 0."""
    nu = cfg.nu
    m0 = int(round((nu * theta / math.pi - cfg.s) / 2))
    lo = m0 - (nu - 1) // 2
    return list(range(lo, lo + nu))


def decompose_class(cfg: GeometryConfig, cls, theta: float = 0.0) -> list:
    """cls = sum c_i B_i over psi(m) (m near the ray) and fm(l); returns [(BasisClass, c)].

    Coefficients below 1e-10 of the largest are set to zero: the basis
    charges differ by exponentially large factors on a ray, so rounding
    noise in a vanishing coefficient would otherwise dominate.
    """
    if isinstance(cls, BasisClass):
        return [(cls, 1.0)]
    _require_point(cfg)
    ms = _near_window(cfg, theta)
    basis = [BasisClass("psi", m) for m in ms]
    if cfg.equivariant:
        basis += [BasisClass("fm", l) for l in range(cfg.s)]
        if not isinstance(cls, LocalizedClass):
            raise ConfigError("equivariant classes are given as LocalizedClass values")
        vecs = [psi_class(cfg, m).scalar_values() for m in ms]
        vecs += [fm_class(cfg, l).scalar_values() for l in range(cfg.s)]
        target = cls.scalar_values()
    else:
        if not isinstance(cls, AlgebraElement):
            raise ConfigError("classes for nilpotent roots are classical-ring elements")
        vecs = [psi_class(cfg, m).coeffs for m in ms]
        target = cls.coeffs
    A = np.array(vecs).T
    coef = np.linalg.solve(A, target)
    big = np.abs(coef).max() if len(coef) else 0.0
    return [(bc, complex(c)) for bc, c in zip(basis, coef) if abs(c) > _SNAP * big]


def central_charge_meijer(cfg: GeometryConfig, cls, q: complex, z: complex, arg_q_over_z: float | None = None,
                          deriv_order: int = 0) -> ScaledComplex:
    q, z = complex(q), complex(z)
    arg = float(np.angle(q / z)) if arg_q_over_z is None else float(arg_q_over_z)
    L = complex(math.log(abs(q / z)), arg)
    total = ScaledComplex(0j, 0.0)
    for bc, c in decompose_class(cfg, cls, arg):
        total = total + basis_charge(cfg, bc, L, deriv_order) * c
    return total


# -- sectors ----------------------------------------------------------------------

def exponential_sector(cfg: GeometryConfig, m: int, ray_arg: float) -> bool:
    """|arg(z/q) + pi(2m+s)/(r-s)| < (1 + 1/(r-s)) pi."""
    nu = cfg.nu
    return abs(ray_arg + math.pi * (2 * m + cfg.s) / nu) < (1 + 1 / nu) * math.pi


def tame_sector(cfg: GeometryConfig, ray_arg: float) -> bool:
    """|arg(z/q) - (1-s) pi/(r-s)| < pi/2 + pi/(r-s)."""
    nu = cfg.nu
    return abs(ray_arg - (1 - cfg.s) * math.pi / nu) < math.pi / 2 + math.pi / nu


def exponential_ray(cfg: GeometryConfig, m: int) -> float:
    """arg(z/q) = -(2m+s) pi/(r-s): the ray on which e^{lambda_m/z} is purely real."""
    return -(2 * m + cfg.s) * math.pi / cfg.nu


def tame_ray(cfg: GeometryConfig) -> float:
    return (1 - cfg.s) * math.pi / cfg.nu


def sector_common_range(nu: int) -> tuple[float, float]:
    """Open interval of k for which the exponential and tame sectors overlap (as a query only)."""
    return (nu - 6) / 4, 3 * (nu + 2) / 4


# -- reports ----------------------------------------------------------------------

@dataclass
class AsymptoticReport:
    ray_arg: float
    lam: complex
    zabs: list
    log_abs: dict                 # derivative order -> list of log|e^{lam/z} Z^{(i)}|
    samples: list                 # (|z|, value) for derivative 0 (value may overflow to inf)
    fitted_slope: dict
    fit_residual: dict
    min_local_slope: dict
    expected_slope: dict
    exponential_removed: complex
    tolerance: float
    in_sector: bool | None
    bounded: bool
    slope_ok: bool
    overflow: bool
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.bounded and self.slope_ok

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        def c(x):
            return [float(np.real(x)), float(np.imag(x))]
        return {
            "ray_arg": self.ray_arg, "lambda": c(self.lam), "tolerance": self.tolerance,
            "samples": [{"abs_z": zz, "value": c(v) if np.isfinite(v) else None, "log_abs": la}
                        for (zz, v), la in zip(self.samples, self.log_abs[0])],
            "fitted_slope": {str(k): v for k, v in self.fitted_slope.items()},
            "fit_residual": {str(k): v for k, v in self.fit_residual.items()},
            "min_local_slope": {str(k): v for k, v in self.min_local_slope.items()},
            "expected_slope": {str(k): v for k, v in self.expected_slope.items()},
            "in_sector": self.in_sector, "bounded": self.bounded, "slope_ok": self.slope_ok,
            "overflow": self.overflow, "verdict": self.verdict,
            **{k: v for k, v in self.extra.items()},
        }


def _fit(zabs, logs):
    x = np.log(np.asarray(zabs, float))
    y = np.asarray(logs, float)
    A = np.vstack([x, np.ones_like(x)]).T
    sol, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ sol - y) ** 2)))
    local = np.diff(y) / np.diff(x)
    return float(sol[0]), resid, float(local.min())


def _check_grid(zgrid):
    zabs = [float(v) for v in (DEFAULT_ZGRID if zgrid is None else zgrid)]
    if len(zabs) < 6:
        raise ConfigError("need at least 6 grid points")
    if any(b >= a for a, b in zip(zabs, zabs[1:])):
        raise ConfigError("grid must be strictly decreasing in |z|")
    if math.log10(zabs[0] / zabs[-1]) < 2 - 1e-9:
        raise ConfigError("grid must span at least two decades")
    return zabs


def _class_index(cls, kind):
    return cls.index if isinstance(cls, BasisClass) and cls.kind == kind else None


def asymptotic_class_check(cfg: GeometryConfig, cls, lam: complex, ray_arg: float, strength: str = "weak",
                           derivative_order: int = 0, q: complex | None = None, zgrid=None,
                           tol: float = 0.1, expected_slope: float | None = None) -> AsymptoticReport:
    """Growth of e^{lam/z} <J(q,-z), cls> (and q-derivatives) for z -> 0 along arg(z/q) = ray_arg.

    Verdict: no overflow, fitted and local slopes above -10 (polynomial
    bound), and the fitted slope within ``tol`` of the expected exponent
    ((r+s-1)/2 - i for lam != 0; no exponent is asserted for lam = 0).
    """
    if strength not in ("weak", "strong"):
        raise ConfigError("strength is 'weak' or 'strong'")
    orders = [0] if strength == "weak" else list(range(derivative_order + 1))
    q = cfg.q_value if q is None else complex(q)
    lam = complex(lam)
    zabs = _check_grid(zgrid)
    theta = -float(ray_arg)
    pieces = None
    logs = {i: [] for i in orders}
    samples = []
    for za in zabs:
        az = za * abs(q)
        z = az * np.exp(1j * (ray_arg + np.angle(q)))
        L = complex(math.log(abs(q) / az), theta)
        if pieces is None:
            pieces = decompose_class(cfg, cls, theta)
        e = ScaledComplex.from_log(lam / z)
        for i in orders:
            tot = ScaledComplex(0j, 0.0)
            for bc, c in pieces:
                tot = tot + basis_charge(cfg, bc, L, i) * c
            v = e * tot
            logs[i].append(v.log_abs)
            if i == 0:
                samples.append((za * abs(q), v.value() if v.log_abs < _OVERFLOW_LOG else complex(math.inf)))
    overflow = any(x > _OVERFLOW_LOG for i in orders for x in logs[i])
    fitted, resid, local, expected = {}, {}, {}, {}
    bounded, slope_ok = not overflow, True
    base_exp = expected_slope if expected_slope is not None else (
        (cfg.r + cfg.s - 1) / 2 if lam != 0 else None)
    for i in orders:
        if any(not np.isfinite(x) for x in logs[i]):
            raise NumericalError("central charge vanished on the grid")
        f, rr, lo = _fit([s[0] for s in samples], logs[i])
        fitted[i], resid[i], local[i] = f, rr, lo
        bounded = bounded and f > _BOUND_SLOPE and lo > _BOUND_SLOPE
        if base_exp is not None:
            expected[i] = base_exp - i
            slope_ok = slope_ok and abs(f - expected[i]) <= tol
    m = _class_index(cls, "psi")
    if m is not None:
        in_sector = exponential_sector(cfg, m, ray_arg)
    elif _class_index(cls, "fm") is not None:
        in_sector = tame_sector(cfg, ray_arg)
    else:
        in_sector = None
    return AsymptoticReport(float(ray_arg), lam, [s[0] for s in samples], logs, samples, fitted, resid, local,
                            expected, lam, tol, in_sector, bounded, slope_ok, overflow)


# -- tame comparison ----------------------------------------------------------------

@dataclass
class TameReport:
    l: int
    ray_arg: float
    zabs: list
    lhs: list
    rhs: list
    ratio_dev: list
    boundedness: AsymptoticReport
    ratio_tol: float

    @property
    def ratio_ok(self) -> bool:
        return all(d <= self.ratio_tol for d in self.ratio_dev[-3:])

    @property
    def passed(self) -> bool:
        return self.ratio_ok and self.boundedness.passed

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        def c(x):
            return [float(np.real(x)), float(np.imag(x))]
        return {"l": self.l, "ray_arg": self.ray_arg, "ratio_tol": self.ratio_tol,
                "samples": [{"abs_z": z, "lhs": c(a), "rhs": c(b), "ratio_deviation": d}
                            for z, a, b, d in zip(self.zabs, self.lhs, self.rhs, self.ratio_dev)],
                "ratio_ok": self.ratio_ok, "boundedness": self.boundedness.to_json(), "verdict": self.verdict}


def tame_rhs(cfg: GeometryConfig, l: int, q: complex, z: complex, arg_z_over_q: float) -> complex:
    """<I(1/q, -z), Gamma_T' 1'_l / e(N'_l)> = I|_l Gamma_T'|_l / e(N'_l)."""
    I = i_tprime_eval(cfg, 1 / complex(q), z, arg_z_over_q)
    g = gamma_Tprime(cfg)
    e = fixed_locus_data(cfg).Tp_euler[l]
    return complex((I.values[l] * g.values[l]).scalar_part() / e)


def tame_equivalence_report(cfg: GeometryConfig, l: int, q: complex | None = None, zgrid=None,
                            ratio_tol: float = 1e-2, ray_arg: float | None = None) -> TameReport:
    if not cfg.equivariant or cfg.s == 0:
        raise ConfigError("tame comparison needs equivariant roots and s >= 1")
    if not 0 <= l < cfg.s:
        raise ConfigError("fixed-point index out of range")
    q = cfg.q_value if q is None else complex(q)
    ray = tame_ray(cfg) if ray_arg is None else float(ray_arg)
    zabs = _check_grid(zgrid)
    bc = BasisClass("fm", l)
    lhs, rhs, dev = [], [], []
    for za in zabs:
        az = za * abs(q)
        z = az * np.exp(1j * (ray + np.angle(q)))
        L = complex(math.log(abs(q) / az), -ray)
        a = basis_charge(cfg, bc, L).value()
        b = tame_rhs(cfg, l, q, z, ray)
        lhs.append(a); rhs.append(b); dev.append(abs(a / b - 1))
    bound = asymptotic_class_check(cfg, bc, 0.0, ray, q=q, zgrid=zgrid)
    return TameReport(l, ray, [z * abs(q) for z in zabs], lhs, rhs, dev, bound, ratio_tol)
