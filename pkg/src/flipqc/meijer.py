"""Meijer G-functions of the G^{q,0}_{p,q} and G^{q,1}_{p,q} families.

    G(t) = (1/2 pi i) int_L Phi(x) t^x dx,
    Phi(x) = prod_i Gamma(b_i - x) [Gamma(1 - a_1 + x)] / prod_{j > n} Gamma(a_j - x)

with L separating the poles of Gamma(b_i - x) (right) from those of
Gamma(1 - a_1 + x) (left).  The argument enters only through
log t = ln|t| + i arg t, so the branch of t^x is always explicit.

Four evaluators are provided:

* the residue series (double precision, log-scaled terms, Laurent
  expansions at multiple poles),
* a vertical-line quadrature with residue corrections for poles on the
  wrong side of the line,
* a steepest-descent quadrature through the dominant saddle (n = 0), and
* the residue series in mpmath arithmetic with the working precision set
  from the expected cancellation.

Values come back as :class:`ScaledComplex` so that e^{-700} and e^{+700}
are both representable.  A polynomial multiplier poly(x) may be attached
to the integrand; it realizes derivatives in log t.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import mpmath as mp
import numpy as np
from scipy import special

from ._constants import BERNOULLI
from .errors import ConfigError, NumericalError, PrecisionWarning, SectorWarning
from .germs import PI_X_OVER_SIN, series_exp, series_inv, series_mul

_INT_TOL = 1e-9
_TAIL = 45.0            # stop once terms are e^-45 below the running maximum


# -- log-scaled values ------------------------------------------------------

@dataclass(frozen=True)
class ScaledComplex:
    """mantissa * exp(log_scale)."""

    mantissa: complex
    log_scale: float = 0.0

    @classmethod
    def from_log(cls, logv: complex, factor: complex = 1.0) -> "ScaledComplex":
        logv = complex(logv)
        return cls(complex(factor) * np.exp(1j * logv.imag), logv.real)

    @classmethod
    def of(cls, v: complex) -> "ScaledComplex":
        return cls(complex(v), 0.0)

    @property
    def log_abs(self) -> float:
        a = abs(self.mantissa)
        return -math.inf if a == 0 else math.log(a) + self.log_scale

    def value(self) -> complex:
        if self.mantissa == 0:
            return 0j
        with np.errstate(over="ignore", under="ignore"):
            return complex(self.mantissa * np.exp(self.log_scale))

    def normalized(self) -> "ScaledComplex":
        a = abs(self.mantissa)
        if a == 0 or not np.isfinite(a):
            return self
        return ScaledComplex(self.mantissa / a, self.log_scale + math.log(a))

    def __mul__(self, other):
        if isinstance(other, ScaledComplex):
            return ScaledComplex(self.mantissa * other.mantissa, self.log_scale + other.log_scale).normalized()
        return ScaledComplex(self.mantissa * complex(other), self.log_scale).normalized()

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ScaledComplex):
            return ScaledComplex(self.mantissa / other.mantissa, self.log_scale - other.log_scale).normalized()
        return ScaledComplex(self.mantissa / complex(other), self.log_scale).normalized()

    def __add__(self, other):
        if not isinstance(other, ScaledComplex):
            other = ScaledComplex.of(other)
        if self.mantissa == 0:
            return other
        if other.mantissa == 0:
            return self
        s = self.normalized(); o = other.normalized()
        M = max(s.log_scale, o.log_scale)
        return ScaledComplex(s.mantissa * math.exp(s.log_scale - M) + o.mantissa * math.exp(o.log_scale - M),
                             M).normalized()

    __radd__ = __add__

    def __neg__(self):
        return ScaledComplex(-self.mantissa, self.log_scale)

    def __sub__(self, other):
        return self + (-other)

    def rel_diff(self, other: "ScaledComplex") -> float:
        d = (self - other).log_abs
        ref = max(self.log_abs, other.log_abs)
        if ref == -math.inf:
            return 0.0
        return math.exp(d - ref) if d > -math.inf else 0.0


def _scaled_sum(logs: np.ndarray, factors: np.ndarray | None = None) -> tuple[ScaledComplex, float]:
    """sum exp(logs) * factors, plus sum of moduli (same scale)."""
    logs = np.asarray(logs, complex)
    if factors is None:
        factors = np.ones(len(logs), complex)
    keep = np.isfinite(logs.real) & (factors != 0)
    if not keep.any():
        return ScaledComplex(0j, 0.0), 0.0
    logs = logs[keep]; factors = factors[keep]
    lf = logs.real + np.log(np.abs(factors))
    M = float(lf.max())
    terms = np.exp(logs - M) * factors
    s = complex(terms.sum())
    a = float(np.abs(terms).sum())
    return ScaledComplex(s, M), a


# -- polygamma for complex arguments ----------------------------------------

def _hurwitz_zeta(s: int, z) -> np.ndarray:
    """zeta(s, z) for integer s >= 2, via shifting and Euler-Maclaurin."""
    w = np.array(z, dtype=complex, copy=True)
    acc = np.zeros_like(w)
    while True:
        small = w.real < 16
        if not small.any():
            break
        acc[small] += w[small] ** (-s)
        w[small] += 1
    tail = w ** (1 - s) / (s - 1) + 0.5 * w ** (-s)
    rising = float(s)                          # (s)_{2j-1}
    wpow = w ** (-s - 1)
    fact = 2.0
    for j in range(1, 12):
        tail += BERNOULLI[2 * j] / fact * rising * wpow
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
        wpow = wpow / (w * w)
    return acc + tail


def polygamma(k: int, z):
    """psi^{(k)}(z) for complex z."""
    if k == 0:
        return special.psi(np.asarray(z, complex))
    return (-1) ** (k + 1) * math.factorial(k) * _hurwitz_zeta(k + 1, z)


def _loggamma_taylor(c: complex, sign: int, order: int) -> np.ndarray:
    """Taylor coefficients in eps of log Gamma(c + sign*eps), constant term dropped."""
    out = np.zeros(order, complex)
    for k in range(1, order):
        out[k] = (sign ** k) * complex(polygamma(k - 1, np.array([c]))[0]) / math.factorial(k)
    return out


# -- parameters -----------------------------------------------------------------

def _near_int(x: complex) -> int | None:
    n = round(x.real)
    return int(n) if abs(x - n) < _INT_TOL else None


@dataclass(frozen=True)
class MeijerParams:
    """Orders and parameters of G^{m,n}_{p,q}; only m = q and n in {0, 1} are supported.

    For n = 1, ``a[0]`` is the parameter entering Gamma(1 - a_1 + x).
    """

    m: int
    n: int
    p: int
    q_: int
    a: tuple = ()
    b: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(complex(x) for x in self.a))
        object.__setattr__(self, "b", tuple(complex(x) for x in self.b))
        if len(self.a) != self.p or len(self.b) != self.q_:
            raise ConfigError("parameter counts do not match the orders")
        if self.m != self.q_ or self.n not in (0, 1) or self.n > self.p:
            raise ConfigError("only the G^{q,0}_{p,q} and G^{q,1}_{p,q} families are supported")
        if self.q_ - self.p < 1:
            raise ConfigError("need q > p")
        for ak in self.a[: self.n]:
            for bj in self.b:
                k = _near_int(ak - bj)
                if k is not None and k >= 1:
                    raise ConfigError("pole collision: a_k - b_j is a positive integer")

    @classmethod
    def of(cls, a: Sequence = (), b: Sequence = (), n: int = 0) -> "MeijerParams":
        return cls(len(b), n, len(a), len(b), tuple(a), tuple(b))

    @property
    def nu(self) -> int:
        return self.q_ - self.p

    @property
    def contour_margin(self) -> float:
        """m + n - (p + q)/2: the vertical line converges for |arg t| < margin * pi."""
        return self.m + self.n - 0.5 * (self.p + self.q_)

    @property
    def den(self) -> tuple:
        return self.a[self.n:]

    def conjugate(self) -> "MeijerParams":
        return MeijerParams(self.m, self.n, self.p, self.q_, tuple(np.conj(self.a)), tuple(np.conj(self.b)))


@dataclass
class MeijerResult:
    value: ScaledComplex
    method: str
    est_rel_error: float
    n_terms: int = 0
    info: dict = field(default_factory=dict)

    def complex(self) -> complex:
        return self.value.value()


def _log_t(t, arg_t) -> complex:
    t = complex(t)
    if t == 0:
        raise ConfigError("t = 0")
    arg = np.angle(t) if arg_t is None else float(arg_t)
    return complex(math.log(abs(t)), arg)


def _poly_eval(poly, x):
    if poly is None:
        return np.ones_like(np.asarray(x, complex))
    out = np.zeros_like(np.asarray(x, complex))
    for c in reversed(list(poly)):
        out = out * x + c
    return out


def _poly_taylor(poly, x0: complex, order: int) -> np.ndarray:
    """Taylor coefficients of poly(x0 + eps)."""
    if poly is None:
        out = np.zeros(order, complex); out[0] = 1
        return out
    c = np.asarray(poly, complex)
    out = np.zeros(order, complex)
    for k in range(min(order, len(c))):
        idx = np.arange(k, len(c))
        out[k] = sum(c[i] * math.comb(int(i), k) * x0 ** (i - k) for i in idx)
    return out


# -- integrand ----------------------------------------------------------------

def log_integrand(P: MeijerParams, x, log_t: complex) -> np.ndarray:
    """log(Phi(x) t^x) (principal loggamma branches; only exp of it is meaningful)."""
    x = np.asarray(x, complex)
    out = x * log_t
    for bj in P.b:
        out = out + special.loggamma(bj - x)
    if P.n:
        out = out + special.loggamma(1 - P.a[0] + x)
    for aj in P.den:
        out = out - special.loggamma(aj - x)
    return out


def _dlog(P, x, log_t):
    out = log_t + 0 * x
    for bj in P.b:
        out = out - special.psi(bj - x)
    if P.n:
        out = out + special.psi(1 - P.a[0] + x)
    for aj in P.den:
        out = out + special.psi(aj - x)
    return out


def _d2log(P, x):
    x = np.atleast_1d(np.asarray(x, complex))
    out = np.zeros_like(x)
    for bj in P.b:
        out = out + polygamma(1, bj - x)
    if P.n:
        out = out + polygamma(1, 1 - P.a[0] + x)
    for aj in P.den:
        out = out - polygamma(1, aj - x)
    return out


# -- residues ---------------------------------------------------------------

def residue(P: MeijerParams, log_t: complex, x0: complex, poly=None) -> ScaledComplex:
    """Res_{x = x0} Phi(x) poly(x) t^x, via Laurent expansion in eps = x - x0."""
    x0 = complex(x0)
    sign = 1.0
    poles = zeros = 0
    plan = []
    for bj in P.b:
        u = bj - x0
        k = _near_int(u)
        if k is not None and k <= 0:
            poles += 1; sign *= (-1) ** (-k + 1); plan.append(("pole", -k, +1))
        else:
            plan.append(("reg", u, -1))
    if P.n:
        v = 1 - P.a[0] + x0
        k = _near_int(v)
        if k is not None and k <= 0:
            poles += 1; sign *= (-1) ** (-k); plan.append(("pole", -k, -1))
        else:
            plan.append(("reg", v, +1))
    for aj in P.den:
        w = aj - x0
        k = _near_int(w)
        if k is not None and k <= 0:
            zeros += 1; sign *= (-1) ** (-k + 1); plan.append(("zero", -k, +1))
        else:
            plan.append(("rden", w, -1))
    order = poles - zeros
    if order <= 0:
        return ScaledComplex(0j, 0.0)
    K = order
    logs = np.zeros(K, complex)
    mult = np.zeros(K, complex); mult[0] = 1
    const = x0 * log_t
    if K > 1:
        logs[1] += log_t
    S = PI_X_OVER_SIN.taylor(K)
    for kind, val, sg in plan:
        if kind == "pole":
            # Gamma(-M - sg*eps) = (+-) eps^-1 S(eps) / Gamma(1 + M + sg*eps)
            mult = series_mul(mult, S, K)
            const -= special.loggamma(1.0 + val)
            logs -= _loggamma_taylor(1.0 + val, sg, K)
        elif kind == "zero":
            mult = series_mul(mult, series_inv(S, K), K)
            const += special.loggamma(1.0 + val)
            logs += _loggamma_taylor(1.0 + val, sg, K)
        elif kind == "reg":
            const += special.loggamma(val)
            logs += _loggamma_taylor(val, sg, K)
        else:
            const -= special.loggamma(val)
            logs -= _loggamma_taylor(val, sg, K)
    ser = series_mul(series_mul(mult, series_exp(logs, K), K), _poly_taylor(poly, x0, K), K)
    return ScaledComplex.from_log(const, sign * ser[K - 1])


def _pole_groups(b: tuple) -> list:
    """Indices of b grouped by integer separation, each as (base, [(index, offset)])."""
    left = list(range(len(b)))
    groups = []
    while left:
        i = left.pop(0)
        members = [i]
        for j in list(left):
            if _near_int(b[j] - b[i]) is not None:
                members.append(j); left.remove(j)
        base_i = min(members, key=lambda j: b[j].real)
        groups.append((b[base_i], [(j, _near_int(b[j] - b[base_i])) for j in members]))
    return groups


# -- residue series (double precision) --------------------------------------------

def _simple_family_logs(P, k, log_t, D):
    """log of the residue-series terms -Res_{x=b_k+d} for d < D."""
    b, bk = P.b, P.b[k]
    for aj in P.den:
        e = _near_int(aj - bk)
        if e is not None and e <= 0:
            return np.full(D, -np.inf + 0j)
    L0 = bk * log_t
    for i, bi in enumerate(b):
        if i != k:
            L0 += special.loggamma(bi - bk)
    for aj in P.den:
        L0 -= special.loggamma(aj - bk)
    if P.n:
        L0 += special.loggamma(1 - P.a[0] + bk)
    d = np.arange(D - 1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        lr = log_t + 1j * np.pi - np.log(d + 1)
        for i, bi in enumerate(b):
            if i != k:
                lr = lr - np.log(bi - bk - d - 1)
        for aj in P.den:
            lr = lr + np.log(aj - bk - d - 1)
        if P.n:
            lr = lr + np.log(1 - P.a[0] + bk + d)
    cum = np.concatenate([[0], np.cumsum(lr.astype(np.clongdouble))]).astype(complex)
    return L0 + cum


def _series_done(logs: np.ndarray) -> bool:
    re = logs.real[np.isfinite(logs.real)]
    if len(re) < 8:
        return len(re) == 0 or len(re) < len(logs)
    top = re.max()
    tail = logs.real[-6:]
    return bool(np.all(tail < top - _TAIL) and np.all(np.diff(tail) < 0)) or bool(np.all(~np.isfinite(tail)))


def _initial_terms(P, log_t) -> int:
    X = math.exp(log_t.real / P.nu)
    return int(3 * X + 40)


def series_scaled(P: MeijerParams, log_t: complex, poly=None, max_terms: int = 40000) -> MeijerResult:
    """Residue series over the poles b_j + d (right family only)."""
    log_t = complex(log_t)
    D0 = _initial_terms(P, log_t)
    all_logs, all_f = [], []
    total = 0
    for base, members in _pole_groups(P.b):
        if len(members) == 1:
            k = members[0][0]
            D = D0
            while True:
                logs = _simple_family_logs(P, k, log_t, D)
                if _series_done(logs):
                    break
                D *= 2
                if D > max_terms:
                    raise NumericalError("residue series did not settle within the term budget")
            f = _poly_eval(poly, P.b[k] + np.arange(D))
            all_logs.append(logs); all_f.append(f); total += D
        else:
            logs, facs = [], []
            N = 0
            while True:
                r = residue(P, log_t, base + N, poly)
                logs.append(complex(r.log_scale, np.angle(r.mantissa) if r.mantissa else 0.0)
                            if r.mantissa else -np.inf + 0j)
                facs.append(-abs(r.mantissa) if r.mantissa else 0.0)
                N += 1
                if N >= 8 and N >= min(D0, 60) and _series_done(np.array(logs)):
                    break
                if N > max_terms // 10:
                    raise NumericalError("residue series did not settle within the term budget")
            all_logs.append(np.array(logs)); all_f.append(np.array(facs, complex)); total += N
    logs = np.concatenate(all_logs); fac = np.concatenate(all_f)
    val, absum = _scaled_sum(logs, fac)
    canc = absum / abs(val.mantissa) if val.mantissa != 0 else math.inf
    err = 1e-15 * canc * (1 + 0.02 * math.sqrt(total))
    if canc > 1e6:
        warnings.warn(f"residue series cancellation factor {canc:.1e}", PrecisionWarning, stacklevel=2)
    return MeijerResult(val, "series", err, total, {"cancellation": canc})


# -- residue series (mpmath) --------------------------------------------------------

def mp_series_scaled(P: MeijerParams, log_t: complex, poly=None, dps: int | None = None) -> MeijerResult:
    """Residue series in extended precision; simple poles only."""
    if any(len(m) > 1 for _, m in _pole_groups(P.b)):
        raise NumericalError("extended-precision series needs simple poles")
    log_t = complex(log_t)
    X = math.exp(log_t.real / P.nu)
    if dps is None:
        dps = int(2 * P.nu * X / math.log(10)) + 30
    with mp.workdps(dps):
        Lt = mp.mpc(log_t.real, log_t.imag)
        t = mp.exp(Lt)
        a = [mp.mpc(z.real, z.imag) for z in P.a]
        b = [mp.mpc(z.real, z.imag) for z in P.b]
        pc = None if poly is None else [mp.mpc(complex(c).real, complex(c).imag) for c in poly]
        eps = mp.mpf(10) ** (-dps + 5)
        G = mp.mpc(0)
        big = mp.mpf(0)
        total = 0
        for k, bk in enumerate(b):
            e = [aj - bk for aj in a[P.n:]]
            if any(_near_int(complex(x)) is not None and _near_int(complex(x)) <= 0 for x in e):
                continue
            c = [b[i] - bk for i in range(len(b)) if i != k]
            term = mp.exp(bk * Lt)
            for ci in c:
                term *= mp.gamma(ci)
            for ej in e:
                term *= mp.rgamma(ej)
            f = None
            if P.n:
                f = 1 - a[0] + bk
                term *= mp.gamma(f)
            d = 0
            peak = mp.mpf(0)
            while True:
                x = bk + d
                w = term
                if pc is not None:
                    pv = mp.mpc(0)
                    for cc in reversed(pc):
                        pv = pv * x + cc
                    w = term * pv
                G += w
                at = abs(w)
                peak = max(peak, at)
                d += 1
                if d > 2 * X + 20 and abs(term) < eps * peak:
                    break
                if d > 200000:
                    raise NumericalError("extended-precision series did not settle")
                r = -t / d
                for ci in c:
                    r /= (ci - d)
                for ej in e:
                    r *= (ej - d)
                if f is not None:
                    r *= (f + d - 1)
                term *= r
                if term == 0:
                    break
            big = max(big, peak)
            total += d
        if G == 0:
            return MeijerResult(ScaledComplex(0j, 0.0), "mp-series", 0.0, total)
        lg = mp.log(G)
        canc = float(mp.log10(big / abs(G))) if big > 0 else 0.0
        err = 10.0 ** (canc - dps + 3)
        return MeijerResult(ScaledComplex.from_log(complex(lg)), "mp-series", min(err, 1.0), total,
                            {"dps": dps, "log10_cancellation": canc})


# -- vertical line -------------------------------------------------------------------

def _default_c(P: MeijerParams) -> float:
    c = min(bj.real for bj in P.b) - 0.5
    if P.n:
        lo = P.a[0].real - 1
        if c <= lo:
            c = lo + 0.5 * (min(bj.real for bj in P.b) - lo)
    return c


def _wrong_side_poles(P: MeijerParams, c: float) -> tuple[list, list]:
    """Right-family poles with Re < c and left-family poles with Re > c (distinct)."""
    right, left = [], []
    for bj in P.b:
        d = 0
        while (bj + d).real < c:
            x = bj + d
            if not any(abs(x - y) < 1e-7 for y in right):
                right.append(x)
            d += 1
    if P.n:
        l = 0
        while (P.a[0] - 1 - l).real > c:
            left.append(P.a[0] - 1 - l)
            l += 1
    return right, left


def contour_scaled(P: MeijerParams, log_t: complex, poly=None, c: float | None = None,
                   tol: float = 1e-13, max_nodes: int = 1 << 17) -> MeijerResult:
    """Trapezoid rule along Re x = c, plus residues of poles on the wrong side."""
    log_t = complex(log_t)
    kappa_up = P.contour_margin * math.pi + log_t.imag
    kappa_dn = P.contour_margin * math.pi - log_t.imag
    if min(kappa_up, kappa_dn) <= 0:
        raise NumericalError("vertical contour diverges for this arg t")
    c = _default_c(P) if c is None else float(c)
    for bj in P.b:
        if _near_int(bj - c) is not None and abs((bj - c).imag) < 1e-9:
            c -= 0.25

    def g(y):
        x = c + 1j * y
        return log_integrand(P, x, log_t), _poly_eval(poly, x)

    # truncation of |Im x| by marching until the integrand is negligible
    l0, _ = g(np.array([0.0]))
    ref = float(l0.real[0])
    ys = np.linspace(-60, 60, 2401)
    lg, _ = g(ys)
    ref = max(ref, float(np.nanmax(lg.real)))

    def reach(sign, kappa):
        y = 1.0
        while True:
            lv, _ = g(np.array([sign * y]))
            if lv.real[0] < ref - 40 and y * kappa > 40:
                return y
            y *= 1.3
            if y > 1e5:
                raise NumericalError("contour integrand does not decay")

    Yp, Ym = reach(+1, kappa_up), reach(-1, kappa_dn)
    h = min(0.5, 2 * math.pi / (8 + 2 * abs(log_t.real)))
    prev = None
    while True:
        ys = np.arange(-math.ceil(Ym / h), math.ceil(Yp / h) + 1) * h
        lv, pv = g(ys)
        with np.errstate(over="ignore", under="ignore"):
            w = np.exp(lv - ref) * pv
        w = np.where(np.isfinite(w), w, 0)
        I = complex(w.sum()) * h / (2 * math.pi)
        A = float(np.abs(w).sum()) * h / (2 * math.pi)
        if prev is not None and abs(I - prev) <= tol * max(A, 1e-300):
            break
        if len(ys) > max_nodes:
            raise NumericalError("contour quadrature did not converge")
        prev = I
        h /= 2
    val = ScaledComplex(I, ref)
    absum = ScaledComplex(A, ref)
    right, left = _wrong_side_poles(P, c)
    for x0 in right:
        r = residue(P, log_t, x0, poly)
        val = val - r
        absum = absum + ScaledComplex(abs(r.mantissa), r.log_scale)
    for x0 in left:
        r = residue(P, log_t, x0, poly)
        val = val + r
        absum = absum + ScaledComplex(abs(r.mantissa), r.log_scale)
    canc = math.exp(absum.log_abs - val.log_abs) if val.mantissa else math.inf
    err = max(abs(I - prev) / max(abs(I), 1e-300) if prev is not None else 0.0, 1e-15) * canc
    return MeijerResult(val, "contour", err, len(ys), {"c": c, "corrections": len(right) + len(left)})


# -- steepest descent through the saddle (n = 0) --------------------------------

def _wrap(z):
    return z.real + 1j * ((z.imag + math.pi) % (2 * math.pi) - math.pi)


def find_saddle(P: MeijerParams, log_t: complex) -> complex:
    """The saddle x* ~ -t^{1/nu} of Phi(x) t^x that carries the Barnes exponential."""
    nu = P.nu
    x = -np.exp(log_t / nu) + (sum(P.b) - sum(P.a)) / nu
    g = abs(complex(_dlog(P, x, log_t)))
    for _ in range(200):
        f1 = complex(_dlog(P, x, log_t))
        f2 = complex(_d2log(P, x)[0])
        dx = f1 / f2
        lim = 0.5 + 0.1 * abs(x)
        if abs(dx) > lim:
            dx *= lim / abs(dx)
        lam = 1.0
        while lam > 1e-4:
            xn = x - lam * dx
            gn = abs(complex(_dlog(P, xn, log_t)))
            if np.isfinite(gn) and gn < g:
                break
            lam /= 2
        x, g = xn, gn
        if abs(lam * dx) < 1e-14 * (1 + abs(x)):
            break
    if g > 1e-8 * (1 + abs(log_t)):
        raise NumericalError("saddle point search did not converge")
    return complex(x)


def _trace_branch(P, log_t, xs, fs, v, sgn, taus, h):
    f0 = lambda z: complex(log_integrand(P, z, log_t))  # noqa: E731
    x, fprev = xs, fs
    pts = []
    for tau in taus:
        if len(pts) >= 2:
            guess = 2 * pts[-1] - pts[-2]
        elif len(pts) == 1:
            guess = 2 * pts[-1] - xs
        else:
            guess = xs + sgn * v * h
        target = fs - tau * tau
        xn = guess
        base = f0(x)
        # f itself carries roundoff of order eps |f*|; dx cannot shrink below that
        noise = 16 * np.finfo(float).eps * (abs(fs) + abs(base) + 1)
        for _ in range(50):
            fcur = fprev + _wrap(f0(xn) - base)
            if abs(fcur - target) <= noise:
                break
            dx = (fcur - target) / complex(_dlog(P, xn, log_t))
            xn = xn - dx
            if abs(dx) < 1e-13 * (1 + abs(xn)):
                break
        else:
            raise NumericalError("steepest-descent path tracking failed")
        fprev = fprev + _wrap(f0(xn) - base)
        x = xn
        pts.append(x)
    return np.array(pts)


def _winding(path: np.ndarray, poles: np.ndarray, R: float) -> np.ndarray:
    """Winding numbers of poles w.r.t. path closed by a clockwise arc through Re x > 0."""
    xa, xb = path[0], path[-1]
    u = np.linspace(0, 1, 50)[1:]
    out_b = xb + u * (R * np.exp(1j * np.angle(xb)) - xb)
    th_b, th_a = np.angle(xb), np.angle(xa)
    if th_a > th_b:
        th_a -= 2 * math.pi
    arc = R * np.exp(1j * np.linspace(th_b, th_a, 600)[1:])
    in_a = R * np.exp(1j * np.angle(xa)) + u * (xa - R * np.exp(1j * np.angle(xa)))
    loop = np.concatenate([path, out_b, arc, in_a])
    rel = loop[None, :] - poles[:, None]
    ang = np.angle(rel[:, 1:] / rel[:, :-1]).sum(axis=1)
    return np.rint(ang / (2 * math.pi)).astype(int)


def saddle_scaled(P: MeijerParams, log_t: complex, poly=None, h: float = 0.1, tmax: float = 7.0) -> MeijerResult:
    """Steepest-descent quadrature (in the parameter u with f = f* - u^2)."""
    if P.n:
        raise NumericalError("saddle route is implemented for the G^{q,0} family")
    log_t = complex(log_t)
    xs = find_saddle(P, log_t)
    fs = complex(log_integrand(P, xs, log_t))
    f2 = complex(_d2log(P, xs)[0])
    v = np.sqrt(-2 / f2)
    if v.imag < 0:
        v = -v
    taus = np.arange(1, int(round(tmax / h)) + 1) * h
    up = _trace_branch(P, log_t, xs, fs, v, +1, taus, h)
    dn = _trace_branch(P, log_t, xs, fs, v, -1, taus, h)
    d_up = -2 * taus / _dlog(P, up, log_t)
    d_dn = 2 * taus / _dlog(P, dn, log_t)
    wgt = np.exp(-taus ** 2)
    p0 = complex(_poly_eval(poly, np.array([xs]))[0])
    pu, pd = _poly_eval(poly, up), _poly_eval(poly, dn)
    terms_up = wgt * d_up * pu
    terms_dn = wgt * d_dn * pd
    I = h * (v * p0 + terms_up.sum() + terms_dn.sum()) / (2j * math.pi)
    I2 = 2 * h * (v * p0 + terms_up[1::2].sum() + terms_dn[1::2].sum()) / (2j * math.pi)
    A = h * (abs(v * p0) + np.abs(terms_up).sum() + np.abs(terms_dn).sum()) / (2 * math.pi)
    val = ScaledComplex(complex(I) * np.exp(1j * fs.imag), fs.real)
    path = np.concatenate([dn[::-1], [xs], up])
    R = 2 * float(np.abs(path).max()) + 10
    # poles right of the whole path are always enclosed by the closing arc and need no correction
    xmax = float(path.real.max()) + 1.0
    poles = []
    for base, members in _pole_groups(P.b):
        for j, _ in members:
            d = np.arange(max(0, int(math.ceil(min(xmax, R) - P.b[j].real))) + 2)
            x = P.b[j] + d
            poles.extend(x[np.abs(x) <= R])
    poles = np.unique(np.round(np.array(poles, complex), 9)) if poles else np.array([], complex)
    ncorr = 0
    absum = ScaledComplex(A, fs.real)
    if len(poles):
        w = _winding(path, poles, R)
        for x0, wn in zip(poles, w):
            if wn != -1:
                r = residue(P, log_t, x0, poly) * (wn + 1)
                val = val - r
                absum = absum + ScaledComplex(abs(r.mantissa), r.log_scale)
                ncorr += 1
    conv = abs(I - I2) / max(abs(I), 1e-300)
    canc = math.exp(absum.log_abs - val.log_abs) if val.mantissa else math.inf
    err = max(1e-15, min(conv, 1.0) * 1e-3) * canc
    return MeijerResult(val, "saddle", err, 2 * len(taus) + 1,
                        {"saddle": xs, "corrections": ncorr, "h_convergence": conv})


# -- dispatcher and public evaluators ---------------------------------------------------

def meijer_eval(P: MeijerParams, log_t: complex, poly=None, method: str = "auto",
                rel_tol: float = 1e-10) -> MeijerResult:
    """Evaluate G at log t, choosing a route by |t| and arg t unless ``method`` is given."""
    log_t = complex(log_t)
    routes = {"series": series_scaled, "contour": contour_scaled, "saddle": saddle_scaled,
              "mp": mp_series_scaled}
    if method != "auto":
        if method not in routes:
            raise ConfigError(f"unknown method {method!r}")
        return routes[method](P, log_t, poly)
    X = math.exp(log_t.real / P.nu)
    arg = abs(log_t.imag)
    tried = []
    if X < 6:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PrecisionWarning)
            res = series_scaled(P, log_t, poly)
        if res.est_rel_error <= rel_tol:
            return res
        tried.append(res)
    candidates = []
    if P.n == 0 and arg < P.nu * math.pi - 0.02 and X > 1.5:
        candidates.append(saddle_scaled)
    if arg < P.contour_margin * math.pi - 0.05:
        candidates.append(contour_scaled)
    for fn in candidates:
        try:
            res = fn(P, log_t, poly)
        except NumericalError:
            continue
        if res.est_rel_error <= rel_tol:
            return res
        tried.append(res)
    try:
        return mp_series_scaled(P, log_t, poly)
    except NumericalError:
        if tried:
            best = min(tried, key=lambda r: r.est_rel_error)
            warnings.warn(f"Meijer value only accurate to ~{best.est_rel_error:.1e}", PrecisionWarning,
                          stacklevel=2)
            return best
        raise


def meijer_series_eval(params: MeijerParams, t: complex, arg_t: float | None = None, poly=None) -> complex:
    """Residue-series value of G at t (branch of t^x from ``arg_t``)."""
    return series_scaled(params, _log_t(t, arg_t), poly).complex()


def meijer_contour_eval(params: MeijerParams, t: complex, arg_t: float | None = None, poly=None,
                        c: float | None = None) -> complex:
    """Mellin-Barnes line integral value of G at t."""
    return contour_scaled(params, _log_t(t, arg_t), poly, c).complex()


# -- Barnes exponential expansion ----------------------------------------------------

@dataclass
class BarnesExpansion:
    nu: int
    eps: float
    theta: complex
    leading_const: float
    M: list = field(default_factory=list)

    def sector_ok(self, arg_t: float) -> bool:
        return abs(arg_t) < (self.nu + self.eps) * math.pi

    def leading(self, log_t: complex) -> ScaledComplex:
        root = np.exp(log_t / self.nu)
        return ScaledComplex.from_log(-self.nu * root + self.theta * log_t, self.leading_const)

    def evaluate(self, log_t: complex, K: int | None = None) -> ScaledComplex:
        K = len(self.M) if K is None else K
        if K > len(self.M):
            raise ConfigError(f"only {len(self.M)} coefficients M_k are available")
        u = np.exp(-log_t / self.nu)
        corr = 1 + sum(self.M[k - 1] * u ** k for k in range(1, K + 1))
        return self.leading(log_t) * corr


def barnes_leading(params: MeijerParams) -> BarnesExpansion:
    if params.n != 0:
        raise ConfigError("Barnes expansion applies to the G^{q,0} family")
    nu = params.nu
    theta = ((1 - nu) / 2 + sum(params.b) - sum(params.a)) / nu
    const = (2 * math.pi) ** ((nu - 1) / 2) / math.sqrt(nu)
    return BarnesExpansion(nu, 1.0 if nu > 1 else 0.5, complex(theta), const)


def fit_barnes_Mk(params: MeijerParams, K: int, grid: Sequence[float] | None = None) -> list:
    """Least-squares M_1..M_K from accurate values of G along arg t = 0."""
    exp_ = barnes_leading(params)
    if grid is None:
        # t^{1/nu} from 6 to 100: corrections u^K stay above the eps |log G| noise of the values
        grid = np.geomspace(6.0 ** exp_.nu, 100.0 ** exp_.nu, 24)
    grid = np.asarray(grid, float)
    u = grid ** (-1.0 / exp_.nu)
    rhs = []
    for tv in grid:
        Lt = complex(math.log(tv), 0.0)
        G = meijer_eval(params, Lt).value
        rhs.append((G / exp_.leading(Lt)).value() - 1)
    A = u[:, None] ** np.arange(1, K + 1)[None, :]
    scale = np.abs(A).max(axis=0)
    As = A / scale
    cond = np.linalg.cond(As)
    if not np.isfinite(cond) or cond > 1e12:
        raise NumericalError(f"M_k fit is ill-conditioned (cond {cond:.1e}); lower K or widen the grid")
    sol, *_ = np.linalg.lstsq(As.astype(complex), np.array(rhs, complex), rcond=None)
    return list(sol / scale)


def barnes_expansion_eval(params: MeijerParams, K: int, t: complex, arg_t: float | None = None,
                          M: Sequence[complex] | None = None) -> complex:
    exp_ = barnes_leading(params)
    Lt = _log_t(t, arg_t)
    if not exp_.sector_ok(Lt.imag):
        warnings.warn("arg t outside the sector of the Barnes expansion", SectorWarning, stacklevel=2)
    exp_.M = list(M) if M is not None else (fit_barnes_Mk(params, K) if K else [])
    return exp_.evaluate(Lt, K).value()


# -- algebraic expansion of G^{q,1} --------------------------------------------------

def algebraic_expansion_eval(params: MeijerParams, l: int, D: int, t: complex,
                             arg_t: float | None = None) -> complex:
    """t^{a_l - 1} sum_{d<=D} (-t)^{-d} prod Gamma(1+b_i-a_l+d) / prod_j Gamma(1+a_j-a_l+d)."""
    if params.n != 1:
        raise ConfigError("algebraic expansion applies to the G^{q,1} family")
    Lt = _log_t(t, arg_t)
    if abs(Lt.imag) >= (params.nu / 2 + 1) * math.pi:
        warnings.warn("arg t outside the sector of the algebraic expansion", SectorWarning, stacklevel=2)
    al = params.a[l]
    total = 0j
    for d in range(D + 1):
        lg = (al - 1) * Lt - d * (Lt + 1j * math.pi)
        for bi in params.b:
            lg += special.loggamma(1 + bi - al + d)
        sgn = 1.0
        ok = True
        for aj in params.a:
            y = 1 + aj - al + d
            k = _near_int(y)
            if k is not None and k <= 0:
                ok = False
                break
            lg -= special.loggamma(y)
        if ok:
            total += sgn * np.exp(lg)
    return complex(total)


# -- slope fitting --------------------------------------------------------------

def growth_exponent_fit(samples: Sequence) -> tuple[float, float]:
    """Least-squares slope of log|value| against log|z|, and the rms residual.

    ``value`` may be a complex number, a ScaledComplex or a log-modulus given
    as ("log", float).
    """
    xs, ys = [], []
    dropped = 0
    for zabs, v in samples:
        if isinstance(v, ScaledComplex):
            la = v.log_abs
        elif isinstance(v, tuple) and v and v[0] == "log":
            la = float(v[1])
        else:
            a = float(np.max(np.abs(np.atleast_1d(v))))
            la = math.log(a) if a > 0 else -math.inf
        if not np.isfinite(la) or la < -690 or la > 690:
            dropped += 1
            continue
        xs.append(math.log(float(zabs))); ys.append(la)
    if dropped:
        warnings.warn(f"{dropped} samples outside [1e-300, 1e300] were excluded", PrecisionWarning, stacklevel=2)
    if len(xs) < 2:
        raise NumericalError("not enough usable samples for a slope fit")
    xs, ys = np.array(xs), np.array(ys)
    A = np.vstack([xs, np.ones_like(xs)]).T
    (slope, icpt), *_ = np.linalg.lstsq(A, ys, rcond=None)
    resid = float(np.sqrt(np.mean((A @ np.array([slope, icpt]) - ys) ** 2)))
    return float(slope), resid
