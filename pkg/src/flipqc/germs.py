"""Analytic germs described by Taylor coefficients, with recentering.

A germ is asked for ``taylor(order, center)``: the first ``order`` Taylor
coefficients at ``center``.  Power series known at 0 are recentered by
binomial re-expansion inside their disc of convergence; exp and the
trigonometric germs use closed forms.
"""
from __future__ import annotations

from math import comb, factorial

import numpy as np

from ._constants import EULER_GAMMA, ZETA

TWO_PI_I = 2j * np.pi


# -- univariate truncated series helpers ------------------------------------

def _pad(a, n: int) -> np.ndarray:
    a = np.asarray(a, complex)[:n]
    return np.pad(a, (0, n - len(a)))


def series_mul(a, b, n: int) -> np.ndarray:
    return _pad(np.convolve(_pad(a, n), _pad(b, n)), n)


def series_exp(a, n: int) -> np.ndarray:
    """exp of a truncated series (arbitrary constant term)."""
    a = _pad(a, n)
    g = np.zeros(n, complex)
    if n == 0:
        return g
    g[0] = np.exp(a[0])
    for k in range(1, n):
        j = np.arange(1, k + 1)
        g[k] = np.dot(j * a[j], g[k - j]) / k
    return g


def series_inv(a, n: int) -> np.ndarray:
    a = _pad(a, n)
    if a[0] == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    g = np.zeros(n, complex)
    g[0] = 1 / a[0]
    for k in range(1, n):
        g[k] = -np.dot(a[1:k + 1], g[k - 1::-1][:k]) / a[0]
    return g


def recenter(coeffs, center: complex, n: int) -> np.ndarray:
    """Taylor coefficients at ``center`` of sum(coeffs[k] x**k)."""
    c = np.asarray(coeffs, complex)
    if center == 0:
        return _pad(c, n)
    N = len(c)
    powers = center ** np.arange(N)
    out = np.zeros(n, complex)
    for k in range(min(n, N)):
        idx = np.arange(k, N)
        binom = np.array([comb(int(m), k) for m in idx], dtype=float)
        out[k] = np.sum(c[idx] * binom * powers[idx - k])
    return out


# -- germ classes ------------------------------------------------------------

class Germ:
    name = "germ"

    def taylor(self, order: int, center: complex = 0.0) -> np.ndarray:
        raise NotImplementedError

    def __repr__(self):
        return f"<Germ {self.name}>"


class SeriesGerm(Germ):
    """Power series at 0 with a known radius of convergence."""

    def __init__(self, coeff_fn, n_available: int | None, radius: float, name: str):
        self._coeff_fn = coeff_fn
        self.n_available = n_available
        self.radius = radius
        self.name = name

    def _coeffs(self, n):
        if self.n_available is not None and n > self.n_available:
            raise ValueError(f"germ {self.name}: only {self.n_available} coefficients available, {n} requested")
        return np.asarray(self._coeff_fn(n), complex)

    def taylor(self, order, center=0.0):
        center = complex(center)
        if center == 0:
            return self._coeffs(order)
        if abs(center) >= 0.7 * self.radius:
            raise ValueError(f"germ {self.name}: center {center} too far from 0 for recentering")
        n = self.n_available if self.n_available is not None else max(80, 2 * order + 40)
        if n < order:
            raise ValueError(f"germ {self.name}: only {n} coefficients available, {order} requested")
        return recenter(self._coeffs(n), center, order)


class CoefficientGerm(Germ):
    """Germ given by an explicit coefficient list.

    With ``entire=True`` the list is treated as a polynomial, so recentering is
    exact; otherwise only center 0 is allowed.
    """

    def __init__(self, coeffs, entire: bool = False):
        self.coeffs = np.asarray(coeffs, complex)
        self.entire = entire
        self.name = "coefficients"

    def taylor(self, order, center=0.0):
        if center != 0 and not self.entire:
            raise ValueError("coefficient germ can only be recentered when entire=True")
        if center == 0 and order > len(self.coeffs) and not self.entire:
            raise ValueError(f"insufficient germ coefficients: need {order}, have {len(self.coeffs)}")
        return recenter(self.coeffs, complex(center), order)


class ExpGerm(Germ):
    """exp(scale * x)."""

    def __init__(self, scale: complex = 1.0):
        self.scale = complex(scale)
        self.name = f"exp({self.scale}x)"

    def taylor(self, order, center=0.0):
        k = np.arange(order)
        fact = np.array([factorial(int(i)) for i in k], dtype=float)
        return np.exp(self.scale * center) * self.scale ** k / fact


class SinGerm(Germ):
    """sin(scale * x) (or cos when ``cosine``)."""

    def __init__(self, scale: complex = 1.0, cosine: bool = False):
        self.scale = complex(scale)
        self.cosine = cosine
        self.name = ("cos" if cosine else "sin") + f"({self.scale}x)"

    def taylor(self, order, center=0.0):
        w = self.scale * complex(center)
        derivs = [np.sin(w), np.cos(w), -np.sin(w), -np.cos(w)]
        shift = 1 if self.cosine else 0
        return np.array([derivs[(k + shift) % 4] * self.scale ** k / factorial(k) for k in range(order)])


class Composite(Germ):
    """Germs assembled from others: exp of a germ, reciprocal, product, x -> -x."""

    def __init__(self, kind: str, parts, name: str):
        self.kind = kind
        self.parts = parts
        self.name = name

    def taylor(self, order, center=0.0):
        if self.kind == "exp":
            (g, c0) = self.parts
            return series_exp(c0 * g.taylor(order, center), order)
        if self.kind == "inv":
            return series_inv(self.parts[0].taylor(order, center), order)
        if self.kind == "mul":
            out = np.zeros(order, complex)
            out[0] = 1
            for g in self.parts:
                out = series_mul(out, g.taylor(order, center), order)
            return out
        if self.kind == "reflect":
            g = self.parts[0]
            return g.taylor(order, -complex(center)) * (-1.0) ** np.arange(order)
        raise ValueError(self.kind)


def exp_of(g: Germ, factor: complex = 1.0, name: str | None = None) -> Germ:
    return Composite("exp", (g, factor), name or f"exp({factor}*{g.name})")


def reciprocal(g: Germ, name: str | None = None) -> Germ:
    return Composite("inv", (g,), name or f"1/{g.name}")


def product(*gs: Germ, name: str | None = None) -> Germ:
    return Composite("mul", gs, name or "*".join(g.name for g in gs))


def reflected(g: Germ, name: str | None = None) -> Germ:
    return Composite("reflect", (g,), name or f"{g.name}(-x)")


# -- the catalogue -----------------------------------------------------------

def _loggamma1p_coeffs(n):
    c = np.zeros(n, complex)
    if n > 1:
        c[1] = -EULER_GAMMA
    for k in range(2, n):
        c[k] = (-1) ** k * ZETA[k] / k
    return c


def _expm1_over_x_coeffs(n):
    # g(y) = (1 - e^{-y}) / y = sum (-1)^k y^k / (k+1)!
    return np.array([(-1) ** k / factorial(k + 1) for k in range(n)], dtype=complex)


def _sinc_coeffs(n):
    # sin(pi x) / (pi x)
    c = np.zeros(n, complex)
    for k in range(0, n, 2):
        c[k] = (-1) ** (k // 2) * np.pi ** k / factorial(k + 1)
    return c


def _scaled(coeff_fn, scale):
    return lambda n: coeff_fn(n) * scale ** np.arange(n)


LOG_GAMMA_1P = SeriesGerm(_loggamma1p_coeffs, max(ZETA) + 1, 1.0, "logGamma(1+x)")
GAMMA_1P = exp_of(LOG_GAMMA_1P, 1.0, "Gamma(1+x)")
GAMMA_1M = reflected(GAMMA_1P, "Gamma(1-x)")
RGAMMA_1P = exp_of(LOG_GAMMA_1P, -1.0, "1/Gamma(1+x)")
EXP = ExpGerm(1.0)
EXP_2PI_I = ExpGerm(TWO_PI_I)
SIN_PI = SinGerm(np.pi)
INV_TODD = SeriesGerm(_scaled(_expm1_over_x_coeffs, TWO_PI_I), None, np.inf, "(1-exp(-2 pi i x))/(2 pi i x)")
class _ToddGerm(Germ):
    """2 pi i x / (1 - exp(-2 pi i x)) = 1 + pi i x - 2 sum_k zeta(2k) x^(2k).

    The zeta form is used at 0; other centers invert the entire series of
    the reciprocal.
    """

    name = "2 pi i x/(1-exp(-2 pi i x))"

    def taylor(self, order, center=0.0):
        if center != 0:
            return series_inv(INV_TODD.taylor(order, center), order)
        if order > max(ZETA) + 1:
            raise ValueError(f"germ {self.name}: only {max(ZETA) + 1} coefficients available")
        c = np.zeros(order, complex)
        c[0] = 1
        if order > 1:
            c[1] = 1j * np.pi
        for k in range(2, order, 2):
            c[k] = -2 * ZETA[k]
        return c


TODD = _ToddGerm()
SINC_PI = SeriesGerm(_sinc_coeffs, None, np.inf, "sin(pi x)/(pi x)")
PI_X_OVER_SIN = reciprocal(SINC_PI, "pi x/sin(pi x)")

GERMS = {
    "exp": EXP,
    "exp2pii": EXP_2PI_I,
    "loggamma1p": LOG_GAMMA_1P,
    "gamma1p": GAMMA_1P,
    "gamma1m": GAMMA_1M,
    "rgamma1p": RGAMMA_1P,
    "todd": TODD,
    "inv_todd": INV_TODD,
    "sin_pi": SIN_PI,
    "pi_x_over_sin": PI_X_OVER_SIN,
}


def _install_scalar_forms():
    from scipy import special

    forms = {
        LOG_GAMMA_1P: lambda x: special.loggamma(1 + x),
        GAMMA_1P: lambda x: special.gamma(1 + x),
        GAMMA_1M: lambda x: special.gamma(1 - x),
        RGAMMA_1P: lambda x: special.rgamma(1 + x),
        TODD: lambda x: TWO_PI_I * x / (1 - np.exp(-TWO_PI_I * x)) if x != 0 else 1.0,
        INV_TODD: lambda x: (1 - np.exp(-TWO_PI_I * x)) / (TWO_PI_I * x) if x != 0 else 1.0,
        PI_X_OVER_SIN: lambda x: np.pi * x / np.sin(np.pi * x) if x != 0 else 1.0,
        SINC_PI: lambda x: np.sin(np.pi * x) / (np.pi * x) if x != 0 else 1.0,
    }
    for g, f in forms.items():
        g.scalar_form = f


def germ_value(g: Germ, x: complex) -> complex:
    """Value of a germ at a scalar point."""
    f = getattr(g, "scalar_form", None)
    if f is not None:
        return complex(f(complex(x)))
    return complex(g.taylor(1, x)[0])


_install_scalar_forms()
