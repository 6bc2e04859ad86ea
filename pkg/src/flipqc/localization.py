"""Classes on the local models stored by their restrictions to torus-fixed loci.

On T the fixed loci are F_k (H = -rho_k), on T' they are F'_l (H' = -sigma_l).
A :class:`LocalizedClass` holds one base-ring value per fixed locus; the
class 1_k / e(N_k) is the vector with a single 1 in slot k.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algebra import AlgebraElement, alg_integrate
from .errors import ConfigError
from .geometry import BundleRing, GeometryConfig, fixed_locus_data


@dataclass
class LocalizedClass:
    cfg: GeometryConfig
    side: str            # "T" or "T'"
    values: list         # base-ring AlgebraElements, one per fixed locus

    def __post_init__(self):
        if self.side not in ("T", "T'"):
            raise ConfigError(f"unknown side {self.side!r}")
        n = self.cfg.r if self.side == "T" else self.cfg.s
        B = self.cfg.base_ring
        vals = []
        for v in self.values:
            vals.append(v if isinstance(v, AlgebraElement) else B.scalar(v))
        if len(vals) != n:
            raise ConfigError(f"{self.side} has {n} fixed loci, got {len(vals)} values")
        self.values = vals

    @property
    def npoints(self) -> int:
        return len(self.values)

    def euler(self) -> list:
        fl = fixed_locus_data(self.cfg)
        return fl.T_euler if self.side == "T" else fl.Tp_euler

    def _same(self, other: "LocalizedClass"):
        if other.side != self.side or other.npoints != self.npoints:
            raise ConfigError("localized classes live on different spaces")

    def __add__(self, other):
        if isinstance(other, LocalizedClass):
            self._same(other)
            return LocalizedClass(self.cfg, self.side, [a + b for a, b in zip(self.values, other.values)])
        return LocalizedClass(self.cfg, self.side, [a + other for a in self.values])

    __radd__ = __add__

    def __neg__(self):
        return LocalizedClass(self.cfg, self.side, [-a for a in self.values])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LocalizedClass):
            self._same(other)
            return LocalizedClass(self.cfg, self.side, [a * b for a, b in zip(self.values, other.values)])
        return LocalizedClass(self.cfg, self.side, [a * other for a in self.values])

    __rmul__ = __mul__

    def map(self, fn: Callable) -> "LocalizedClass":
        return LocalizedClass(self.cfg, self.side, [fn(v) for v in self.values])

    def scalar_values(self) -> np.ndarray:
        """Values as scalars (for a point base)."""
        return np.array([v.scalar_part() for v in self.values], complex)

    def coefficient_matrix(self) -> np.ndarray:
        """Array (npoints, dim H*(Z)) of base coefficients."""
        return np.array([v.coeffs for v in self.values])


def fixed_point_class(cfg: GeometryConfig, k: int, side: str = "T") -> LocalizedClass:
    """1_k / e(N_k): restriction 1 at the k-th fixed locus, 0 elsewhere."""
    n = cfg.r if side == "T" else cfg.s
    return LocalizedClass(cfg, side, [1.0 if i == k else 0.0 for i in range(n)])


def from_function(cfg: GeometryConfig, fn: Callable, side: str = "T") -> LocalizedClass:
    """Class whose restriction to the k-th fixed locus is fn(k)."""
    n = cfg.r if side == "T" else cfg.s
    return LocalizedClass(cfg, side, [fn(k) for k in range(n)])


def _require_equivariant(cfg):
    if not cfg.equivariant:
        raise ConfigError("localization needs equivariant roots")


def _eval_H_polynomial(coeffs: Sequence, value: complex, B):
    out = B.zero()
    p = 1.0 + 0j
    for c in coeffs:
        cb = c if isinstance(c, AlgebraElement) else B.scalar(c)
        out = out + cb * p
        p *= value
    return out


def localize(cfg: GeometryConfig, x, side: str = "T") -> LocalizedClass:
    """Restrict an H-polynomial (BundleRing element or coefficient list) to the fixed loci."""
    _require_equivariant(cfg)
    if isinstance(x, AlgebraElement):
        if not isinstance(x.parent, BundleRing):
            raise ConfigError("expected an element of a bundle ring")
        coeffs = x.parent.H_coefficients(x)
    else:
        coeffs = list(x)
    pts = [-p for p in (cfg.rho if side == "T" else cfg.sigma)]
    B = cfg.base_ring
    return LocalizedClass(cfg, side, [_eval_H_polynomial(coeffs, h, B) for h in pts])


def to_ring(cls: LocalizedClass, ring: BundleRing) -> AlgebraElement:
    """Inverse of :func:`localize` on T: interpolate in H (degree < r)."""
    if cls.side != "T":
        raise ConfigError("only T-classes convert to the bundle ring")
    cfg = cls.cfg
    pts = np.array([-p for p in cfg.rho])
    V = pts[:, None] ** np.arange(cfg.r)[None, :]
    vals = cls.coefficient_matrix()             # (r, dB)
    coef = np.linalg.solve(V, vals)             # (r, dB): coefficient of H^a
    return ring.from_array(coef.T)


def residue_pushforward(cfg: GeometryConfig, f) -> AlgebraElement:
    """pi_* f = sum_k Res_{H=-rho_k} f(H) / prod_i (rho_i + H).

    ``f`` is a BundleRing element (read as its normal-form polynomial), a
    coefficient list (a polynomial of any degree in H) or a callable
    returning the base-ring value (or scalar) of f at a point H.
    """
    _require_equivariant(cfg)
    B = cfg.base_ring
    rho = cfg.rho
    if len(set(np.round(rho, 14))) != len(rho):
        raise ConfigError("coincident fixed points")
    if callable(f) and not isinstance(f, AlgebraElement):
        evaluate = f
    else:
        coeffs = f.parent.H_coefficients(f) if isinstance(f, AlgebraElement) else list(f)
        evaluate = lambda h: _eval_H_polynomial(coeffs, h, B)  # noqa: E731
    out = B.zero()
    for k in range(cfg.r):
        den = 1.0 + 0j
        for i in range(cfg.r):
            if i != k:
                den *= rho[i] - rho[k]
        v = evaluate(-rho[k])
        v = v if isinstance(v, AlgebraElement) else B.scalar(v)
        out = out + v / den
    return out


def localization_pairing(cfg: GeometryConfig, x: LocalizedClass, y: LocalizedClass,
                         integrate: bool = True):
    """sum_k int_Z x|_k y|_k / e(N_k) (returns the base class when integrate=False)."""
    _require_equivariant(cfg)
    x._same(y)
    B = cfg.base_ring
    tot = B.zero()
    for xv, yv, e in zip(x.values, y.values, x.euler()):
        if e == 0:
            raise ConfigError("vanishing Euler class")
        tot = tot + xv * yv / e
    return alg_integrate(B, tot) if integrate else tot
