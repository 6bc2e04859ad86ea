"""Characteristic classes from Chern roots: Ch, Td, Gamma classes and the maps Psi_m."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import germs
from .algebra import AlgebraElement, Jet, jet_apply_analytic
from .errors import ConfigError
from .geometry import GeometryConfig, base_tangent_roots, build_classical_ring
from .localization import LocalizedClass, from_function

TWO_PI_I = 2j * np.pi


class ClassKind(str, Enum):
    CH = "Ch"
    TODD = "Todd"
    GAMMA = "Gamma"
    GAMMA_PLUS = "GammaPlus"
    GAMMA_MINUS = "GammaMinus"
    INVERSE_TODD = "InverseTodd"


_GERM_OF = {
    ClassKind.TODD: germs.TODD,
    ClassKind.INVERSE_TODD: germs.INV_TODD,
    ClassKind.GAMMA: germs.GAMMA_1P,
    ClassKind.GAMMA_PLUS: germs.GAMMA_1P,
    ClassKind.GAMMA_MINUS: germs.GAMMA_1M,
}


@dataclass
class RootList:
    """Chern roots; a root enters as sign * entry (e.g. sigma - H is (H, -1) plus sigma)."""

    entries: list
    signs: list = field(default=None)

    def __post_init__(self):
        self.entries = list(self.entries)
        self.signs = [1] * len(self.entries) if self.signs is None else [int(s) for s in self.signs]
        if len(self.signs) != len(self.entries) or any(s not in (1, -1) for s in self.signs):
            raise ConfigError("one sign (+1 or -1) per root required")

    def signed(self) -> list:
        return [e if s == 1 else -e for e, s in zip(self.entries, self.signs)]

    def __len__(self):
        return len(self.entries)


def _as_roots(roots) -> list:
    return roots.signed() if isinstance(roots, RootList) else list(roots)


def _scalar_part(x) -> complex:
    if isinstance(x, Jet):
        return x.constant_term()
    if isinstance(x, AlgebraElement):
        return x.scalar_part()
    return complex(x)


def apply_germ(g: germs.Germ, x):
    if isinstance(x, Jet):
        return jet_apply_analytic(g, x)
    if isinstance(x, AlgebraElement):
        return x.apply(g)
    return germs.germ_value(g, x)


def _one_like(like):
    if isinstance(like, Jet):
        return Jet.constant(like.orders, 1.0)
    if isinstance(like, AlgebraElement):
        return like.parent.unit()
    return 1.0 + 0j


def char_class(kind, roots, like=None):
    """The class of the given kind evaluated on Chern roots.

    Ch(V) = sum exp(2 pi i d), Td(V) = prod 2 pi i d / (1 - exp(-2 pi i d)),
    Gamma(V) = prod Gamma(1 + d), GammaMinus(V) = prod Gamma(1 - d).
    ``like`` fixes the ambient type when the root list is empty.
    """
    kind = ClassKind(kind)
    rs = _as_roots(roots)
    template = like if like is not None else next((x for x in rs if not np.isscalar(x)), None)
    one = _one_like(template)
    if kind == ClassKind.CH:
        out = one * 0
        for x in rs:
            out = out + apply_germ(germs.EXP_2PI_I, x)
        return out
    g = _GERM_OF[kind]
    out = one
    for x in rs:
        c = _scalar_part(x)
        if kind == ClassKind.TODD and c != 0 and abs(c - round(c.real)) < 1e-12:
            raise ConfigError("Todd class of a root with integral scalar part is singular")
        out = out * apply_germ(g, x)
    return out


def reflection_identity_check(x) -> tuple[bool, float]:
    """Compare Gamma(1+x)Gamma(1-x) with pi x / sin(pi x) and with 2 pi i x e^{-pi i x}/(1-e^{-2 pi i x}).

    ``x`` is a jet with zero constant term or an integer order (then x is a
    single generator truncated at that order).
    """
    if not isinstance(x, Jet):
        x = Jet.variable([int(x)], 0)
    lhs = jet_apply_analytic(germs.GAMMA_1P, x) * jet_apply_analytic(germs.GAMMA_1M, x)
    rhs = jet_apply_analytic(germs.PI_X_OVER_SIN, x)
    rhs2 = jet_apply_analytic(germs.TODD, x) * jet_apply_analytic(germs.ExpGerm(-1j * np.pi), x)
    err = max(lhs.max_diff(rhs), lhs.max_diff(rhs2))
    return err < 1e-12, err


def todd_from_gamma_check(roots) -> float:
    """max coefficient error between Td(V) and exp(pi i c1(V)) Gamma_+(V) Gamma_-(V)."""
    rs = _as_roots(roots)
    if not rs:
        return 0.0
    td = char_class(ClassKind.TODD, rs)
    c1 = sum(rs[1:], rs[0])
    rhs = apply_germ(germs.ExpGerm(1j * np.pi), c1) * char_class(ClassKind.GAMMA_PLUS, rs) \
        * char_class(ClassKind.GAMMA_MINUS, rs)
    if isinstance(td, Jet):
        return td.max_diff(rhs)
    if isinstance(td, AlgebraElement):
        return float(np.abs(td.coeffs - rhs.coeffs).max())
    return float(abs(td - rhs))


# -- classes on the local models -------------------------------------------------------

def gamma_base(cfg: GeometryConfig) -> AlgebraElement:
    """Gamma class of the base Z."""
    B = cfg.base_ring
    return char_class(ClassKind.GAMMA, base_tangent_roots(cfg.base, B), like=B.unit())


def relative_gamma_T(cfg: GeometryConfig, include_base: bool = True, ring=None):
    """Gamma(Z) prod Gamma(1 + rho_i + H) prod Gamma(1 + sigma_j - H) on T.

    Nilpotent roots: an element of the classical bundle ring.
    Equivariant roots: a LocalizedClass on T.
    """
    gZ = gamma_base(cfg) if include_base else cfg.base_ring.unit()
    if cfg.equivariant:
        rho, sigma = cfg.rho, cfg.sigma

        def at(k):
            v = 1.0 + 0j
            for ri in rho:
                v *= germs.germ_value(germs.GAMMA_1P, ri - rho[k])
            for sj in sigma:
                v *= germs.germ_value(germs.GAMMA_1P, sj + rho[k])
            return gZ * v

        return from_function(cfg, at, "T")
    R = ring or build_classical_ring(cfg)
    H = R.H()
    roots = [R.from_base(x) + H for x in cfg.rho_base()] + [R.from_base(x) - H for x in cfg.sigma_base()]
    return R.from_base(gZ) * char_class(ClassKind.GAMMA, roots, like=R.unit())


def gamma_Tprime(cfg: GeometryConfig, include_base: bool = True) -> LocalizedClass:
    """Gamma class of T' restricted to its fixed loci (equivariant roots only)."""
    if not cfg.equivariant:
        raise ConfigError("Gamma class of T' is only available with equivariant roots")
    gZ = gamma_base(cfg) if include_base else cfg.base_ring.unit()
    rho, sigma = cfg.rho, cfg.sigma

    def at(l):
        v = 1.0 + 0j
        for sj in sigma:
            v *= germs.germ_value(germs.GAMMA_1P, sj - sigma[l])
        for ri in rho:
            v *= germs.germ_value(germs.GAMMA_1P, ri + sigma[l])
        return gZ * v

    return from_function(cfg, at, "T'")


def ch_line(cfg: GeometryConfig, m: int, ring=None):
    """Ch(O(m)) = exp(2 pi i m H)."""
    if cfg.equivariant:
        return from_function(cfg, lambda k: np.exp(-TWO_PI_I * m * cfg.rho[k]), "T")
    R = ring or build_classical_ring(cfg)
    return (TWO_PI_I * m * R.H()).apply(germs.EXP)


def psi_m(cfg: GeometryConfig, m: int, alpha: AlgebraElement | None = None,
          trivial_todd: bool = False, ring=None):
    """Psi_m(alpha) = (2 pi i)^s prod(sigma_j - H) Ch(O(m)) Td(N)^{-1} alpha.

    Push-forward from F is realized as multiplication by e(N) = prod(sigma_j - H).
    """
    B = cfg.base_ring
    alpha = B.unit() if alpha is None else alpha
    if not isinstance(alpha, AlgebraElement):
        alpha = B.element(alpha)
    s = cfg.s
    if cfg.equivariant:
        rho, sigma = cfg.rho, cfg.sigma

        def at(k):
            v = TWO_PI_I ** s * np.exp(-TWO_PI_I * m * rho[k])
            for sj in sigma:
                x = sj + rho[k]
                v *= x if trivial_todd else x * germs.germ_value(germs.INV_TODD, x)
            return alpha * v

        return from_function(cfg, at, "T")
    R = ring or build_classical_ring(cfg)
    H = R.H()
    out = R.from_base(alpha) * ch_line(cfg, m, R) * TWO_PI_I ** s
    for sj in cfg.sigma_base():
        x = R.from_base(sj) - H
        out = out * x
        if not trivial_todd:
            out = out * x.apply(germs.INV_TODD)
    return out
