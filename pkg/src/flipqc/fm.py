"""Fourier-Mukai coefficients and the induced map from T'-classes to T-classes.

Both sides are stored in their localized bases: 1_k / e(N_k) on T and
1'_l / e(N'_l) on T'.  The map sends 1'_l / e(N'_l) to sum_k C_kl 1_k / e(N_k) with

    C_kl = exp(-(s-1) pi i (rho_k + sigma_l))
           * prod_{l' != l} sin(pi (rho_k + sigma_l')) / sin(pi (sigma_l' - sigma_l)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .geometry import GeometryConfig
from .localization import (LocalizedClass, fixed_point_class, localization_pairing,  # noqa: F401
                           residue_pushforward)

_SIN_TOL = 1e-12


@dataclass
class FMMatrix:
    C: np.ndarray          # (r, s)

    def to_json(self) -> list:
        return [[[float(c.real), float(c.imag)] for c in row] for row in self.C]


def fm_coefficients(cfg: GeometryConfig) -> FMMatrix:
    if not cfg.equivariant:
        raise ConfigError("Fourier-Mukai coefficients need equivariant roots")
    rho, sigma = cfg.rho, cfg.sigma
    r, s = cfg.r, cfg.s
    C = np.zeros((r, s), complex)
    for k in range(r):
        for l in range(s):
            v = np.exp(-(s - 1) * 1j * math.pi * (rho[k] + sigma[l]))
            for lp in range(s):
                if lp == l:
                    continue
                den = np.sin(math.pi * (sigma[lp] - sigma[l]))
                if abs(den) < _SIN_TOL:
                    raise ConfigError("sigma_l' - sigma_l is an integer: coefficient undefined")
                v *= np.sin(math.pi * (rho[k] + sigma[lp])) / den
            C[k, l] = v
    return FMMatrix(C)


def u_transform(cfg: GeometryConfig, alpha: LocalizedClass, fmm: FMMatrix | None = None) -> LocalizedClass:
    """Image of a T'-class (given by its fixed-point restrictions) as a T-class."""
    if alpha.side != "T'":
        raise ConfigError("u_transform takes a class on T'")
    C = (fmm or fm_coefficients(cfg)).C
    B = cfg.base_ring
    vals = []
    for k in range(cfg.r):
        v = B.zero()
        for l in range(cfg.s):
            v = v + alpha.values[l] * C[k, l]
        vals.append(v)
    return LocalizedClass(cfg, "T", vals)


def tame_equivalence_check(cfg: GeometryConfig, l: int, q: complex | None = None, zgrid=None,
                           ratio_tol: float = 1e-2):
    """Compare <J(q,-z), Gamma_T U(1'_l/e'_l)> with <I(1/q,-z), Gamma_T' 1'_l/e'_l> along the tame ray."""
    from .asymptotics import tame_equivalence_report
    return tame_equivalence_report(cfg, l, q, zgrid, ratio_tol)
