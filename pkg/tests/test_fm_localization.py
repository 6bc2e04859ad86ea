import math

import mpmath as mp
import numpy as np
import pytest

from flipqc.algebra import alg_integrate
from flipqc.errors import ConfigError
from flipqc.fm import fm_coefficients, u_transform
from flipqc.geometry import GeometryConfig, build_classical_ring, sample_equivariant_params
from flipqc.localization import (LocalizedClass, fixed_point_class, localization_pairing, localize,
                                 residue_pushforward, to_ring)


def test_pushforward_examples():
    cfg = GeometryConfig(2, 0, rho=[0.1, -0.2])
    assert abs(residue_pushforward(cfg, [0, 1]).scalar_part() - 1) < 1e-14
    assert abs(residue_pushforward(cfg, [1]).scalar_part()) < 1e-14
    assert abs(residue_pushforward(cfg, [0, 0, 1]).scalar_part() - 0.1) < 1e-14


def test_pushforward_callable_matches_polynomial():
    cfg = GeometryConfig(3, 0, rho=[0.1, -0.2, 0.05])
    coeffs = [0.3, -1.0, 2.0, 0.5, 0.25]
    poly = residue_pushforward(cfg, coeffs).scalar_part()
    fn = residue_pushforward(cfg, lambda h: sum(c * h ** k for k, c in enumerate(coeffs))).scalar_part()
    assert abs(poly - fn) < 1e-12


def test_localization_round_trip():
    rho, sigma = sample_equivariant_params(5, 3, 1)
    cfg = GeometryConfig(3, 1, rho=rho, sigma=sigma)
    R = build_classical_ring(cfg)
    x = R.unit() * 0.5 + R.H() * (1 - 2j) + R.H() * R.H() * 3
    assert to_ring(localize(cfg, x), R).allclose(x, 1e-10)


def test_dual_pairing():
    rho, sigma = sample_equivariant_params(6, 3, 1)
    cfg = GeometryConfig(3, 1, rho=rho, sigma=sigma)
    e = LocalizedClass(cfg, "T", [1.0, 0.0, 0.0]).euler()
    dual = LocalizedClass(cfg, "T", [e[0], 0.0, 0.0])
    assert abs(localization_pairing(cfg, fixed_point_class(cfg, 0), dual) - 1) < 1e-14
    assert localization_pairing(cfg, fixed_point_class(cfg, 0), fixed_point_class(cfg, 1)) == 0


def test_pairing_matches_compact_integration():
    cfg = GeometryConfig(2, 0, rho=[0.1, -0.2])
    R = build_classical_ring(cfg)
    x = R.unit() + 2 * R.H()
    y = 3 * R.unit() - R.H()
    a = localization_pairing(cfg, localize(cfg, x), localize(cfg, y))
    assert abs(a - alg_integrate(R, x * y)) < 1e-10


# -- Fourier-Mukai coefficients ----------------------------------------------------

def test_s1_is_all_ones():
    rho, sigma = sample_equivariant_params(9, 4, 1)
    C = fm_coefficients(GeometryConfig(4, 1, rho=rho, sigma=sigma)).C
    assert np.array_equal(C, np.ones((4, 1), complex))


def test_seeded_value_extended_precision():
    cfg = GeometryConfig(3, 2, rho=[0.1, 0.05, -0.17], sigma=[0.2, 0.3])
    C = fm_coefficients(cfg).C
    with mp.workdps(40):
        ref = mp.exp(-0.3j * mp.pi) * mp.sin(0.4 * mp.pi) / mp.sin(0.1 * mp.pi)
    assert abs(C[0, 0] - complex(ref)) < 1e-12
    assert abs(C[0, 0] - (1.8090 - 2.4899j)) < 1e-4


def test_real_roots_phase_structure():
    cfg = GeometryConfig(3, 2, rho=[0.1, 0.05, -0.17], sigma=[0.2, 0.3])
    C = fm_coefficients(cfg).C
    for k in range(3):
        for l in range(2):
            ratio = C[k, l] / np.exp(-1j * math.pi * (cfg.rho[k] + cfg.sigma[l]))
            assert abs(ratio.imag) < 1e-12


def test_u_transform_s1():
    rho, sigma = sample_equivariant_params(9, 3, 1)
    cfg = GeometryConfig(3, 1, rho=rho, sigma=sigma)
    img = u_transform(cfg, fixed_point_class(cfg, 0, "T'"))
    assert np.allclose(img.scalar_values(), 1)


def test_u_transform_linear_and_matrix():
    rho, sigma = sample_equivariant_params(12, 4, 2)
    cfg = GeometryConfig(4, 2, rho=rho, sigma=sigma)
    C = fm_coefficients(cfg).C
    rng = np.random.default_rng(0)
    a, b = rng.normal(size=2) + 1j * rng.normal(size=2), rng.normal(size=2)
    A = LocalizedClass(cfg, "T'", list(a))
    Bc = LocalizedClass(cfg, "T'", list(b))
    lhs = u_transform(cfg, A * 2.0 + Bc).scalar_values()
    rhs = 2 * u_transform(cfg, A).scalar_values() + u_transform(cfg, Bc).scalar_values()
    assert np.allclose(lhs, rhs, atol=1e-12)
    assert np.allclose(u_transform(cfg, A).scalar_values(), C @ a, atol=1e-12)


def test_u_transform_wants_tprime_class():
    rho, sigma = sample_equivariant_params(9, 3, 1)
    cfg = GeometryConfig(3, 1, rho=rho, sigma=sigma)
    with pytest.raises(ConfigError):
        u_transform(cfg, fixed_point_class(cfg, 0, "T"))
