import math

import numpy as np
import pytest

from flipqc.asymptotics import (BasisClass, asymptotic_class_check, basis_charge, central_charge_meijer,
                                decompose_class, exponential_ray, exponential_sector, fm_class, psi_class,
                                tame_equivalence_report, tame_ray, tame_sector)
from flipqc.errors import ConfigError
from flipqc.geometry import GeometryConfig, sample_equivariant_params
from flipqc.spectrum import eigenvalue_lambda


def _cfg(r, s, seed=7):
    rho, sigma = sample_equivariant_params(seed, r, s)
    return GeometryConfig(r, s, rho=rho, sigma=sigma)


def test_decomposition_recovers_basis_classes():
    cfg = _cfg(4, 2)
    cls = psi_class(cfg, 0) * 2.0 + fm_class(cfg, 1) * (1 - 1j)
    parts = dict(decompose_class(cfg, cls, theta=math.pi / 2))
    assert abs(parts[BasisClass("psi", 0)] - 2) < 1e-9
    assert abs(parts[BasisClass("fm", 1)] - (1 - 1j)) < 1e-9
    assert len(parts) == 2


def test_decomposed_charge_matches_basis_charge():
    cfg = _cfg(3, 1)
    L = complex(math.log(2.0), 0.3)
    a = basis_charge(cfg, BasisClass("psi", 1), L)
    b = central_charge_meijer(cfg, psi_class(cfg, 1), 2.0, 1.0, 0.3)
    assert a.rel_diff(b) < 1e-9


def test_sectors():
    cfg = _cfg(4, 1)
    for m in range(3):
        assert exponential_sector(cfg, m, exponential_ray(cfg, m))
    assert tame_sector(cfg, tame_ray(cfg))
    assert not tame_sector(cfg, tame_ray(cfg) + math.pi)


def test_weak_check_r4s1_correct_eigenvalue():
    cfg = _cfg(4, 1)
    rep = asymptotic_class_check(cfg, BasisClass("psi", 0), eigenvalue_lambda(0, 4, 1, 1.0), -math.pi / 3)
    assert rep.passed and abs(rep.fitted_slope[0] - 2) < 0.1
    assert rep.in_sector


def test_wrong_eigenvalue_blows_up():
    cfg = _cfg(4, 1)
    lam = eigenvalue_lambda(1, 4, 1, 1.0)
    rep = asymptotic_class_check(cfg, BasisClass("psi", 0), lam, exponential_ray(cfg, 1))
    assert rep.overflow and not rep.passed


def test_wrong_eigenvalue_on_own_ray_fails_exponent():
    # on the ray of lambda_0 the mismatched exponential decays instead: bounded but not the expected power
    cfg = _cfg(4, 1)
    rep = asymptotic_class_check(cfg, BasisClass("psi", 0), eigenvalue_lambda(1, 4, 1, 1.0), -math.pi / 3)
    assert not rep.passed and rep.fitted_slope[0] > 10


def test_projective_line_check():
    cfg = GeometryConfig(2, 0)
    rep = asymptotic_class_check(cfg, psi_class(cfg, 0), 2.0, 0.0)
    assert rep.passed and abs(rep.fitted_slope[0] - 0.5) < 0.1


def test_strong_check_lowers_slope_per_derivative():
    cfg = _cfg(3, 1)
    rep = asymptotic_class_check(cfg, BasisClass("psi", 0), eigenvalue_lambda(0, 3, 1, 1.0),
                                 exponential_ray(cfg, 0), strength="strong", derivative_order=2)
    assert rep.passed
    slopes = [rep.fitted_slope[i] for i in range(3)]
    assert np.allclose(np.diff(slopes), -1, atol=0.1)


def test_tame_report():
    cfg = _cfg(3, 1, seed=3)
    rep = tame_equivalence_report(cfg, 0, zgrid=np.geomspace(1.0, 1e-2, 8))
    assert rep.passed and rep.ratio_dev[-1] < 1e-2
    assert rep.boundedness.fitted_slope[0] > -10


def test_grid_validation():
    cfg = _cfg(3, 1)
    with pytest.raises(ConfigError):
        asymptotic_class_check(cfg, BasisClass("psi", 0), 1.0, 0.0, zgrid=[0.1, 0.05, 0.01])
    with pytest.raises(ConfigError):
        asymptotic_class_check(cfg, BasisClass("psi", 0), 1.0, 0.0, strength="medium")


def test_report_json_has_tolerance():
    cfg = GeometryConfig(2, 0)
    js = asymptotic_class_check(cfg, psi_class(cfg, 0), 2.0, 0.0).to_json()
    assert js["tolerance"] == 0.1 and js["verdict"] == "pass"
    assert len(js["samples"]) == 12
