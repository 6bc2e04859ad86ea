import numpy as np
import pytest
from scipy.special import zeta

from flipqc import germs
from flipqc.algebra import Jet
from flipqc.charclasses import (ClassKind, ch_line, char_class, psi_m, reflection_identity_check,
                                relative_gamma_T, todd_from_gamma_check)
from flipqc.geometry import GeometryConfig, build_classical_ring

EG = 0.5772156649015329


def test_gamma_single_root():
    x = Jet.variable([3], 0)
    g = char_class(ClassKind.GAMMA, [x])
    assert np.allclose(g.coeffs, [1, -EG, (EG ** 2 + np.pi ** 2 / 6) / 2], atol=1e-15)


def test_logamma_against_zeta_series():
    x = Jet.variable([8], 0)
    c = x.apply(germs.LOG_GAMMA_1P).coeffs
    ref = [0, -EG] + [(-1) ** k * zeta(k) / k for k in range(2, 8)]
    assert np.allclose(c, ref, atol=1e-14)


def test_ch_line_bundle():
    cfg = GeometryConfig(2, 0)
    R = build_classical_ring(cfg)
    assert ch_line(cfg, 3, R).allclose(R.unit() + 2j * np.pi * 3 * R.H())


def test_empty_gamma():
    assert char_class(ClassKind.GAMMA, [], like=Jet.constant([2], 1.0)).allclose(Jet.constant([2], 1.0))


@pytest.mark.parametrize("order", [1, 3, 5, 6])
def test_reflection(order):
    ok, err = reflection_identity_check(order)
    assert ok and err < 1e-12


def test_reflection_values():
    x = Jet.variable([5], 0)
    lhs = x.apply(germs.GAMMA_1P) * x.apply(germs.GAMMA_1M)
    assert np.allclose(lhs.coeffs, [1, 0, np.pi ** 2 / 6, 0, 7 * np.pi ** 4 / 360], atol=1e-13)


def test_todd_from_gamma():
    assert todd_from_gamma_check([Jet.variable([4], 0)]) < 1e-12
    x, y = Jet.variable([3, 3], 0), Jet.variable([3, 3], 1)
    assert todd_from_gamma_check([x, y]) < 1e-12
    assert todd_from_gamma_check([]) == 0


def test_relative_gamma_projective_line():
    cfg = GeometryConfig(2, 0)
    R = build_classical_ring(cfg)
    g = relative_gamma_T(cfg, ring=R)
    assert np.allclose([c.scalar_part() for c in R.H_coefficients(g)], [1, -2 * EG])
    c1 = GeometryConfig(1, 0)
    R1 = build_classical_ring(c1)
    assert relative_gamma_T(c1, ring=R1).allclose(R1.unit())


def test_psi_s0_is_line_bundle():
    cfg = GeometryConfig(2, 0)
    R = build_classical_ring(cfg)
    assert psi_m(cfg, 2, ring=R).allclose(ch_line(cfg, 2, R))


def test_psi_s1_point():
    cfg = GeometryConfig(2, 1)
    R = build_classical_ring(cfg)
    H = R.H()
    tp = 2j * np.pi
    # (2 pi i)(-H) (1 - e^{2 pi i H})/(-2 pi i H) = (2 pi i)(-H)(1 + pi i H) truncated at H^2 = 0
    expect = tp * (-H) * (R.unit() + 1j * np.pi * H)
    assert psi_m(cfg, 0, ring=R).allclose(expect)
    assert psi_m(cfg, 0, trivial_todd=True, ring=R).allclose(tp * (-H))
