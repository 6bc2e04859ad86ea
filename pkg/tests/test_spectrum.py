import numpy as np
import pytest

from flipqc.algebra import EigenMultiset, match_multisets, mult_operator_matrix
from flipqc.geometry import BaseSpec, GeometryConfig
from flipqc.spectrum import (c1_matrix_in_Q, char_poly_block_check, computed_spectrum, euler_field_spectrum,
                             theoretical_spectrum)

P1 = BaseSpec.projective(1)


def _ms(pairs):
    return EigenMultiset(pairs, 1e-6)


def test_theoretical_examples():
    w = np.exp(-2j * np.pi / 3)
    assert match_multisets(theoretical_spectrum(GeometryConfig(3, 0)), _ms([(3, 1), (3 * w, 1), (3 * w * w, 1)])) < 1e-12
    assert match_multisets(theoretical_spectrum(GeometryConfig(3, 1)), _ms([(0, 1), (-2j, 1), (2j, 1)])) < 1e-12
    assert match_multisets(theoretical_spectrum(GeometryConfig(4, 2, P1)), _ms([(-2, 2), (2, 2), (0, 4)])) < 1e-12


def test_computed_examples():
    assert computed_spectrum(GeometryConfig(3, 1)).max_match_error < 1e-9
    q = 0.7 * np.exp(1j * np.pi / 5)
    rep = computed_spectrum(GeometryConfig(2, 0), q)
    assert match_multisets(rep.computed, _ms([(2 * q, 1), (-2 * q, 1)])) < 1e-9
    rep = computed_spectrum(GeometryConfig(3, 1, P1), 0.0)
    assert np.abs(rep.computed.values()).max() < 1e-6


def test_charpoly_direct_determinant():
    cfg = GeometryConfig(3, 1)
    M = sum(c1_matrix_in_Q(cfg))
    assert np.allclose(np.poly(M), [1, 0, 4, 0], atol=1e-12)
    assert char_poly_block_check(cfg) < 1e-12
    q = 0.7 * np.exp(1j * np.pi / 5)
    M = sum(P * q ** (2 * k) for k, P in enumerate(c1_matrix_in_Q(GeometryConfig(2, 0))))
    assert np.allclose(np.poly(M), [1, 0, -4 * q * q], atol=1e-12)


def test_charpoly_p1():
    cfg = GeometryConfig(3, 1, P1)
    M = sum(c1_matrix_in_Q(cfg))
    expect = np.polymul([1, 0, 4, 0], [1, 0, 4, 0])
    assert np.allclose(np.poly(M), expect, atol=1e-9)
    assert char_poly_block_check(cfg) < 1e-8


@pytest.mark.parametrize("r,s,gamma", [(3, 1, [0, 5]), (4, 2, [0, 1])])
def test_euler_field_spectrum(r, s, gamma):
    cfg = GeometryConfig(r, s, P1)
    rep = euler_field_spectrum(cfg, 1.0, gamma)
    assert match_multisets(rep.computed, computed_spectrum(cfg).computed) < 1e-8
    assert rep.max_match_error < 1e-8


def test_euler_field_gamma_zero_matches():
    cfg = GeometryConfig(3, 1, P1)
    a = euler_field_spectrum(cfg, 1.0, [0, 0])
    assert match_multisets(a.computed, computed_spectrum(cfg).computed) < 1e-12


def test_c1_matrix_decomposition_is_exact():
    cfg = GeometryConfig(4, 1, P1)
    from flipqc.geometry import BundleRing, c1_element
    Q = 0.37 - 0.2j
    ring = BundleRing(cfg, 1.0, q_power=Q)
    direct = mult_operator_matrix(ring, c1_element(cfg, ring))
    sumd = sum(P * Q ** k for k, P in enumerate(c1_matrix_in_Q(cfg)))
    assert np.allclose(direct, sumd, atol=1e-10)
