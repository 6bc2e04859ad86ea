import numpy as np
import pytest

from flipqc import germs
from flipqc.algebra import (EigenMultiset, Jet, alg_integrate, eigen_multiset, match_multisets,
                            mult_operator_matrix)
from flipqc.errors import ConfigError
from flipqc.geometry import BaseSpec, GeometryConfig, build_base_ring, build_quantum_ring

EG = 0.5772156649015329


@pytest.fixture
def p1():
    return build_base_ring(BaseSpec.projective(1))


def test_nilpotent_square(p1):
    h = p1.basis(1)
    assert np.allclose((h * h).coeffs, 0)


def test_unit_law(p1):
    rng = np.random.default_rng(3)
    x = p1.element(rng.normal(size=2) + 1j * rng.normal(size=2))
    assert (p1.unit() * x).allclose(x)


def test_quantum_relation_rank2():
    R = build_quantum_ring(GeometryConfig(2, 0), 1.0)
    H = R.H()
    assert (H * H).allclose(R.unit())


def test_integration(p1):
    assert alg_integrate(p1, p1.basis(1)) == 1
    assert alg_integrate(p1, p1.unit()) == 0
    assert alg_integrate(p1, p1.element([2.5, -1.5])) == -1.5


def test_jet_exp():
    x = Jet.variable([3], 0)
    assert np.allclose(x.apply(germs.EXP).coeffs, [1, 1, 0.5])


def test_jet_loggamma_and_gamma():
    x = Jet.variable([3], 0)
    lg = x.apply(germs.LOG_GAMMA_1P).coeffs
    assert np.allclose(lg, [0, -EG, np.pi ** 2 / 12], atol=1e-15)
    g = x.apply(germs.GAMMA_1P).coeffs
    assert np.allclose(g, [1, -EG, (EG ** 2 + np.pi ** 2 / 6) / 2], atol=1e-15)


def test_jet_two_variables_product():
    x = Jet.variable([3, 3], 0)
    y = Jet.variable([3, 3], 1)
    e = (x + y).apply(germs.EXP)
    assert e.allclose(x.apply(germs.EXP) * y.apply(germs.EXP))


def test_jet_order_validation():
    with pytest.raises(ConfigError):
        Jet([0])


def test_mult_matrix_examples():
    R = build_quantum_ring(GeometryConfig(2, 0), 1.0)
    M = mult_operator_matrix(R, 2 * R.H())
    assert np.allclose(M, [[0, 2], [2, 0]])
    assert np.allclose(mult_operator_matrix(R, R.unit()), np.eye(2))
    assert np.allclose(mult_operator_matrix(R, R.zero()), 0)


def test_eigen_multiset_examples():
    ms = eigen_multiset([[0, 2], [2, 0]])
    assert match_multisets(ms, EigenMultiset([(2, 1), (-2, 1)], 1e-6)) < 1e-12
    ms = eigen_multiset(np.eye(3))
    assert ms.pairs == [(1 + 0j, 3)]


def test_eigen_multiset_r3s1():
    R = build_quantum_ring(GeometryConfig(3, 1), 1.0)
    ms = eigen_multiset(mult_operator_matrix(R, 2 * R.H()))
    assert match_multisets(ms, EigenMultiset([(0, 1), (2j, 1), (-2j, 1)], 1e-6)) < 1e-9


def test_jordan_block_clusters_as_one_value():
    # a 4x4 Jordan block in a random orthonormal basis: roundoff splits the eigenvalue by ~eps^(1/4)
    Q, _ = np.linalg.qr(np.random.default_rng(0).normal(size=(4, 4)))
    J = Q @ (2.0 * np.eye(4) + np.eye(4, k=1)) @ Q.T
    ms = eigen_multiset(J)
    assert len(ms.pairs) == 1 and ms.pairs[0][1] == 4
    assert abs(ms.pairs[0][0] - 2) < 1e-9


def test_multiset_size_mismatch_is_infinite():
    a = EigenMultiset([(0, 2)], 1e-6)
    b = EigenMultiset([(0, 1)], 1e-6)
    assert match_multisets(a, b) == np.inf
