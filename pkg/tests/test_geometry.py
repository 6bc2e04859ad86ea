import numpy as np
import pytest

from flipqc.errors import ConfigError
from flipqc.geometry import (BaseSpec, GeometryConfig, build_base_ring, build_classical_ring, build_quantum_ring,
                             c1_element, fixed_locus_data, genericity_violations, sample_equivariant_params)


def test_base_rings():
    assert build_base_ring(BaseSpec.point()).dim == 1
    p1 = build_base_ring(BaseSpec.projective(1))
    assert p1.dim == 2 and np.allclose((p1.basis(1) * p1.basis(1)).coeffs, 0)
    pp = build_base_ring(BaseSpec.product(BaseSpec.projective(1), BaseSpec.projective(1)))
    assert pp.dim == 4
    assert pp.basis_labels[pp.top_index] == "h1*h2"


def test_quantum_relations():
    R = build_quantum_ring(GeometryConfig(2, 0), 1.0)
    assert (R.H() * R.H()).allclose(R.unit())
    R = build_quantum_ring(GeometryConfig(3, 1), 0.8)
    H = R.H()
    assert (H * (H * H)).allclose(-(0.8 ** 2) * H)


def test_classical_limit():
    cfg = GeometryConfig(3, 1)
    R0 = build_quantum_ring(cfg, 0.0)
    assert np.allclose((R0.H() ** 3).coeffs, 0)
    Rc = build_classical_ring(cfg)
    assert np.allclose(Rc.struct_consts, R0.struct_consts)


def test_c1_examples():
    cfg = GeometryConfig(3, 1)
    R = build_classical_ring(cfg)
    assert c1_element(cfg, R).allclose(2 * R.H())
    cfg = GeometryConfig(2, 0, rho=[0.1, -0.2])
    R = build_classical_ring(cfg)
    assert c1_element(cfg, R).allclose(2 * R.H() - 0.1 * R.unit())
    cfg = GeometryConfig(2, 0, BaseSpec.projective(1), rho=[[0, 0], [0, 1]])
    R = build_classical_ring(cfg)
    h = R.from_base(cfg.base_ring.basis(1))
    assert c1_element(cfg, R).allclose(2 * R.H() + 3 * h)


def test_sampled_roots():
    a = sample_equivariant_params(1, 2, 0)
    assert a == sample_equivariant_params(1, 2, 0)
    rho, _ = a
    assert abs(rho[0] - rho[1]) > 0.02
    rho, sigma = sample_equivariant_params(2, 3, 2)
    assert len(rho) + len(sigma) == 5
    assert not genericity_violations(rho, sigma)
    assert all(abs(x) <= 0.3 for x in rho + sigma)


def test_euler_classes():
    d = fixed_locus_data(GeometryConfig(2, 0, rho=[0.1, -0.2]))
    assert np.isclose(d.T_euler[0], -0.3)
    assert d.Tp_euler == []
    d = fixed_locus_data(GeometryConfig(2, 1, rho=[0.1, -0.2], sigma=[0.25]))
    assert np.isclose(d.T_euler[0], -0.105)


def test_config_validation():
    with pytest.raises(ConfigError):
        GeometryConfig(2, 2)
    with pytest.raises(ConfigError):
        GeometryConfig(2, 0, rho=[0.1, 0.1])
    with pytest.raises(ConfigError):
        GeometryConfig(2, 0, rho=[0.5, 0.1])
    with pytest.raises(ConfigError):
        GeometryConfig(2, 0, mode="weird")
