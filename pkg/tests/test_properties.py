import math

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from flipqc import germs
from flipqc.algebra import Jet, cluster_values, match_multisets
from flipqc.charclasses import reflection_identity_check
from flipqc.fm import u_transform
from flipqc.geometry import GeometryConfig, build_quantum_ring, sample_equivariant_params
from flipqc.localization import LocalizedClass, residue_pushforward
from flipqc.meijer import MeijerParams, meijer_series_eval

small = st.floats(-2, 2, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, small, small)
seeds = st.integers(0, 2 ** 32 - 1)
SETTINGS = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _elem(R, coeffs):
    return R.element(np.asarray(coeffs[:R.dim], complex))


@SETTINGS
@given(st.lists(cplx, min_size=18, max_size=18), st.sampled_from([(2, 0), (3, 1), (3, 2)]), cplx)
def test_quantum_ring_is_commutative_and_associative(cs, rs, q):
    r, s = rs
    R = build_quantum_ring(GeometryConfig(r, s), q)
    x, y, z = _elem(R, cs[:R.dim]), _elem(R, cs[6:6 + R.dim]), _elem(R, cs[12:12 + R.dim])
    tol = 1e-10 * (1 + abs(q)) ** 3 * 50
    assert (x * y).allclose(y * x, tol)
    assert ((x * y) * z).allclose(x * (y * z), tol)
    assert (x * R.unit()).allclose(x, 1e-14)


def _poly_jet(c0, cs):
    x = Jet.variable([6], 0)
    return sum((c * x ** (k + 1) for k, c in enumerate(cs)), Jet.constant([6], c0))


@SETTINGS
@given(st.lists(small, min_size=5, max_size=5), st.lists(small, min_size=5, max_size=5), st.floats(-1, 1))
def test_jet_exp_addition_law(a, b, c0):
    ja, jb = _poly_jet(c0, a), _poly_jet(0.0, b)
    lhs = ja.apply(germs.EXP) * jb.apply(germs.EXP)
    rhs = (ja + jb).apply(germs.EXP)
    assert abs(ja.apply(germs.EXP).constant_term() - math.exp(c0)) < 1e-12 * math.exp(abs(c0))
    assert lhs.allclose(rhs, 1e-10 * (1 + max(map(abs, a + b))) ** 5 * math.exp(abs(c0)))


@SETTINGS
@given(st.lists(st.floats(-0.5, 0.5), min_size=5, max_size=5))
def test_gamma_times_reciprocal_gamma(cs):
    j = _poly_jet(0.0, cs)
    prod = j.apply(germs.GAMMA_1P) * j.apply(germs.RGAMMA_1P)
    assert prod.allclose(Jet.constant([6], 1.0), 1e-11)


@settings(max_examples=6, deadline=None)
@given(st.integers(1, 6))
def test_reflection_any_order(order):
    ok, err = reflection_identity_check(order)
    assert ok and err < 1e-12


@SETTINGS
@given(st.lists(cplx, min_size=1, max_size=8), st.randoms(use_true_random=False))
def test_multiset_matching_is_permutation_invariant(vals, rnd):
    a = cluster_values(np.array(vals), 1e-12)
    shuffled = list(vals)
    rnd.shuffle(shuffled)
    b = cluster_values(np.array(shuffled), 1e-12)
    assert a.size == len(vals) == b.size
    assert match_multisets(a, b) < 1e-12


@SETTINGS
@given(seeds, st.lists(cplx, min_size=5, max_size=5), st.lists(cplx, min_size=5, max_size=5), cplx)
def test_pushforward_is_linear(seed, f, g, c):
    rho, sigma = sample_equivariant_params(seed, 3, 1)
    cfg = GeometryConfig(3, 1, rho=rho, sigma=sigma)
    lhs = residue_pushforward(cfg, [c * a + b for a, b in zip(f, g)]).scalar_part()
    rhs = c * residue_pushforward(cfg, f).scalar_part() + residue_pushforward(cfg, g).scalar_part()
    scale = 1 + sum(map(abs, f)) * (1 + abs(c)) + sum(map(abs, g))
    assert abs(lhs - rhs) < 1e-10 * scale


@SETTINGS
@given(st.lists(st.floats(-0.3, 0.3), min_size=2, max_size=6), st.floats(0.2, 4.0), st.floats(-1.0, 1.0))
def test_meijer_conjugation_symmetry(bs, t, arg):
    r = max(1, len(bs) - 1)
    b = [complex(x, 0.05 * (i + 1)) for i, x in enumerate(bs[:r])]
    a = [1 - complex(x, -0.03) for x in bs[r:]][: r - 1]
    P = MeijerParams.of(a, b)
    Pc = MeijerParams.of([x.conjugate() for x in a], [x.conjugate() for x in b])
    v = meijer_series_eval(P, t, arg)
    w = meijer_series_eval(Pc, t, -arg)
    assert abs(v - w.conjugate()) < 1e-9 * abs(v)


@SETTINGS
@given(seeds, st.lists(cplx, min_size=4, max_size=4), cplx)
def test_fm_transform_is_linear(seed, xs, c):
    rho, sigma = sample_equivariant_params(seed, 4, 2)
    cfg = GeometryConfig(4, 2, rho=rho, sigma=sigma)
    A = LocalizedClass(cfg, "T'", xs[:2])
    B = LocalizedClass(cfg, "T'", xs[2:])
    lhs = u_transform(cfg, A * c + B).scalar_values()
    rhs = c * u_transform(cfg, A).scalar_values() + u_transform(cfg, B).scalar_values()
    assert np.allclose(lhs, rhs, atol=1e-9 * (1 + np.abs(rhs).max()))


@SETTINGS
@given(seeds, st.sampled_from([(2, 0), (3, 1), (4, 2), (5, 2)]))
def test_sampled_roots_are_generic_and_small(seed, rs):
    r, s = rs
    rho, sigma = sample_equivariant_params(seed, r, s)
    GeometryConfig(r, s, rho=rho, sigma=sigma)
    assert all(abs(x) <= 0.3 for x in list(rho) + list(sigma))
    assert sample_equivariant_params(seed, r, s) == (rho, sigma)
