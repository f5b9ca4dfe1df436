"""Cumulant bundles, mixed-cumulant recovery, and information geometry."""

import random

import numpy as np
import pytest

from gradcorr.cumulants import (CumulantBundle, HypothesisSpec,
                                IllConditionedInformationError,
                                build_geometry, derive_mixed_cumulants)
from gradcorr.models import make_model
from oracles import bundle_to_float_arrays, random_integer_bundle


def _bundle(p, kappa2=None, **overrides):
    """Minimal valid bundle: kappa2 = -I, everything else zero."""
    arrays = dict(
        kappa2=-np.eye(p) if kappa2 is None else np.asarray(kappa2, float),
        kappa3=np.zeros((p, p, p)),
        kappa4=np.zeros((p, p, p, p)),
        d_kappa2=np.zeros((p, p, p)),
        d_kappa3=np.zeros((p, p, p, p)),
        dd_kappa2=np.zeros((p, p, p, p)),
    )
    arrays.update(overrides)
    return CumulantBundle(**arrays)


def test_hypothesis_spec_validation():
    HypothesisSpec(p=3, q=2)
    with pytest.raises(ValueError):
        HypothesisSpec(p=2, q=0)
    with pytest.raises(ValueError):
        HypothesisSpec(p=2, q=3)
    with pytest.raises(ValueError):
        HypothesisSpec(p=3, q=2, theta10=(1.0,))


def test_bundle_rejects_bad_shape():
    with pytest.raises(ValueError):
        _bundle(2, kappa3=np.zeros((2, 2)))
    with pytest.raises(ValueError):
        _bundle(2, kappa4=np.zeros((2, 2, 2)))


def test_bundle_rejects_broken_symmetry():
    bad3 = np.zeros((2, 2, 2))
    bad3[0, 1, 0] = 1.0     # kappa3 must be fully symmetric
    with pytest.raises(ValueError):
        _bundle(2, kappa3=bad3)
    badd = np.zeros((2, 2, 2, 2))
    badd[0, 0, 0, 1] = 1.0  # dd_kappa2 symmetric in its last two axes
    with pytest.raises(ValueError):
        _bundle(2, dd_kappa2=badd)


def test_bundle_requires_negative_definite_kappa2():
    with pytest.raises(ValueError):
        _bundle(2, kappa2=np.eye(2))
    with pytest.raises(ValueError):
        _bundle(2, kappa2=np.diag([-1.0, 0.0]))


def test_zero_higher_cumulants_give_zero_derived():
    d = derive_mixed_cumulants(_bundle(3))
    assert not d.kappa_21.any()
    assert not d.kappa_31.any()
    assert not d.kappa_13.any()
    assert not d.T.any()


def test_kappa21_vanishes_when_dkappa2_equals_kappa3():
    # the Bartlett identity kappa_{jr,s} = kappa_{jr}^{(s)} - kappa_{jrs}
    rng = np.random.default_rng(7)
    sym = rng.normal(size=(2, 2, 2))
    sym = sym + sym.transpose(1, 0, 2) + sym.transpose(2, 1, 0) \
        + sym.transpose(0, 2, 1) + sym.transpose(1, 2, 0) \
        + sym.transpose(2, 0, 1)
    b = _bundle(2, kappa3=sym, d_kappa2=sym)
    d = derive_mixed_cumulants(b)
    assert np.allclose(d.kappa_21, 0.0, atol=1e-15)


def test_exponential_mixed_cumulant_example():
    # mean-one exponential at phi = 1: kappa_pp = -1, kappa_ppp = 4,
    # kappa_pp^(p) = 2, hence kappa_{pp,p} = 2 - 4 = -2
    b = make_model("exponential").cumulants(np.array([1.0]))
    assert abs(b.kappa2[0, 0] + 1.0) <= 1e-12
    assert abs(b.kappa3[0, 0, 0] - 4.0) <= 1e-12
    assert abs(b.d_kappa2[0, 0, 0] - 2.0) <= 1e-12
    d = derive_mixed_cumulants(b)
    assert abs(d.kappa_21[0, 0, 0] + 2.0) <= 1e-12


def test_exponential_bartlett_identity_monte_carlo():
    # kappa_{pp,p} = cov(per-obs d2 loglik, per-obs score) estimated by
    # the mean of n*(xbar-1)*(1-2*xbar) over replicates; must bracket -2
    n, reps = 200, 50_000
    rng = np.random.default_rng(20260814)
    x = rng.exponential(1.0, size=(reps, n))
    xbar = x.mean(axis=1)
    vals = n * (xbar - 1.0) * (1.0 - 2.0 * xbar)
    est = vals.mean()
    se = vals.std(ddof=1) / np.sqrt(reps)
    assert abs(est - (-2.0)) <= 3.0 * se


def test_geometry_full_parameter_null():
    b = _bundle(3, kappa2=-np.diag([2.0, 3.0, 4.0]))
    g = build_geometry(b, HypothesisSpec(p=3, q=3))
    assert np.allclose(g.A, 0.0)
    assert np.allclose(g.M, g.Kinv)
    assert np.allclose(g.K, np.diag([2.0, 3.0, 4.0]))


def test_geometry_diagonal_information():
    b = _bundle(2, kappa2=-np.diag([4.0, 5.0]))
    g = build_geometry(b, HypothesisSpec(p=2, q=1))
    assert np.allclose(g.Kinv, np.diag([0.25, 0.2]))
    assert np.allclose(g.A, np.diag([0.0, 0.2]))
    assert np.allclose(g.M, np.diag([0.25, 0.0]))


def test_geometry_hand_worked_two_by_two():
    b = _bundle(2, kappa2=-np.array([[2.0, 1.0], [1.0, 1.0]]))
    g = build_geometry(b, HypothesisSpec(p=2, q=1))
    assert np.allclose(g.Kinv, [[1.0, -1.0], [-1.0, 2.0]], atol=1e-12)
    assert np.allclose(g.A, np.diag([0.0, 1.0]), atol=1e-12)
    assert np.allclose(g.M, [[1.0, -1.0], [-1.0, 1.0]], atol=1e-12)


def test_geometry_identities_on_random_bundles():
    # M K M = M and K Kinv = I for arbitrary valid bundles
    rng = random.Random(314159)
    for p, q in [(2, 1), (3, 1), (3, 2), (4, 2), (5, 3)]:
        raw = random_integer_bundle(p, rng)
        b = CumulantBundle(**bundle_to_float_arrays(raw))
        g = build_geometry(b, HypothesisSpec(p=p, q=q))
        assert np.allclose(g.M @ g.K @ g.M, g.M, atol=1e-9)
        assert np.allclose(g.K @ g.Kinv, np.eye(p), atol=1e-10)


def test_geometry_rejects_mismatched_hypothesis():
    with pytest.raises(ValueError):
        build_geometry(_bundle(2), HypothesisSpec(p=3, q=1))


def test_ill_conditioned_information_raises():
    eps = 1e-14
    k2 = -np.array([[1.0, 1.0 - eps], [1.0 - eps, 1.0]])
    b = _bundle(2, kappa2=k2)
    with pytest.raises(IllConditionedInformationError):
        build_geometry(b, HypothesisSpec(p=2, q=1))
