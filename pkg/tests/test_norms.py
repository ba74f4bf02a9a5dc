import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixbound import grid as gr
from mixbound import mixing as mx
from mixbound import norms as nm
from mixbound import processes as pr
from mixbound import function_classes as fc


PROFILES = [mx.iid_profile(), mx.m_dependent_profile(7),
            mx.polynomial_profile(1.5), mx.exponential_profile(0.8)]


@st.composite
def curves(draw):
    k = draw(st.integers(1, 8))
    vals = draw(st.lists(st.floats(0.01, 10.0), min_size=k, max_size=k))
    raw = draw(st.lists(st.floats(0.05, 1.0), min_size=k, max_size=k))
    probs = np.asarray(raw) / np.sum(raw)
    return nm.QuantileCurve.from_discrete(np.asarray(vals), probs)


def brute_force_norm(curve, q, profile, points=10**6):
    """Riemann-midpoint evaluation of the defining integral (dev oracle)."""
    u = (np.arange(points) + 0.5) / points
    half = np.sort(profile.half_levels(q))
    mu = half.size - np.searchsorted(half, u, side="left")
    return math.sqrt(2.0 * float(np.mean(mu * curve.q_at(u) ** 2)))


def test_active_lag_count_examples():
    assert nm.active_lag_count(0.3, 9, mx.iid_profile()) == 1
    assert nm.active_lag_count(0.2, 3, mx.polynomial_profile(1.0)) == 2
    for prof in PROFILES:
        assert nm.active_lag_count(0.51, 50, prof) == 0


@given(st.floats(0.001, 1.0), st.integers(0, 60))
def test_active_lag_count_monotone(u, q):
    for prof in PROFILES:
        assert nm.active_lag_count(u, q, prof) <= nm.active_lag_count(u, q + 1, prof)
        if u < 0.999:
            assert nm.active_lag_count(u + 0.001, q, prof) <= \
                nm.active_lag_count(u, q, prof)


def test_quantile_curve_from_discrete():
    c = nm.QuantileCurve.from_discrete([0, 1], [0.7, 0.3])
    assert c.breaks == (0.3,) and c.values == (1.0,)
    assert c.q_at(0.1) == 1.0 and c.q_at(0.3) == 0.0
    assert math.isclose(c.l2_norm(), math.sqrt(0.3))


def test_two_point_norm_under_independence():
    c = nm.QuantileCurve.from_discrete([0, 1], [0.7, 0.3])
    got = nm.dependence_norm(c, 5, mx.iid_profile())
    assert math.isclose(got, math.sqrt(2 * 0.3), rel_tol=1e-14)
    assert math.isclose(got, brute_force_norm(c, 5, mx.iid_profile()), rel_tol=1e-4)


def test_constant_curve_norm_factors_out():
    prof = mx.exponential_profile(0.6)
    c = nm.QuantileCurve.constant(2.5)
    base = nm.dependence_norm(nm.QuantileCurve.constant(1.0), 8, prof)
    assert math.isclose(nm.dependence_norm(c, 8, prof), 2.5 * base, rel_tol=1e-14)


@given(curves(), st.integers(0, 40))
@settings(max_examples=50, deadline=None)
def test_norm_monotone_in_q_and_dominates_l2(curve, q):
    for prof in PROFILES:
        a = nm.dependence_norm(curve, q, prof)
        b = nm.dependence_norm(curve, q + 5, prof)
        assert b >= a * (1 - 1e-12)
        assert a >= curve.l2_norm() * (1 - 1e-12)


@given(curves(), st.integers(0, 40), st.floats(2.1, 9.0))
@settings(max_examples=60, deadline=None)
def test_holder_comparison(curve, q, r):
    for prof in PROFILES:
        lhs = nm.dependence_norm(curve, q, prof)
        rhs = nm.holder_factor(q, r, prof) * curve.lr_norm(r)
        assert lhs <= rhs * (1 + 1e-12)


def test_exact_norm_matches_brute_force():
    rng = np.random.default_rng(3)
    for _ in range(5):
        k = rng.integers(1, 6)
        curve = nm.QuantileCurve.from_discrete(rng.uniform(0, 4, k),
                                               rng.dirichlet(np.ones(k)))
        prof = PROFILES[rng.integers(len(PROFILES))]
        q = int(rng.integers(0, 20))
        exact = nm.dependence_norm(curve, q, prof)
        approx = brute_force_norm(curve, q, prof)
        assert math.isclose(exact, approx, rel_tol=2e-4)


def test_holder_factor_iid_closed_form():
    for r in (2.5, 4.0, 8.0):
        expect = math.sqrt(2.0) * 0.5 ** ((r - 2) / (2 * r))
        assert math.isclose(nm.holder_factor(17, r, mx.iid_profile()), expect,
                            rel_tol=1e-14)


def test_holder_factor_rejects_small_r():
    with pytest.raises(ValueError):
        nm.holder_factor(3, 2.0, mx.iid_profile())


def test_count_sandwich_lower_always_holds():
    # The lower half of the squeeze survives flat profiles everywhere.
    prof = mx.tabulated_profile([1.0, 0.5, 0.5, 0.5, 0.1])
    for u in np.linspace(0.01, 1.0, 97):
        for q in (1, 5, 30):
            mu = nm.active_lag_count(float(u), q, prof)
            assert min(prof.inverse(min(2 * u, 1.0)), q + 1) <= mu


def test_block_moment_analytic_ar1():
    rho, q = 0.6, 9
    model = pr.ar1_model(rho)
    member = fc.make_class("identity", model).members[0]
    got = nm.block_moment(model, member, q, order=2.0)
    assert got.method == "analytic"
    var = model.marginal_sd() ** 2
    k = np.arange(1, q)
    expect = var * (q + 2 * ((q - k) * rho**k).sum()) / q
    assert math.isclose(got.value**2, expect, rel_tol=1e-12)


def test_block_moment_iid_identity():
    model = pr.iid_model()
    member = fc.make_class("identity", model).members[0]
    assert math.isclose(nm.block_moment(model, member, 12, 2.0).value, 1.0,
                        rel_tol=1e-12)


def test_block_moment_mc_matches_analytic():
    model = pr.ar1_model(0.5)
    member = fc.make_class("identity", model).members[0]
    analytic = nm.block_moment(model, member, 8, order=2.0).value
    mc = nm.block_moment(pr.ar1_model(0.5), fc.ClassMember(
        name="linear", func=lambda x: x, mean=0.0), 8, order=2.0, reps=40000, seed=9)
    assert mc.method == "monte_carlo"
    assert abs(mc.value - analytic) <= 4 * mc.std_error + 1e-3


def test_block_moment_sup_rule():
    member = fc.ClassMember(name="b", func=np.tanh, mean=0.0, sup_bound=2.0)
    got = nm.block_moment(pr.iid_model(), member, 9, order=math.inf)
    assert got.value == 6.0 and got.method == "sup_rule"


def test_block_moment_monotone_in_order():
    model = pr.ar1_model(0.4)
    member = fc.make_class("lipschitz4", model).members[1]
    m2 = nm.block_moment(model, member, 8, order=2.0, reps=20000, seed=4).value
    m4 = nm.block_moment(model, member, 8, order=4.0, reps=20000, seed=4).value
    assert m4 >= m2 * (1 - 1e-9)


def test_tail_truncation_bound():
    rng = np.random.default_rng(12)
    profiles = PROFILES
    tested = 0
    for _ in range(120):
        k = rng.integers(1, 8)
        curve = nm.QuantileCurve.from_discrete(rng.uniform(0, 5, k),
                                               rng.dirichlet(np.ones(k)))
        prof = profiles[rng.integers(len(profiles))]
        n = int(rng.choice(gr.lattice_members(3, 3000)[3:]))
        sched = gr.block_schedule(n, prof)
        levels = [k2 for k2 in range(sched.depth + 1) if sched.q_seq[k2] > 1]
        if not levels:
            continue
        k2 = int(rng.choice(levels))
        qnk = sched.q_seq[k2]
        fq = nm.dependence_norm(curve, qnk, prof)
        cut = 2 * math.sqrt(n) * fq / math.sqrt(2.0 ** (k2 + 2)) / qnk
        lhs = curve.truncated_mean_above(cut)
        rhs = math.sqrt(2) * fq * math.sqrt(2.0 ** (k2 + 1) / n)
        assert lhs <= rhs * (1 + 1e-12)
        tested += 1
    assert tested >= 60
