import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixbound import mixing as mx
from mixbound import processes as pr
from mixbound import function_classes as fc


PROFILES = st.one_of(
    st.just(mx.iid_profile()),
    st.integers(1, 20).map(mx.m_dependent_profile),
    st.floats(0.1, 5.0, allow_nan=False).map(mx.polynomial_profile),
    st.floats(0.05, 0.95, allow_nan=False).map(mx.exponential_profile),
)


def test_theta_values():
    md = mx.m_dependent_profile(3)
    assert md.theta(2) == 1.0 and md.theta(3) == 0.0
    assert mx.polynomial_profile(2.0).theta(1) == 0.25
    assert mx.iid_profile().theta(7) == 0.0


@given(PROFILES, st.integers(0, 200))
def test_theta_monotone_and_normalized(prof, q):
    vals = prof.theta(np.arange(q + 1))
    vals = np.atleast_1d(vals)
    assert vals[0] == 1.0
    assert np.all(vals >= 0) and np.all(vals <= 1)
    assert np.all(np.diff(vals) <= 0)


def test_inverse_examples():
    assert mx.polynomial_profile(1.0).inverse(0.2) == 4
    assert mx.m_dependent_profile(5).inverse(0.5) == 5
    for prof in (mx.iid_profile(), mx.polynomial_profile(2.0)):
        assert prof.inverse(1.0) == 0


@given(PROFILES, st.floats(1e-6, 1.0, allow_nan=False))
def test_inverse_consistency(prof, u):
    s = prof.inverse(u)
    assert prof.theta(s) <= u
    if s > 0:
        assert prof.theta(s - 1) > u


@given(PROFILES, st.integers(0, 50))
def test_inverse_of_theta(prof, q):
    assert prof.inverse(prof.theta(q)) <= q


def test_monotone_envelope():
    env = mx.monotone_envelope([1, 0.2, 0.5, 0.1])
    assert tuple(env.table) == (1, 0.5, 0.5, 0.1)
    already = mx.monotone_envelope([1, 0.5, 0.25])
    assert tuple(already.table) == (1, 0.5, 0.25)
    with pytest.raises(mx.ProfileError):
        mx.monotone_envelope([1, 2.0, 0.5])


@given(st.lists(st.floats(0, 1, allow_nan=False), min_size=1, max_size=20))
def test_envelope_dominates_input(raw):
    raw = [1.0] + raw
    env = mx.monotone_envelope(raw)
    vals = np.asarray(env.table)
    assert np.all(np.diff(vals) <= 0)
    assert np.all(vals >= np.asarray(raw))


def test_tabulated_inverse_undefined():
    prof = mx.tabulated_profile([1.0, 0.5, 0.5], tail="hold")
    with pytest.raises(mx.ProfileError):
        prof.inverse(0.1)
    assert mx.tabulated_profile([1.0, 0.5], tail="zero").inverse(0.1) == 2


def test_parse_profile_roundtrip():
    assert mx.parse_profile("iid").kind == "iid"
    assert mx.parse_profile("mdep:m=4").m == 4
    assert mx.parse_profile("poly:m=0.5").m == 0.5
    assert mx.parse_profile("expo:l=0.9").l == 0.9


def test_alpha_iid_small_and_rate():
    # Independence pushes the estimate to zero at the root-n rate: the
    # estimate at 16x the sample size should drop by roughly 4x.
    model = pr.iid_model()
    vals_s, _, _ = pr.simulate_many(model, 500, 40, seed=11)
    vals_l, _, _ = pr.simulate_many(model, 8000, 40, seed=12)
    small = np.mean([mx.estimate_alpha(v, 2).value for v in vals_s])
    large = np.mean([mx.estimate_alpha(v, 2).value for v in vals_l])
    assert large < small
    assert 2.0 <= small / large <= 8.0


def test_alpha_m_dependent_beyond_memory():
    model = pr.ma_model(3)
    vals, _, _ = pr.simulate_many(model, 6000, 30, seed=13)
    beyond = np.mean([mx.estimate_alpha(v, 5).value for v in vals])
    within = np.mean([mx.estimate_alpha(v, 1).value for v in vals])
    assert beyond < 0.02
    assert within > 5 * beyond


def test_alpha_decays_in_lag_for_ar1():
    vals, _, _ = pr.simulate_many(pr.ar1_model(0.9), 4000, 100, seed=14)
    near = np.array([mx.estimate_alpha(v, 1).value for v in vals])
    far = np.array([mx.estimate_alpha(v, 20).value for v in vals])
    # Strictly larger at the short lag with overwhelming frequency.
    assert (near > far).mean() >= 0.95


def test_alpha_path_too_short():
    with pytest.raises(ValueError):
        mx.estimate_alpha(np.arange(5.0), 4)


def test_tau_iid_vanishes():
    model = pr.iid_model()
    members = fc.make_class("lipschitz4", model).members
    est = mx.estimate_tau(model, members, q=3, outer_reps=200, inner_reps=400, seed=5)
    # The nested estimator's noise floor is of order 1/sqrt(inner).
    assert est.value < 6.0 / math.sqrt(400)


def test_tau_requires_markov_and_variance_control():
    model = pr.ma_model(2)
    members = fc.make_class("lipschitz4", pr.iid_model()).members
    with pytest.raises(ValueError):
        mx.estimate_tau(model, members, 2, 10, 10, seed=0)
    with pytest.raises(ValueError):
        mx.estimate_tau(pr.iid_model(), members, 2, 10, 1, seed=0)


def test_tau_ar1_identity_matches_analytic():
    # Conditional mean of the linear member is the contraction of the state,
    # so the target is rho^q times the half-normal moment of the marginal.
    rho, q = 0.8, 2
    model = pr.ar1_model(rho)
    member = fc.make_class("identity", model).members[0]
    est = mx.estimate_tau(model, [member], q, outer_reps=3000, inner_reps=4000,
                          seed=21, normalize=False)
    target = rho**q * model.marginal_sd() * math.sqrt(2.0 / math.pi)
    assert abs(est.value - target) <= 3.0 * est.std_error + 0.01 * target


def test_tau_ar1_geometric_decay_slope():
    model = pr.ar1_model(0.9)
    members = fc.make_class("lipschitz4", model).members
    qs = np.array([2, 4, 6, 8, 10])
    vals = np.array([
        mx.estimate_tau(model, members, int(q), 1500, 1500, seed=30 + q).value
        for q in qs
    ])
    x = qs - qs.mean()
    slope = float((x * (np.log(vals) - np.log(vals).mean())).sum() / (x * x).sum())
    assert abs(slope - math.log(0.9)) <= 0.2 * abs(math.log(0.9))


def test_lazy_renewal_mixing_estimated_decay():
    # The renewal chain's coefficients are never assumed, only measured:
    # both estimators must show decay over widening lags.
    model = pr.lazy_renewal_model(1.0)
    rng = np.random.default_rng(0)
    sample = model.stationary_sample(10**6, rng)
    func = lambda x: np.minimum(x, 3.0) / 3.0
    member = fc.ClassMember(name="capped", func=func,
                            mean=float(func(sample).mean()), sup_bound=1.0)
    taus = [mx.estimate_tau(model, [member], q, 1200, 1200, seed=50 + q).value
            for q in (1, 4, 16)]
    assert taus[0] > taus[1] > taus[2]
    paths, _, _ = pr.simulate_many(model, 4000, 40, seed=60)
    alphas = [np.mean([mx.estimate_alpha(p, q).value for p in paths])
              for q in (1, 4, 16)]
    assert alphas[0] > alphas[1] > alphas[2]
