import math

import numpy as np
import pytest

from mixbound import mixing as mx
from mixbound import norms as nm
from mixbound import rates as rt


def test_universal_constants():
    uc = rt.universal_constants()
    # First series term alone is 2 * (2/e); the tail is tiny.
    direct = 2.0 * sum((2.0 / math.e) ** (2 ** (j - 1)) for j in range(1, 30))
    assert math.isclose(uc.c0, direct, rel_tol=1e-12)
    assert math.isclose(uc.l0, (16.0 / 3.0) * uc.c0 + 2.0, rel_tol=1e-15)
    assert math.isclose(uc.l, 2.0 * uc.l0 + 2.0**2.5, rel_tol=1e-15)


def test_rate_factor_iid_constant():
    prof = mx.iid_profile()
    r = 4.0
    expect = 2.0 * 0.5 ** ((r - 2) / r)
    for n in (384, 6144, 41472):
        assert math.isclose(rt.rate_factor(n, r, prof), expect, rel_tol=1e-12)


def test_rate_factor_is_squared_holder_factor():
    prof = mx.polynomial_profile(0.8)
    from mixbound import grid
    n = 1536
    q0 = grid.first_block_length(n, prof)
    assert math.isclose(rt.rate_factor(n, 4.0, prof),
                        nm.holder_factor(q0, 4.0, prof) ** 2, rel_tol=1e-15)


def test_regime_classification():
    assert rt.regime_classify(3, 4) == ("fast", 0.0)
    regime, expo = rt.regime_classify(2, 4)
    assert regime == "critical" and expo == 0.5
    regime, expo = rt.regime_classify(0.5, 4)
    assert regime == "slow" and math.isclose(expo, 0.5)
    with pytest.raises(ValueError):
        rt.regime_classify(0.0, 4)


def test_envelope_case1_closed_form():
    m, r = 7, 4.0
    for q in (2, 7, 100):
        lo, hi = rt.closed_form_envelopes(q, m, r, 1)
        assert math.isclose(lo, 2 ** (1 / r) * math.sqrt(min(1 + q, m)), rel_tol=1e-15)
        assert math.isclose(hi, 2 ** (1 / r) * math.sqrt(min(1 + q, 1 + m)), rel_tol=1e-15)


def test_envelope_case3_upper_form():
    m, r, q = 2.0, 4.0, 50
    _, hi = rt.closed_form_envelopes(q, m, r, 3)
    assert math.isclose(hi, math.sqrt(2) * (2 + 0.5 * m * math.log(1 + q)) ** (1 / (2 * m)),
                        rel_tol=1e-15)


def test_envelope_case4_lower_form():
    m, r, q = 0.5, 4.0, 50
    a = r / (r - 2)
    c = r / (m * (r - 2))
    lo, _ = rt.closed_form_envelopes(q, m, r, 4)
    expect = math.sqrt(2) * ((0.5 / (c - 1)) * (2 + q) ** (a - m) - 0.5) ** ((r - 2) / (2 * r))
    assert math.isclose(lo, expect, rel_tol=1e-15)


def test_envelope_case_mismatch_rejected():
    with pytest.raises(ValueError):
        rt.closed_form_envelopes(10, 3.0, 4.0, 4)   # fast parameters, slow case
    with pytest.raises(ValueError):
        rt.closed_form_envelopes(10, 0.5, 4.0, 2)


def test_envelopes_contain_exact_factor():
    qs = sorted(set(int(x) for x in np.geomspace(1, 10**4, 25)))
    cases = [(1, 7.0, mx.m_dependent_profile(7)),
             (2, 3.0, mx.polynomial_profile(3.0)),
             (3, 2.0, mx.polynomial_profile(2.0)),
             (4, 0.5, mx.polynomial_profile(0.5))]
    for case, m, prof in cases:
        for q in qs:
            b = nm.holder_factor(q, 4.0, prof)
            lo, hi = rt.closed_form_envelopes(q, m, 4.0, case)
            assert lo * (1 - 1e-12) <= b <= hi * (1 + 1e-12)


def test_strong_rate():
    assert math.isclose(rt.strong_approx_rate(round(math.e**4), 1.0), 2.0, rel_tol=1e-3)
    n = 10**4
    assert math.isclose(rt.strong_approx_rate(n, 3.0), n ** (-0.25), rel_tol=1e-12)
    assert math.isclose(rt.strong_approx_rate(n, 1.0 / 3.0), n ** 0.25, rel_tol=1e-12)


def test_maximal_bound_zero_complexity():
    assert rt.maximal_bound(0.0, 384, 4.0, mx.iid_profile()) == 0.0


def test_maximal_bound_proportional_under_independence():
    prof = mx.iid_profile()
    b1 = rt.maximal_bound(1.0, 384, 4.0, prof)
    b2 = rt.maximal_bound(2.0, 6144, 4.0, prof)
    assert math.isclose(b2, 2.0 * b1, rel_tol=1e-12)


def test_rate_report_fields():
    rep = rt.rate_report(1536, 4.0, mx.polynomial_profile(0.5))
    assert rep.regime == "slow"
    assert rep.lower_env <= rep.factor_sqrt <= rep.upper_env
    assert math.isclose(rep.factor_sqrt**2, rep.factor, rel_tol=1e-15)
    assert rep.effective_n < rep.n
    assert rep.strong_rate is not None


def test_effective_sample_size_diverges():
    prof = mx.polynomial_profile(0.5)
    members = [3072, 41472, 373248, 2239488]
    eff = [rt.effective_sample_size(n, 4.0, prof) for n in members]
    assert all(b > a for a, b in zip(eff, eff[1:]))


def test_maximal_bound_grows_at_regime_rate():
    # Slow decay: the bound scales like the square root of the rate factor.
    prof = mx.polynomial_profile(0.5)
    n1, n2 = 41472, 2239488
    ratio = rt.maximal_bound(1.0, n2, 4.0, prof) / rt.maximal_bound(1.0, n1, 4.0, prof)
    _, expo = rt.regime_classify(0.5, 4.0)
    predicted = (n2 / n1) ** (expo / 2.0)
    assert 0.5 * predicted <= ratio <= 2.0 * predicted
