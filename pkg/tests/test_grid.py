import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixbound import grid, mixing


def test_lattice_members_basis2():
    assert grid.lattice_members(2, 40) == [6, 12, 18, 24, 36]


def test_lattice_members_contains_mixed_prime_product():
    assert 30 in grid.lattice_members(3, 30)


def test_lattice_minimal_member():
    assert grid.lattice_members(2, 6) == [6]


def test_lattice_rejects_bad_args():
    with pytest.raises(grid.GridError):
        grid.lattice_members(1, 100)
    with pytest.raises(grid.GridError):
        grid.lattice_members(2, 5)


@given(a=st.integers(1, 10), b=st.integers(1, 6), c=st.integers(0, 4))
def test_lattice_membership_by_construction(a, b, c):
    n = 2**a * 3**b * 5**c
    assert grid.in_lattice(n, 3)
    assert not grid.in_lattice(7 * n, 3)


def test_divisor_chain_values():
    assert grid.divisor_chain(12).divisors == (1, 2, 3, 4, 6, 12)
    assert grid.divisor_chain(6).divisors == (1, 2, 3, 6)
    assert grid.divisor_chain(36).divisors == (1, 2, 3, 4, 6, 9, 12, 18, 36)


def test_divisor_chain_rejects_non_members():
    for n in (7, 10, 35, 2, 9):
        with pytest.raises(grid.GridError):
            grid.divisor_chain(n)


@given(a=st.integers(1, 12), b=st.integers(1, 7), c=st.integers(0, 5))
@settings(max_examples=60)
def test_divisor_gap_property(a, b, c):
    n = 2**a * 3**b * 5**c
    chain = grid.divisor_chain(n)
    assert chain.gap_ok
    assert chain.divisors[0] == 1 and chain.divisors[-1] == n


def test_schedule_iid_is_all_ones():
    prof = mixing.iid_profile()
    for n in (6, 384, 6144):
        assert grid.block_schedule(n, prof).q_seq == (1,)


def test_schedule_poly_example():
    sched = grid.block_schedule(12, mixing.polynomial_profile(1.0))
    assert sched.q_seq[0] == 2


def test_schedule_m_dependent_quarter_rule():
    # With memory at least n/4 the level-zero block is the divisor at n/4.
    for n in (48, 384, 972):
        chain = grid.divisor_chain(n)
        expected = min(d for d in chain.divisors if d >= n / 4)
        q0 = grid.first_block_length(n, mixing.m_dependent_profile(n))
        assert q0 == expected


def test_schedule_m_dependent_general_rule():
    # The ascending scan lands on the divisor at min(memory, n/4).
    rng = np.random.default_rng(5)
    for n in (36, 192, 1536):
        chain = grid.divisor_chain(n)
        for m in rng.integers(1, 2 * n, size=8):
            q0 = grid.first_block_length(n, mixing.m_dependent_profile(int(m)))
            expected = min(d for d in chain.divisors if d >= min(int(m), n / 4))
            assert q0 == expected


@given(st.sampled_from([12, 36, 96, 384, 1152]),
       st.sampled_from([0.3, 0.7, 1.5, 3.0]))
@settings(max_examples=40, deadline=None)
def test_schedule_monotone_and_member(n, m):
    sched = grid.block_schedule(n, mixing.polynomial_profile(m))
    divisors = set(grid.divisor_chain(n).divisors)
    assert all(q in divisors for q in sched.q_seq)
    assert all(a >= b for a, b in zip(sched.q_seq, sched.q_seq[1:]))
    assert sched.q_seq[-1] == 1
    # Minimality: no smaller divisor satisfies the level-k inequality.
    prof = mixing.polynomial_profile(m)
    for k, q in enumerate(sched.q_seq):
        for d in sorted(divisors):
            if d >= q:
                break
            assert 0.5 * prof.theta(d) * n > d * 2.0 ** (k + 1)


def test_nearest_divisor():
    assert grid.nearest_divisor(384, 384**0.5) == 16
    assert grid.nearest_divisor(1536, 1536**0.5) == 32
    assert grid.nearest_divisor(6144, 6144**0.5) == 64
