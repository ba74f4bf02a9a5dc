"""Integer machinery for admissible sample sizes, divisor sets and block
length schedules.

Admissible sample sizes factor over a fixed basis of consecutive primes
with the exponents of 2 and 3 both at least one, so every member is
divisible by 6 and its divisor set has no gaps larger than a factor of two.
All computation here is exact integer arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mixing import MixingProfile


class GridError(ValueError):
    """Invalid lattice argument or a non-member sample size."""


def first_primes(count: int) -> tuple[int, ...]:
    """The first ``count`` primes, by trial division (count is tiny)."""
    primes: list[int] = []
    cand = 2
    while len(primes) < count:
        if all(cand % p for p in primes):
            primes.append(cand)
        cand += 1
    return tuple(primes)


def lattice_members(basis_size: int = 3, limit: int = 10**6) -> list[int]:
    """All admissible sample sizes up to ``limit``, sorted ascending.

    A member is a product of powers of the first ``basis_size`` primes with
    the exponents of 2 and 3 each >= 1.  ``basis_size`` must be at least 2;
    a limit below 6 admits no member and is rejected.
    """
    if basis_size < 2:
        raise GridError("basis_size must be >= 2")
    if limit < 6:
        raise GridError("limit < 6 admits no sample size (members are divisible by 6)")
    primes = first_primes(basis_size)
    members: list[int] = []

    def extend(idx: int, value: int) -> None:
        if idx == len(primes):
            members.append(value)
            return
        p = primes[idx]
        v = value * p if idx < 2 else value  # exponents of 2 and 3 start at 1
        while v <= limit:
            extend(idx + 1, v)
            v *= p

    extend(0, 1)
    return sorted(members)


@dataclass(frozen=True)
class SampleLattice:
    """Admissible sample sizes up to a limit over a fixed prime basis."""

    prime_basis: tuple[int, ...]
    limit: int
    members: tuple[int, ...]

    def __contains__(self, n: int) -> bool:
        return n in set(self.members)


def sample_lattice(basis_size: int = 3, limit: int = 10**6) -> SampleLattice:
    return SampleLattice(prime_basis=first_primes(basis_size), limit=limit,
                         members=tuple(lattice_members(basis_size, limit)))


def factor_over_basis(n: int, basis_size: int = 3) -> dict[int, int] | None:
    """Exponent map of n over the prime basis, or None if n has other factors."""
    if n < 1:
        return None
    exps: dict[int, int] = {}
    rem = n
    for p in first_primes(basis_size):
        e = 0
        while rem % p == 0:
            rem //= p
            e += 1
        exps[p] = e
    return exps if rem == 1 else None


def in_lattice(n: int, basis_size: int = 3) -> bool:
    exps = factor_over_basis(n, basis_size)
    return exps is not None and exps[2] >= 1 and exps[3] >= 1


@dataclass(frozen=True)
class DivisorChain:
    """Sorted divisor set of an admissible n with its checked gap ratio."""

    n: int
    divisors: tuple[int, ...]
    max_ratio: float  # largest ratio between consecutive divisors

    @property
    def gap_ok(self) -> bool:
        """True when every consecutive pair (q, q') satisfies q' <= 2q."""
        return self.max_ratio <= 2.0


def divisor_chain(n: int, basis_size: int = 3) -> DivisorChain:
    """Exact divisor set of a lattice member, gap ratio verified.

    Non-members are rejected: the factor-two gap property is only
    guaranteed on the admissible lattice.
    """
    exps = factor_over_basis(n, basis_size)
    if exps is None or exps[2] < 1 or exps[3] < 1:
        raise GridError(
            f"n={n} is not in the lattice over the first {basis_size} primes "
            f"(needs factors 2 and 3 only over the basis)"
        )
    factors = [(p, e) for p, e in exps.items() if e > 0]
    divisors = [1]
    for p, e in factors:
        divisors = [d * p**k for d in divisors for k in range(e + 1)]
    divisors.sort()
    arr = np.asarray(divisors, dtype=float)
    max_ratio = float((arr[1:] / arr[:-1]).max()) if len(divisors) > 1 else 1.0
    return DivisorChain(n=n, divisors=tuple(divisors), max_ratio=max_ratio)


def nearest_member(n: int, basis_size: int = 3) -> int:
    """Closest lattice member to n (ties resolved downward)."""
    lo = 6
    hi = max(12, 4 * n)
    members = lattice_members(basis_size, hi)
    arr = np.asarray(members)
    idx = int(np.argmin(np.abs(arr - n)))
    return int(arr[idx])


def nearest_divisor(n: int, x: float, basis_size: int = 3) -> int:
    """Divisor of n closest to x (ties resolved downward)."""
    chain = divisor_chain(n, basis_size)
    best = min(chain.divisors, key=lambda d: (abs(d - x), d))
    return int(best)


@dataclass(frozen=True)
class BlockSchedule:
    """Minimal block lengths balancing dependence decay against 2^(k+1)/n.

    ``q_seq[k]`` is the smallest divisor s of n with
    ``0.5 * theta(s) * n <= s * 2^(k+1)``; the sequence is non-increasing
    and is truncated at its first 1 (the tail is constant).
    """

    n: int
    profile: MixingProfile
    q_seq: tuple[int, ...]

    @property
    def depth(self) -> int:
        """Index of the first 1 in the schedule."""
        return len(self.q_seq) - 1

    def q_at(self, k: int) -> int:
        """q at level k, extending the constant-1 tail past truncation."""
        if k < 0:
            raise GridError("level must be >= 0")
        return self.q_seq[k] if k < len(self.q_seq) else 1


def _minimal_block(n: int, divisors, profile: MixingProfile, k: int) -> int:
    target = 2.0 ** (k + 1)
    for s in divisors:
        if 0.5 * profile.theta(s) * n <= s * target:
            return int(s)
    # Unreachable: s = n always satisfies the inequality since theta <= 1.
    raise GridError(f"no admissible block length for n={n}, k={k}")


def block_schedule(n: int, profile: MixingProfile, basis_size: int = 3,
                   max_depth: int = 128) -> BlockSchedule:
    """Full block-length schedule for one lattice member.

    Scans the divisor set ascending at every level, so minimality holds by
    construction.  Monotonicity in the level is verified.
    """
    chain = divisor_chain(n, basis_size)
    seq: list[int] = []
    for k in range(max_depth):
        q = _minimal_block(n, chain.divisors, profile, k)
        if seq and q > seq[-1]:
            raise GridError("schedule failed to be non-increasing")  # pragma: no cover
        seq.append(q)
        if q == 1:
            break
    else:
        raise GridError(f"schedule for n={n} did not reach 1 within {max_depth} levels")
    return BlockSchedule(n=n, profile=profile, q_seq=tuple(seq))


def first_block_length(n: int, profile: MixingProfile, basis_size: int = 3) -> int:
    """Level-zero block length without building the whole schedule."""
    chain = divisor_chain(n, basis_size)
    return _minimal_block(n, chain.divisors, profile, 0)
