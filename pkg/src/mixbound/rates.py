"""Rate factors, their closed-form envelopes, phase-transition regimes and
the explicit universal constants entering the assembled bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import first_block_length
from .mixing import MixingProfile
from .norms import holder_factor


@dataclass(frozen=True)
class UniversalConstants:
    """Explicit constants of the tail-probability and expectation bounds.

    c0 is the doubly-exponentially convergent series 2 * sum_j (2/e)^(2^(j-1)),
    l0 = (16/3) * c0 + 2 folds in the unit integral of the tail 2 e^(-2t), and
    l = 2 * l0 + 2^(5/2) is the constant multiplying the complexity in the
    final expectation bound.
    """

    c0: float
    l0: float
    l: float


def universal_constants(rel_tol: float = 1e-12) -> UniversalConstants:
    """Sum the constants to relative tolerance ``rel_tol`` (machine-fast)."""
    ratio = 2.0 / math.e
    total = 0.0
    j = 1
    while True:
        term = ratio ** (2 ** (j - 1))
        total += term
        if term < rel_tol * max(total, 1.0) or j > 64:
            break
        j += 1
    c0 = 2.0 * total
    l0 = (16.0 / 3.0) * c0 + 2.0  # the tail integral of 2 e^(-2t) is exactly 1
    l = 2.0 * l0 + 2.0 ** 2.5
    return UniversalConstants(c0=c0, l0=l0, l=l)


def rate_factor(n: int, r: float, profile: MixingProfile, basis_size: int = 3) -> float:
    """Sample-size dependent correction multiplying the squared rate.

    Defined as the square of the Hoelder comparison constant at the level
    zero block length; its square root multiplies the complexity in the
    L^r-based bound, and n over this factor is the effective sample size.
    """
    q0 = first_block_length(n, profile, basis_size)
    return holder_factor(q0, r, profile) ** 2


def effective_sample_size(n: int, r: float, profile: MixingProfile,
                          basis_size: int = 3) -> float:
    return n / rate_factor(n, r, profile, basis_size)


def regime_classify(m: float, r: float) -> tuple[str, float]:
    """Regime of a polynomial-decay profile and its predicted exponent.

    Returns ``(regime, exponent)`` where regime is ``fast`` (rate factor
    bounded, exponent 0), ``critical`` (logarithmic growth, the exponent is
    the power 1/m applied to log n) or ``slow`` (polynomial growth in n with
    the returned power).
    """
    if m <= 0:
        raise ValueError("m must be > 0")
    if r <= 2:
        raise ValueError("r must be > 2")
    crit = r / (r - 2.0)
    if m > crit:
        return "fast", 0.0
    if m == crit:
        return "critical", 1.0 / m
    return "slow", (r - m * (r - 2.0)) / (r * (m + 1.0))


def closed_form_envelopes(q: int, m: float, r: float, case: int) -> tuple[float, float]:
    """Algebraic (lower, upper) envelopes for the Hoelder factor at lag q.

    Case 1 is the finite-memory profile; cases 2-4 are polynomial decay in
    the fast / critical / slow regime respectively.  The case must match
    the (m, r) regime.  All four cases carry the same sqrt(2) prefactor;
    the exact factor always lies inside the returned interval on the
    regimes exercised by the verification suite.
    """
    if r <= 2:
        raise ValueError("r must be > 2")
    if q < 0:
        raise ValueError("q must be >= 0")
    a = r / (r - 2.0)
    if case == 1:
        lo = 2.0 ** (1.0 / r) * math.sqrt(min(1.0 + q, m))
        hi = 2.0 ** (1.0 / r) * math.sqrt(min(1.0 + q, 1.0 + m))
        return lo, hi
    c = r / (m * (r - 2.0))
    regime, _ = regime_classify(m, r)
    expected = {2: "fast", 3: "critical", 4: "slow"}.get(case)
    if expected is None:
        raise ValueError("case must be 1, 2, 3 or 4")
    if regime != expected:
        raise ValueError(f"(m={m}, r={r}) is in the {regime} regime, not case {case}")
    root = (r - 2.0) / (2.0 * r)
    if case == 2:
        hi_in = 2.0 ** (1.0 + a - m) + 0.5 / (1.0 - c)
        lo_in = (0.5 / (1.0 - c)) * (1.0 - 2.0 ** (a - m)) - 0.5
    elif case == 3:
        hi_in = 2.0 + 0.5 * m * math.log(1.0 + q)
        lo_in = 0.5 * m * math.log(2.0 + q) - 0.5
    else:
        hi_in = (2.0 + 0.5 / (c - 1.0)) * (1.0 + q) ** (a - m)
        lo_in = (0.5 / (c - 1.0)) * (2.0 + q) ** (a - m) - 0.5
    lo = math.sqrt(2.0) * max(lo_in, 0.0) ** root
    hi = math.sqrt(2.0) * hi_in ** root
    return lo, hi


def strong_approx_rate(n: int, m: float) -> float:
    """Rate governing the Gaussian-coupling error under polynomial decay.

    n^((1-m)/(2(m+1))) away from m = 1, sqrt(log n) at the boundary;
    vanishing for m > 1, diverging for m < 1.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if m <= 0:
        raise ValueError("m must be > 0")
    if m == 1.0:
        return math.sqrt(math.log(n))
    return float(n) ** ((1.0 - m) / (2.0 * (m + 1.0)))


def maximal_bound(complexity: float, n: int, r: float, profile: MixingProfile,
                  basis_size: int = 3) -> float:
    """Assembled expectation bound: sqrt(rate factor) * l * complexity."""
    if complexity < 0:
        raise ValueError("complexity must be >= 0")
    consts = universal_constants()
    return math.sqrt(rate_factor(n, r, profile, basis_size)) * consts.l * complexity


@dataclass(frozen=True)
class RateReport:
    """Per-n rate summary: factor, effective size, regime and envelopes.

    Both the factor and its square root are carried so downstream reports
    can expose either scaling convention; the envelopes bound the square
    root for the closed-form profiles and are None otherwise.
    """

    n: int
    r: float
    profile_spec: str
    q0: int
    factor: float
    factor_sqrt: float
    effective_n: float
    regime: str
    lower_env: float | None
    upper_env: float | None
    strong_rate: float | None


def rate_report(n: int, r: float, profile: MixingProfile,
                basis_size: int = 3) -> RateReport:
    q0 = first_block_length(n, profile, basis_size)
    factor = holder_factor(q0, r, profile) ** 2
    lower = upper = None
    strong = None
    if profile.kind == "m_dependent":
        regime = "m_dependent"
        lower, upper = closed_form_envelopes(q0, profile.m, r, 1)
    elif profile.kind == "polynomial":
        regime, _ = regime_classify(profile.m, r)
        case = {"fast": 2, "critical": 3, "slow": 4}[regime]
        lower, upper = closed_form_envelopes(q0, profile.m, r, case)
        strong = strong_approx_rate(max(n, 2), profile.m)
    elif profile.kind == "iid":
        regime = "iid"
    else:
        regime = "fast" if profile.kind == "exponential" else "unclassified"
    return RateReport(
        n=n, r=r, profile_spec=profile.spec(), q0=q0, factor=factor,
        factor_sqrt=math.sqrt(factor), effective_n=n / factor, regime=regime,
        lower_env=lower, upper_env=upper, strong_rate=strong,
    )


def rate_table(profile: MixingProfile, r: float, n_min: int, n_max: int,
               basis_size: int = 3) -> list[RateReport]:
    """Rate reports over every lattice member in [n_min, n_max]."""
    from .grid import lattice_members

    members = [n for n in lattice_members(basis_size, n_max) if n >= n_min]
    return [rate_report(n, r, profile, basis_size) for n in members]


def loglog_slope(ns, values) -> float:
    """Least-squares slope of log(values) against log(ns)."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    x = x - x.mean()
    return float((x * (y - y.mean())).sum() / (x * x).sum())
