"""Partition-based complexity of finite function classes under a family of
norms: exact search on small classes, a greedy upper bound, covering numbers
with entropy integrals, and the telescoping chain decomposition with
threshold stopping.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .grid import BlockSchedule, block_schedule
from .mixing import MixingProfile
from .norms import QuantileCurve, dependence_norm

EXACT_SEARCH_LIMIT = 8
LEVEL1_CAP = 4  # cardinality cap 2^(2^l) at l = 1


class ChainingError(ValueError):
    pass


@dataclass(frozen=True)
class FunctionClass:
    """Finite function class as evaluation vectors over a weighted grid.

    table
        Shape (members, points); row i is member i evaluated on the grid.
    weights
        Probability weights over the grid points (non-negative, sum 1).
    names
        Optional member labels.
    sup_bound, lipschitz
        Optional metadata used by downstream moment rules.
    """

    table: np.ndarray
    weights: np.ndarray
    names: tuple[str, ...] = ()
    sup_bound: float | None = None
    lipschitz: float | None = None

    def __post_init__(self) -> None:
        t = np.asarray(self.table, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if t.ndim != 2 or t.shape[0] == 0:
            raise ChainingError("table must be a non-empty (members, points) array")
        if w.shape != (t.shape[1],):
            raise ChainingError("weights must match the number of grid points")
        if np.any(w < 0) or not math.isclose(float(w.sum()), 1.0, rel_tol=1e-9):
            raise ChainingError("weights must be non-negative and sum to 1")
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "weights", w)
        if self.names and len(self.names) != t.shape[0]:
            raise ChainingError("names must match the number of members")

    @property
    def size(self) -> int:
        return int(self.table.shape[0])

    def scaled(self, c: float) -> "FunctionClass":
        return FunctionClass(table=c * self.table, weights=self.weights,
                             names=self.names, sup_bound=None, lipschitz=None)

    def subset(self, indices: Sequence[int]) -> "FunctionClass":
        idx = list(indices)
        names = tuple(self.names[i] for i in idx) if self.names else ()
        return FunctionClass(table=self.table[idx], weights=self.weights, names=names,
                             sup_bound=self.sup_bound, lipschitz=self.lipschitz)


Partition = tuple[tuple[int, ...], ...]


def _normalize_partition(cells: Iterable[Iterable[int]]) -> Partition:
    return tuple(sorted(tuple(sorted(c)) for c in cells))


@dataclass(frozen=True)
class PartitionSequence:
    """Nested partitions with card(level l) <= 2^(2^l) and a trivial level 0."""

    levels: tuple[Partition, ...]

    def __post_init__(self) -> None:
        if not self.levels:
            raise ChainingError("need at least the trivial level")
        object.__setattr__(
            self, "levels", tuple(_normalize_partition(p) for p in self.levels)
        )
        base = sorted(i for cell in self.levels[0] for i in cell)
        if len(self.levels[0]) != 1:
            raise ChainingError("level 0 must be a single cell")
        for l, part in enumerate(self.levels):
            elems = sorted(i for cell in part for i in cell)
            if elems != base:
                raise ChainingError(f"level {l} is not a partition of the index set")
            if len(part) > 2 ** (2**l):
                raise ChainingError(f"level {l} exceeds the cardinality cap")
        for lo, hi in zip(self.levels, self.levels[1:]):
            lookup = {i: cell for cell in lo for i in cell}
            for cell in hi:
                parents = {lookup[i] for i in cell}
                if len(parents) != 1 or not set(cell) <= set(next(iter(parents))):
                    raise ChainingError("levels must be nested refinements")

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def cell_of(self, level: int, member: int) -> tuple[int, ...]:
        part = self.levels[min(level, self.depth)]
        for cell in part:
            if member in cell:
                return cell
        raise ChainingError(f"member {member} missing at level {level}")

    def fully_separated(self) -> bool:
        return all(len(c) == 1 for c in self.levels[-1])


def cell_diameter(cls: FunctionClass, cell: Sequence[int]) -> np.ndarray:
    """Pointwise sup over member pairs in the cell of |f1 - f2|.

    For real-valued rows this is max minus min per grid point; a singleton
    cell gives the zero vector.
    """
    rows = cls.table[list(cell)]
    return rows.max(axis=0) - rows.min(axis=0)


# -- norm families ---------------------------------------------------------

NormFn = Callable[[np.ndarray, np.ndarray], float]


@dataclass(frozen=True)
class NormFamily:
    """Per-level seminorm evaluators d_0, d_1, ... applied to |vectors|.

    Every evaluator must be monotone under pointwise domination of absolute
    values (all families built here are); the exact partition search relies
    on that to force full separation as soon as the cardinality caps allow.
    """

    evaluator: Callable[[int, np.ndarray, np.ndarray], float]
    label: str

    def norm(self, level: int, vec: np.ndarray, weights: np.ndarray) -> float:
        return float(self.evaluator(level, np.abs(vec), weights))


def constant_family(norm_fn: NormFn, label: str) -> NormFamily:
    return NormFamily(evaluator=lambda level, v, w: norm_fn(v, w), label=label)


def l2_family() -> NormFamily:
    return constant_family(lambda v, w: math.sqrt(float((w * v * v).sum())), "constant:l2")


def lr_family(r: float) -> NormFamily:
    if r <= 0:
        raise ChainingError("r must be > 0")
    return constant_family(
        lambda v, w: float((w * v**r).sum() ** (1.0 / r)), f"constant:lr,r={r:g}"
    )


def schedule_family(schedule: BlockSchedule) -> NormFamily:
    """Level l evaluates the dependence norm at the level-l block length."""

    def ev(level: int, v: np.ndarray, w: np.ndarray) -> float:
        if not np.any(v > 0):
            return 0.0
        curve = QuantileCurve.from_discrete(v, w)
        return dependence_norm(curve, schedule.q_at(level), schedule.profile)

    return NormFamily(evaluator=ev, label=f"schedule:n={schedule.n}")


def dependence_family(profile: MixingProfile, q: int) -> NormFamily:
    """A constant family pinned at one block length."""

    def ev(level: int, v: np.ndarray, w: np.ndarray) -> float:
        if not np.any(v > 0):
            return 0.0
        return dependence_norm(QuantileCurve.from_discrete(v, w), q, profile)

    return NormFamily(evaluator=ev, label=f"dependence:q={q}")


# -- complexity ------------------------------------------------------------


def partitions_into_at_most(items: Sequence[int], max_blocks: int) -> Iterator[Partition]:
    """All set partitions of ``items`` into at most ``max_blocks`` blocks."""
    items = list(items)

    def rec(idx: int, blocks: list[list[int]]) -> Iterator[Partition]:
        if idx == len(items):
            yield _normalize_partition(blocks)
            return
        x = items[idx]
        for b in blocks:
            b.append(x)
            yield from rec(idx + 1, blocks)
            b.pop()
        if len(blocks) < max_blocks:
            blocks.append([x])
            yield from rec(idx + 1, blocks)
            blocks.pop()

    yield from rec(0, [])


def sequence_value(cls: FunctionClass, family: NormFamily,
                   seq: PartitionSequence) -> float:
    """sqrt(2) * sup_f sum_l 2^(l/2) d_l(diameter of f's level-l cell).

    Levels past the last stored partition repeat it; once every cell is a
    singleton the remaining terms vanish, so the sum is finite for fully
    separated sequences.
    """
    if not seq.fully_separated():
        raise ChainingError("sequence must reach singleton cells")
    per_member = np.zeros(cls.size)
    cache: dict[tuple[int, tuple[int, ...]], float] = {}
    for level, part in enumerate(seq.levels):
        coeff = 2.0 ** (level / 2.0)
        for cell in part:
            if len(cell) == 1:
                continue
            key = (level, cell)
            if key not in cache:
                cache[key] = family.norm(level, cell_diameter(cls, cell), cls.weights)
            for i in cell:
                per_member[i] += coeff * cache[key]
    return math.sqrt(2.0) * float(per_member.max())


def _separation_level(size: int) -> int:
    """First level whose cardinality cap covers the whole class."""
    level = 0
    while 2 ** (2**level) < size:
        level += 1
    return level


def complexity_exact(cls: FunctionClass, family: NormFamily
                     ) -> tuple[float, PartitionSequence]:
    """Exact infimum of the weighted-diameter functional on a small class.

    Enumerates every admissible nested refinement; for monotone norm
    families nothing is lost by separating fully as soon as the caps allow,
    so only the level-1 partition (cap 4) is a genuine choice for classes
    of up to eight members.  Classes above the search budget are refused;
    use :func:`complexity_greedy` there.
    """
    size = cls.size
    if size > EXACT_SEARCH_LIMIT:
        raise ChainingError(
            f"class size {size} exceeds the exact search budget "
            f"{EXACT_SEARCH_LIMIT}; use complexity_greedy"
        )
    indices = list(range(size))
    trivial = _normalize_partition([indices])
    singles = _normalize_partition([[i] for i in indices])
    if size == 1:
        seq = PartitionSequence(levels=(trivial,))
        return 0.0, seq
    cache: dict[tuple[int, tuple[int, ...]], float] = {}

    def cell_norm(level: int, cell: tuple[int, ...]) -> float:
        key = (level, cell)
        if key not in cache:
            cache[key] = family.norm(level, cell_diameter(cls, cell), cls.weights)
        return cache[key]

    d0 = cell_norm(0, trivial[0])
    best_val = math.inf
    best_p1: Partition | None = None
    sqrt2 = math.sqrt(2.0)
    for p1 in partitions_into_at_most(indices, LEVEL1_CAP):
        worst = 0.0
        for cell in p1:
            if len(cell) > 1:
                worst = max(worst, cell_norm(1, cell))
        val = sqrt2 * (d0 + sqrt2 * worst)
        if val < best_val:
            best_val, best_p1 = val, p1
    assert best_p1 is not None
    levels: list[Partition] = [trivial, best_p1]
    if any(len(c) > 1 for c in best_p1):
        levels.append(singles)  # cap at level 2 is 16 >= size
    best_seq = PartitionSequence(levels=tuple(levels))
    return best_val, best_seq


def complexity_greedy(cls: FunctionClass, family: NormFamily,
                      depth: int | None = None) -> float:
    """Upper bound from furthest-pair-first nested refinement.

    At each level the cell with the largest diameter norm is split around
    its two most separated members until the level's cardinality cap is
    reached.  Always at least the exact value; equal on classes of size
    up to two, where the refinement is forced.
    """
    size = cls.size
    indices = list(range(size))
    if depth is None:
        depth = _separation_level(size) + 1
    levels: list[Partition] = [_normalize_partition([indices])]
    current: list[list[int]] = [indices[:]]

    def dist(level: int, i: int, j: int) -> float:
        return family.norm(level, cls.table[i] - cls.table[j], cls.weights)

    for level in range(1, depth + 1):
        cap = 2 ** (2**level)
        current = [list(c) for c in current]
        while len(current) < min(cap, size):
            scored = [
                (family.norm(level, cell_diameter(cls, c), cls.weights), k)
                for k, c in enumerate(current) if len(c) > 1
            ]
            if not scored:
                break
            _, k = max(scored)
            cell = current[k]
            si, sj = max(combinations(cell, 2), key=lambda p: dist(level, *p))
            a, b = [si], [sj]
            for x in cell:
                if x in (si, sj):
                    continue
                (a if dist(level, x, si) <= dist(level, x, sj) else b).append(x)
            current[k] = a
            current.append(b)
        levels.append(_normalize_partition(current))
        if all(len(c) == 1 for c in current):
            break
    seq = PartitionSequence(levels=tuple(levels))
    if not seq.fully_separated():
        raise ChainingError("greedy refinement did not reach singletons; raise depth")
    return sequence_value(cls, family, seq)


# -- covering numbers ------------------------------------------------------


def _pairwise(cls: FunctionClass, norm_fn: NormFn) -> np.ndarray:
    size = cls.size
    d = np.zeros((size, size))
    for i in range(size):
        for j in range(i + 1, size):
            d[i, j] = d[j, i] = norm_fn(np.abs(cls.table[i] - cls.table[j]), cls.weights)
    return d


def covering_number(cls: FunctionClass, norm_fn: NormFn, eps: float) -> int:
    """Size of a greedy eps-cover with centers drawn from the class.

    An upper bound on the minimal internal covering number; closed balls,
    first-uncovered center rule (deterministic).
    """
    if eps <= 0:
        raise ChainingError("eps must be > 0")
    d = _pairwise(cls, norm_fn)
    uncovered = np.ones(cls.size, dtype=bool)
    centers = 0
    while uncovered.any():
        c = int(np.argmax(uncovered))
        uncovered &= d[c] > eps
        centers += 1
    return centers


def exact_covering_number(cls: FunctionClass, norm_fn: NormFn, eps: float) -> int:
    """Minimal internal eps-cover by exhaustive center enumeration (size <= 16)."""
    if cls.size > 16:
        raise ChainingError("exhaustive cover search limited to 16 members")
    d = _pairwise(cls, norm_fn)
    for k in range(1, cls.size + 1):
        for centers in combinations(range(cls.size), k):
            if np.all(d[list(centers)].min(axis=0) <= eps):
                return k
    return cls.size  # pragma: no cover


def entropy_integral(cls: FunctionClass, norm_fn: NormFn, delta: float,
                     grid_points: int = 32) -> float:
    """Trapezoid of sqrt(log N(eps)) over a log-spaced eps grid up to delta.

    The strip below the smallest grid point is charged at the worst case
    N = class size, keeping the result an upper-bound-flavored quantity.
    """
    if delta <= 0:
        raise ChainingError("delta must be > 0")
    eps_lo = delta * 1e-3
    grid = np.geomspace(eps_lo, delta, grid_points)
    vals = np.array([math.sqrt(math.log(max(covering_number(cls, norm_fn, e), 1)))
                     for e in grid])
    integral = float(np.trapezoid(vals, grid))
    integral += eps_lo * math.sqrt(math.log(max(cls.size, 1)))
    return integral


# -- chain decomposition ---------------------------------------------------


@dataclass(frozen=True)
class ChainDecomposition:
    """Links, thresholds and the verified telescoping identity for one pair.

    ``residual`` is the sup-norm gap between f - f0 and the reassembled
    three-part sum; ``binding`` flags whether any threshold actually
    truncated a link somewhere on the grid.
    """

    thresholds: tuple[float, ...]
    stop_index: np.ndarray
    deltas: tuple[np.ndarray, ...]
    xis: tuple[np.ndarray, ...]
    reconstruction: np.ndarray
    residual: float
    binding: bool


def chain_decomposition(cls: FunctionClass, f: int, f0: int,
                        partitions: PartitionSequence, profile: MixingProfile,
                        n: int) -> ChainDecomposition:
    """Decompose f - f0 along the partition chain with stopping thresholds.

    The level-0 center is f0 itself and the level-0 diameter operator is
    identically zero, so the stopping index is always at least one; at
    levels k >= 1 the center is the lexicographically first member of f's
    cell.  Thresholds scale the level-k diameter norm (at the level-k block
    length) by 2 sqrt(n) / (q_k sqrt(2^(k+1))).  The identity

        f - f0 = sum_k delta_k 1{stop >= k, |D_k| <= a_k}
                 - sum_k xi_{k-1} 1{stop = k, |D_k| > a_k}
                 - xi_0 1{stop = 0}

    is evaluated pointwise and its residual reported.
    """
    if not (0 <= f < cls.size and 0 <= f0 < cls.size):
        raise ChainingError("f and f0 must index class members")
    if not partitions.fully_separated():
        raise ChainingError("partition sequence must reach singleton cells")
    sched = block_schedule(n, profile)
    depth = partitions.depth
    npts = cls.table.shape[1]
    row_f = cls.table[f]

    diam = [np.zeros(npts)]
    thresholds = [0.0]
    centers = [f0]
    for k in range(1, depth + 1):
        cell = partitions.cell_of(k, f)
        dvec = cell_diameter(cls, cell)
        diam.append(dvec)
        qk = sched.q_at(k)
        if np.any(dvec > 0):
            curve = QuantileCurve.from_discrete(dvec, cls.weights)
            dnorm = dependence_norm(curve, qk, profile)
        else:
            dnorm = 0.0
        thresholds.append(
            math.sqrt(n) * 2.0 * dnorm / (qk * math.sqrt(2.0 ** (k + 1)))
        )
        centers.append(min(cell))

    # Pointwise stopping index: first level whose diameter exceeds its threshold.
    stop = np.full(npts, depth + 1, dtype=int)  # depth + 1 encodes "never"
    for k in range(depth, -1, -1):
        stop[np.abs(diam[k]) > thresholds[k]] = k

    deltas, xis = [], []
    for k in range(depth + 1):
        xis.append(cls.table[centers[k]] - row_f)
        if k >= 1:
            deltas.append(cls.table[centers[k]] - cls.table[centers[k - 1]])

    recon = np.zeros(npts)
    binding = bool(np.any(stop <= depth))
    for k in range(1, depth + 1):
        keep = (stop >= k) & (np.abs(diam[k]) <= thresholds[k])
        recon += deltas[k - 1] * keep
        drop = (stop == k) & (np.abs(diam[k]) > thresholds[k])
        recon -= xis[k - 1] * drop
    recon -= xis[0] * (stop == 0)
    residual = float(np.max(np.abs((row_f - cls.table[f0]) - recon)))
    return ChainDecomposition(
        thresholds=tuple(thresholds), stop_index=stop,
        deltas=tuple(deltas), xis=tuple(xis),
        reconstruction=recon, residual=residual, binding=binding,
    )
