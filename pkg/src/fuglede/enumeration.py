"""Enumerate candidate subsets with a fixed affine prefix, pruned by coordinate symmetry.

A candidate set is the prefix {0, e_d, ..., e_1} plus a strictly increasing
tuple of free points x_1 < ... < x_r drawn from the remaining words. The
pruning rules discard tuples that some coordinate permutation maps to an
earlier tuple; they are evaluated per position so that a rejected x_1 is
never extended.

Coordinates are read most significant bit first, so a coordinate vector
"0..01..1" is the word 2^w - 1 and lexicographic order is numeric order.
"""

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Collection, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidCaseError
from .spectile import SubsetZ2d, permute_point


@dataclass(frozen=True)
class CaseSpec:
    """One enumeration case: dimension, set size and whether pruning is on.

    ``heuristics=None`` selects the default: pruning only for d = 6, size 16.
    """

    dimension: int
    set_size: int
    heuristics: Optional[bool] = None

    def __post_init__(self):
        if self.dimension < 2:
            raise InvalidCaseError(f"dimension must be at least 2, got {self.dimension}")
        free = self.set_size - (self.dimension + 1)
        pool = (1 << self.dimension) - (self.dimension + 1)
        if not 1 <= free <= pool:
            raise InvalidCaseError(
                f"set size {self.set_size} leaves {free} free points in Z_2^{self.dimension}"
            )
        if self.heuristics is None:
            object.__setattr__(self, "heuristics", (self.dimension, self.set_size) == (6, 16))

    @cached_property
    def prefix(self) -> Tuple[int, ...]:
        """0 and the standard basis vectors, ascending."""
        return (0,) + tuple(1 << j for j in range(self.dimension))

    @cached_property
    def pool(self) -> Tuple[int, ...]:
        """Every word outside the prefix, ascending."""
        fixed = set(self.prefix)
        return tuple(x for x in range(1 << self.dimension) if x not in fixed)

    @property
    def free_count(self) -> int:
        """Number of free points r."""
        return self.set_size - len(self.prefix)

    @property
    def label(self) -> str:
        """Short case identifier used in reports."""
        return f"d{self.dimension}-s{self.set_size}-{'pruned' if self.heuristics else 'all'}"


@dataclass(frozen=True)
class FreeTuple:
    """The free points of one candidate set."""

    dimension: int
    points: Tuple[int, ...]

    def __post_init__(self):
        limit = 1 << self.dimension
        for x in self.points:
            if not 0 <= x < limit or x & (x - 1) == 0:
                raise ValueError(f"{x} is not a free point of Z_2^{self.dimension}")
        if any(a >= b for a, b in zip(self.points, self.points[1:])):
            raise ValueError("free points must be strictly increasing")


def subset_for(spec: CaseSpec, t: FreeTuple) -> SubsetZ2d:
    """Prefix plus free points as one subset."""
    return SubsetZ2d.of(spec.prefix + t.points, spec.dimension)


# -- pruning rules ----------------------------------------------------------


def _nondecreasing_on(x: int, positions: int, d: int) -> bool:
    """Coordinates of x restricted to the positions mask never step from 1 to 0."""
    seen_one = False
    for j in range(d - 1, -1, -1):
        if (positions >> j) & 1:
            bit = (x >> j) & 1
            if seen_one and not bit:
                return False
            seen_one = seen_one or bool(bit)
    return True


def accepts_first(x1: int, d: int) -> bool:
    """Rule 1: x_1 has the form 0..01..1."""
    return x1 & (x1 + 1) == 0


def accepts_second(x1: int, x2: int, d: int) -> bool:
    """Rules 2-4 for x_2 given x_1."""
    ones1 = x1
    zeros1 = ((1 << d) - 1) & ~x1
    return (
        x2 > x1
        and x2.bit_count() >= x1.bit_count()
        and _nondecreasing_on(x2, zeros1, d)
        and _nondecreasing_on(x2, ones1, d)
    )


def accepts_third(x1: int, x2: int, x3: int, d: int) -> bool:
    """Rules 5-8 for x_3 given x_1 and x_2."""
    zeros1 = ((1 << d) - 1) & ~x1
    if x3 <= x2 or x3.bit_count() < x1.bit_count():
        return False
    if (x3 & zeros1).bit_count() < (x2 & zeros1).bit_count():
        return False
    # bits hi, lo are consecutive coordinates j, j+1
    for lo in range(d - 1):
        hi = lo + 1
        same1 = ((x1 >> hi) ^ (x1 >> lo)) & 1 == 0
        same2 = ((x2 >> hi) ^ (x2 >> lo)) & 1 == 0
        if same1 and same2 and (x3 >> hi) & 1 and not (x3 >> lo) & 1:
            return False
    return True


def accepts_later(x1: int, x2: int, x3: int, xi: int, d: int) -> bool:
    """Rules 9-12 for x_i, i >= 4, given x_1, x_2 and x_3."""
    zeros1 = ((1 << d) - 1) & ~x1
    if xi <= x3 or xi.bit_count() < x1.bit_count():
        return False
    if (xi & zeros1).bit_count() < (x2 & zeros1).bit_count():
        return False
    k = d - x2.bit_length()  # leading zero coordinates of x_2
    head = ((1 << k) - 1) << (d - k)
    return (xi & head).bit_count() >= (x3 & head).bit_count()


def _accepts_at(depth: int, chosen: Sequence[int], y: int, d: int) -> bool:
    if depth == 0:
        return accepts_first(y, d)
    if depth == 1:
        return accepts_second(chosen[0], y, d)
    if depth == 2:
        return accepts_third(chosen[0], chosen[1], y, d)
    return accepts_later(chosen[0], chosen[1], chosen[2], y, d)


def passes_heuristics(t: FreeTuple) -> bool:
    """Apply every rule that concerns the tuple's positions."""
    pts = t.points
    return all(_accepts_at(i, pts, pts[i], t.dimension) for i in range(len(pts)))


# -- streaming and counting -------------------------------------------------


def _valid_prefix(spec: CaseSpec, chosen: Tuple[int, ...]) -> bool:
    if len(chosen) > spec.free_count:
        return False
    pool = set(spec.pool)
    if any(x not in pool for x in chosen):
        return False
    if any(a >= b for a, b in zip(chosen, chosen[1:])):
        return False
    if spec.heuristics:
        return all(_accepts_at(i, chosen, chosen[i], spec.dimension) for i in range(len(chosen)))
    return True


def _later(spec: CaseSpec, chosen: Tuple[int, ...]) -> List[int]:
    last = chosen[-1] if chosen else -1
    return [y for y in spec.pool if y > last]


def _extend_tuple(spec: CaseSpec, chosen: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
    r = spec.free_count
    depth = len(chosen)
    if depth == r:
        yield chosen
        return
    later = _later(spec, chosen)
    if not spec.heuristics:
        for rest in itertools.combinations(later, r - depth):
            yield chosen + rest
        return
    if depth >= 3:
        # rules for x_4.. only look at x_1..x_3, so the tail is a plain combination
        ok = [y for y in later if accepts_later(chosen[0], chosen[1], chosen[2], y, spec.dimension)]
        for rest in itertools.combinations(ok, r - depth):
            yield chosen + rest
        return
    for y in later:
        if _accepts_at(depth, chosen, y, spec.dimension):
            yield from _extend_tuple(spec, chosen + (y,))


def enumerate_tuples(spec: CaseSpec, prefix: Sequence[int] = ()) -> Iterator[FreeTuple]:
    """Stream free tuples in lexicographic order, optionally only those starting with prefix."""
    start = tuple(prefix)
    if not _valid_prefix(spec, start):
        return
    for points in _extend_tuple(spec, start):
        yield FreeTuple(spec.dimension, points)


def count_prefix(spec: CaseSpec, chosen: Tuple[int, ...]) -> int:
    """Number of streamed tuples starting with a valid prefix, without materialising them."""
    r = spec.free_count
    depth = len(chosen)
    if depth == r:
        return 1
    later = _later(spec, chosen)
    if not spec.heuristics:
        return math.comb(len(later), r - depth)
    if depth >= 3:
        ok = sum(1 for y in later if accepts_later(chosen[0], chosen[1], chosen[2], y, spec.dimension))
        return math.comb(ok, r - depth)
    return sum(
        count_prefix(spec, chosen + (y,))
        for y in later
        if _accepts_at(depth, chosen, y, spec.dimension)
    )


def count_enumeration(spec: CaseSpec, x1_slice: Optional[Collection[int]] = None) -> int:
    """Number of tuples enumerate_tuples emits, optionally only for x_1 in a slice."""
    if x1_slice is None and not spec.heuristics:
        return math.comb(len(spec.pool), spec.free_count)
    total = 0
    for x1 in spec.pool:
        if x1_slice is not None and x1 not in x1_slice:
            continue
        if _valid_prefix(spec, (x1,)):
            total += count_prefix(spec, (x1,))
    return total


def parse_slice(spec: CaseSpec, text: str) -> range:
    """Parse ``x1=first``, ``x1=V`` or ``x1=LO:HI`` (half-open) into a range of x_1 values."""
    key, sep, value = text.partition("=")
    if key.strip() != "x1" or not sep:
        raise InvalidCaseError(f"slice must look like x1=first, x1=V or x1=LO:HI, got {text!r}")
    value = value.strip()
    try:
        if value == "first":
            first = next(iter(enumerate_tuples(spec)), None)
            if first is None:
                raise InvalidCaseError("the enumeration is empty")
            return range(first.points[0], first.points[0] + 1)
        if ":" in value:
            lo, hi = value.split(":", 1)
            return range(int(lo), int(hi))
        v = int(value)
    except ValueError as e:
        raise InvalidCaseError(f"bad slice value {value!r}") from e
    return range(v, v + 1)


# -- sharding and sampling --------------------------------------------------


def shard_keys(spec: CaseSpec) -> Iterator[Tuple[int, ...]]:
    """Non-empty shards in stream order, keyed by the first min(2, r) free points."""
    length = min(2, spec.free_count)

    def walk(chosen: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        if len(chosen) == length:
            if count_prefix(spec, chosen):
                yield chosen
            return
        for y in _later(spec, chosen):
            if not spec.heuristics or _accepts_at(len(chosen), chosen, y, spec.dimension):
                yield from walk(chosen + (y,))

    yield from walk(())


def shard_id(key: Sequence[int]) -> str:
    """Report identifier of a shard key, e.g. "3-7"."""
    return "-".join(str(x) for x in key)


def sample_tuples(spec: CaseSpec, count: int, seed: int) -> List[FreeTuple]:
    """Draw uniformly random free tuples from the unpruned space."""
    rng = np.random.default_rng(seed)
    pool = np.array(spec.pool, dtype=np.int64)
    out = []
    for _ in range(count):
        picked = np.sort(rng.choice(pool, size=spec.free_count, replace=False))
        out.append(FreeTuple(spec.dimension, tuple(picked.tolist())))
    return out


# -- coordinate-permutation orbits -----------------------------------------


@lru_cache(maxsize=None)
def _permutation_table(d: int) -> np.ndarray:
    """Row p maps each word to its image under the p-th coordinate permutation."""
    table = np.array(
        [[permute_point(x, perm, d) for x in range(1 << d)] for perm in itertools.permutations(range(d))],
        dtype=np.int64,
    )
    table.setflags(write=False)
    return table


def _orbit_images(t: FreeTuple) -> np.ndarray:
    images = _permutation_table(t.dimension)[:, list(t.points)]
    return np.sort(images, axis=1)


def orbit_min(t: FreeTuple) -> FreeTuple:
    """Lexicographically least tuple in the coordinate-permutation orbit of t."""
    if not t.points:
        return t
    images = _orbit_images(t)
    first = np.lexsort(images.T[::-1])[0]
    return FreeTuple(t.dimension, tuple(images[first].tolist()))


def orbit_min_check(t: FreeTuple) -> bool:
    """True iff no coordinate permutation yields a lexicographically earlier tuple.

    Exact but costs d! sorts; tests use it as the reference for the rules.
    """
    return orbit_min(t).points == t.points
