"""Spectrality and tiling of subsets of Z_2^d via Cayley-graph clique search.

Points are ints whose bits are the coordinates, coordinate 1 being the most
significant bit, so numeric order is lexicographic order on coordinate
vectors. Graphs on Z_2^d are translation invariant: x ~ y iff 0 ~ x ^ y,
so a graph is stored as the bitmask of neighbours of 0 (its connection set).
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import PointOutOfRangeError, WitnessError


def coords(x: int, d: int) -> Tuple[int, ...]:
    """Coordinate vector of x, most significant bit first."""
    return tuple((x >> (d - 1 - j)) & 1 for j in range(d))


def from_coords(vector: Sequence[int]) -> int:
    """Inverse of coords."""
    x = 0
    for bit in vector:
        x = (x << 1) | (bit & 1)
    return x


@dataclass(frozen=True)
class SubsetZ2d:
    """A subset of Z_2^d as a strictly increasing tuple of words."""

    dimension: int
    points: Tuple[int, ...]

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")
        limit = 1 << self.dimension
        for x in self.points:
            if not 0 <= x < limit:
                raise PointOutOfRangeError(f"point {x} is out of range for Z_2^{self.dimension}")
        if any(a >= b for a, b in zip(self.points, self.points[1:])):
            raise ValueError("points must be strictly increasing")

    @classmethod
    def of(cls, points: Iterable[int], dimension: int) -> "SubsetZ2d":
        """Build from any iterable of points, sorting them and rejecting duplicates."""
        pts = list(points)
        unique = sorted(set(pts))
        if len(unique) != len(pts):
            raise ValueError("duplicate points in subset")
        return cls(dimension, tuple(unique))

    @classmethod
    def full(cls, dimension: int) -> "SubsetZ2d":
        """The whole group."""
        return cls(dimension, tuple(range(1 << dimension)))

    @classmethod
    def from_mask(cls, mask: int, dimension: int) -> "SubsetZ2d":
        """Inverse of the mask property."""
        return cls(dimension, tuple(x for x in range(1 << dimension) if (mask >> x) & 1))

    @property
    def size(self) -> int:
        """Number of points."""
        return len(self.points)

    @property
    def mask(self) -> int:
        """2^d-bit membership mask."""
        m = 0
        for x in self.points:
            m |= 1 << x
        return m

    def translate(self, s: int) -> "SubsetZ2d":
        """Return {x ^ s : x in E}."""
        return SubsetZ2d.of((x ^ s for x in self.points), self.dimension)

    def permute(self, perm: Sequence[int]) -> "SubsetZ2d":
        """Apply a coordinate permutation: coordinate j of the image is coordinate perm[j]."""
        return SubsetZ2d.of((permute_point(x, perm, self.dimension) for x in self.points), self.dimension)


def permute_point(x: int, perm: Sequence[int], d: int) -> int:
    """Coordinate j of the result is coordinate perm[j] of x."""
    c = coords(x, d)
    return from_coords([c[p] for p in perm])


@dataclass(frozen=True)
class ConnectionSet:
    """Neighbours of node 0 in a translation-invariant graph on Z_2^d."""

    dimension: int
    mask: int

    def __post_init__(self):
        if self.mask & 1:
            raise ValueError("node 0 cannot be its own neighbour")
        if self.mask >> (1 << self.dimension):
            raise ValueError("connection set does not fit in Z_2^d")

    def __contains__(self, t: int) -> bool:
        return bool((self.mask >> t) & 1)

    def points(self) -> List[int]:
        """Members in ascending order."""
        return _bits(self.mask)

    def neighbors(self, v: int) -> int:
        """Mask of all u adjacent to v, i.e. the connection set translated by v."""
        return xor_translate(self.mask, v, self.dimension)


@dataclass(frozen=True)
class DecisionResult:
    """Outcome of a spectral or tiling decision."""

    holds: bool
    witness: Optional[SubsetZ2d] = None


@dataclass(frozen=True)
class EquivalenceRecord:
    """Spectral and tiling decisions for one set."""

    spectral: bool
    tile: bool
    spectrum: Optional[SubsetZ2d] = field(default=None)
    tiling: Optional[SubsetZ2d] = field(default=None)

    @property
    def agree(self) -> bool:
        """True when the set is both spectral and a tile, or neither."""
        return self.spectral == self.tile


def _bits(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@lru_cache(maxsize=None)
def _half_masks(d: int) -> Tuple[int, ...]:
    """For each bit j, the mask of words with bit j clear."""
    return tuple(
        sum(1 << x for x in range(1 << d) if not (x >> j) & 1) for j in range(d)
    )


def xor_translate(mask: int, v: int, d: int) -> int:
    """Return the mask of {t ^ v : t in mask}.

    Translating by bit j swaps adjacent blocks of 2^j positions, so the
    whole translation is at most d shift-and-mask steps.
    """
    halves = _half_masks(d)
    for j in range(d):
        if (v >> j) & 1:
            step = 1 << j
            low = halves[j]
            mask = ((mask & low) << step) | ((mask >> step) & low)
    return mask


def fourier_value(e: SubsetZ2d, t: int) -> int:
    """Return sum over x in E of (-1)^(t.x)."""
    if not 0 <= t < (1 << e.dimension):
        raise PointOutOfRangeError(f"point {t} is out of range for Z_2^{e.dimension}")
    odd = sum((t & x).bit_count() & 1 for x in e.points)
    return e.size - 2 * odd


def fourier_values(e: SubsetZ2d) -> np.ndarray:
    """Fourier values of the indicator of E at every t, as one vector.

    Fast Walsh-Hadamard transform of the indicator, in place: d butterfly
    passes over a vector of length 2^d.
    """
    values = np.zeros(1 << e.dimension, dtype=np.int64)
    values[list(e.points)] = 1
    h = 1
    while h < values.size:
        blocks = values.reshape(-1, 2, h)
        low = blocks[:, 0, :].copy()
        blocks[:, 0, :] += blocks[:, 1, :]
        blocks[:, 1, :] = low - blocks[:, 1, :]
        h *= 2
    return values


def spectral_connection_set(e: SubsetZ2d) -> ConnectionSet:
    """Characters orthogonal to the trivial one on E: the nonzero Fourier zeros."""
    mask = 0
    for t in np.flatnonzero(fourier_values(e) == 0).tolist():
        if t:
            mask |= 1 << t
    return ConnectionSet(e.dimension, mask)


def difference_mask(e: SubsetZ2d) -> int:
    """Mask of E ^ E = {x ^ y : x, y in E}."""
    pts = np.fromiter(e.points, dtype=np.int64, count=e.size)
    mask = 0
    for t in np.unique(np.bitwise_xor.outer(pts, pts)).tolist():
        mask |= 1 << t
    return mask


def tiling_connection_set(e: SubsetZ2d) -> ConnectionSet:
    """Translates t with E and E ^ t disjoint: the complement of E ^ E."""
    everything = (1 << (1 << e.dimension)) - 1
    return ConnectionSet(e.dimension, everything & ~difference_mask(e) & ~1)


def has_k_clique(conn: ConnectionSet, k: int) -> Optional[List[int]]:
    """Find k points of conn whose pairwise XORs are all in conn.

    Together with 0 they form a (k+1)-clique of the Cayley graph. Candidates
    are tried in ascending order, so the witness is deterministic.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return []
    return _extend(conn, conn.mask, k)


def _extend(conn: ConnectionSet, candidates: int, k: int) -> Optional[List[int]]:
    while candidates.bit_count() >= k:
        low = candidates & -candidates
        v = low.bit_length() - 1
        candidates ^= low
        if k == 1:
            return [v]
        # only larger vertices remain in candidates, so each clique is met once
        narrowed = candidates & conn.neighbors(v)
        if narrowed.bit_count() >= k - 1:
            rest = _extend(conn, narrowed, k - 1)
            if rest is not None:
                return [v, *rest]
    return None


def verify_spectrum(e: SubsetZ2d, b: SubsetZ2d) -> bool:
    """Check |B| = |E| and that characters of B are pairwise orthogonal on E."""
    if b.size != e.size or b.dimension != e.dimension:
        return False
    return all(
        fourier_value(e, s ^ t) == 0
        for i, s in enumerate(b.points)
        for t in b.points[i + 1:]
    )


def verify_tiling(e: SubsetZ2d, translates: SubsetZ2d) -> bool:
    """Check that the translates of E partition Z_2^d."""
    covered = [x ^ t for t in translates.points for x in e.points]
    return len(covered) == 1 << e.dimension and len(set(covered)) == len(covered)


def is_spectral(e: SubsetZ2d) -> DecisionResult:
    """Decide whether E has a spectrum; the witness contains 0."""
    if e.size < 1:
        raise ValueError("spectrality needs a non-empty set")
    if e.size == 1:
        return DecisionResult(True, SubsetZ2d(e.dimension, (0,)))
    if e.size == 1 << e.dimension:
        return DecisionResult(True, SubsetZ2d.full(e.dimension))

    clique = has_k_clique(spectral_connection_set(e), e.size - 1)
    if clique is None:
        return DecisionResult(False)
    witness = SubsetZ2d.of([0, *clique], e.dimension)
    if not verify_spectrum(e, witness):
        raise WitnessError(f"spectrum {witness.points} is not orthogonal on {e.points}")
    return DecisionResult(True, witness)


def is_tile(e: SubsetZ2d) -> DecisionResult:
    """Decide whether translates of E tile Z_2^d; the witness contains 0."""
    group = 1 << e.dimension
    if e.size < 1 or group % e.size:
        return DecisionResult(False)
    if e.size == 1:
        return DecisionResult(True, SubsetZ2d.full(e.dimension))
    if e.size == group:
        return DecisionResult(True, SubsetZ2d(e.dimension, (0,)))

    clique = has_k_clique(tiling_connection_set(e), group // e.size - 1)
    if clique is None:
        return DecisionResult(False)
    witness = SubsetZ2d.of([0, *clique], e.dimension)
    if not verify_tiling(e, witness):
        raise WitnessError(f"translates {witness.points} do not partition Z_2^{e.dimension}")
    return DecisionResult(True, witness)


def check_equivalence(e: SubsetZ2d) -> EquivalenceRecord:
    """Decide both properties; a disagreement would refute Fuglede's conjecture for E."""
    spectral = is_spectral(e)
    tile = is_tile(e)
    return EquivalenceRecord(spectral.holds, tile.holds, spectral.witness, tile.witness)


def embed(e: SubsetZ2d, dimension: int) -> SubsetZ2d:
    """Identify Z_2^m with Z_2^m x {0}^(n-m) inside Z_2^n.

    The original coordinates stay first, so each point is shifted up by
    n - m bits.
    """
    if dimension < e.dimension:
        raise ValueError("cannot embed into a smaller group")
    shift = dimension - e.dimension
    return SubsetZ2d(dimension, tuple(x << shift for x in e.points))
