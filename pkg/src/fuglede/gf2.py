"""GF(2) matrix arithmetic for Hadamard and log-Hadamard matrices.

Log-Hadamard matrices are stored bit-packed: each row is one Python int and
column ``j`` is bit ``j`` of its row word. Python ints are arbitrary width,
so the same code handles order 20 and order 256.
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np


class SignMatrix:
    """Square matrix with entries in {+1, -1}, as read from the catalog."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[Iterable[int]] | np.ndarray):
        array = np.array(entries, dtype=np.int8)
        if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
            raise ValueError(f"sign matrix must be square and non-empty, got shape {array.shape}")
        if not np.all(np.abs(array) == 1):
            raise ValueError("sign matrix entries must be +1 or -1")
        array.setflags(write=False)
        self.entries = array

    @property
    def order(self) -> int:
        """Number of rows (and columns)."""
        return int(self.entries.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignMatrix):
            return NotImplemented
        return bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash(self.entries.tobytes())

    def __repr__(self) -> str:
        return f"SignMatrix(order={self.order})"


@dataclass(frozen=True)
class GF2Matrix:
    """Bit-packed matrix over the two-element field."""

    rows: int
    cols: int
    bits: Tuple[int, ...]

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("GF2Matrix dimensions must be positive")
        if len(self.bits) != self.rows:
            raise ValueError(f"expected {self.rows} row words, got {len(self.bits)}")
        limit = 1 << self.cols
        if any(word < 0 or word >= limit for word in self.bits):
            raise ValueError(f"row word does not fit in {self.cols} columns")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "GF2Matrix":
        """Build from a dense 0/1 nested sequence."""
        return cls.from_numpy(np.array(rows, dtype=np.uint8))

    @classmethod
    def from_numpy(cls, array: np.ndarray) -> "GF2Matrix":
        """Pack a 2-D 0/1 array."""
        if array.ndim != 2:
            raise ValueError("expected a 2-D array")
        if np.any((array != 0) & (array != 1)):
            raise ValueError("GF(2) entries must be 0 or 1")
        weights = [1 << j for j in range(array.shape[1])]
        words = tuple(
            sum(w for w, bit in zip(weights, row) if bit) for row in array.tolist()
        )
        return cls(int(array.shape[0]), int(array.shape[1]), words)

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        """Return the n x n identity."""
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "GF2Matrix":
        """Return the all-zero matrix."""
        return cls(rows, cols, (0,) * rows)

    def to_numpy(self) -> np.ndarray:
        """Unpack into a dense uint8 array."""
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, word in enumerate(self.bits):
            for j in range(self.cols):
                out[i, j] = (word >> j) & 1
        return out

    def is_log_hadamard(self) -> bool:
        """Check that distinct rows differ in exactly cols/2 positions."""
        if self.rows != self.cols:
            return False
        if self.rows == 1:
            return True
        if self.cols % 2:
            return False
        half = self.cols // 2
        return all(
            (self.bits[a] ^ self.bits[b]).bit_count() == half
            for a in range(self.rows)
            for b in range(a + 1, self.rows)
        )


@dataclass(frozen=True)
class RankRecord:
    """Dephased GF(2) rank of one catalog matrix."""

    source_id: str
    order: int
    dephased_rank: int

    def __post_init__(self):
        if not 0 <= self.dephased_rank <= self.order:
            raise ValueError(f"rank {self.dephased_rank} out of range for order {self.order}")


def to_log_hadamard(h: SignMatrix) -> GF2Matrix:
    """Map +1 to 0 and -1 to 1, entrywise."""
    return GF2Matrix.from_numpy((h.entries < 0).astype(np.uint8))


def is_hadamard(h: SignMatrix) -> bool:
    """Return True iff every pair of distinct rows agrees in exactly m/2 positions.

    For a +-1 matrix this is the same as ``H @ H.T == m * I``.
    """
    m = h.order
    gram = h.entries.astype(np.int64) @ h.entries.T.astype(np.int64)
    return bool(np.array_equal(gram, m * np.eye(m, dtype=np.int64)))


def dephase(l: GF2Matrix) -> GF2Matrix:
    """Normalise the first row and column to zero.

    ``out[i][j] = l[i][j] ^ l[0][j] ^ l[i][0] ^ l[0][0]``, evaluated a row
    word at a time. The result is idempotent under dephase.
    """
    if l.rows != l.cols:
        raise ValueError("dephase needs a square matrix")
    ones = (1 << l.cols) - 1
    first = l.bits[0]
    corner = first & 1
    words = tuple(
        row ^ first ^ (ones if (row & 1) ^ corner else 0) for row in l.bits
    )
    return GF2Matrix(l.rows, l.cols, words)


def gf2_rank(l: GF2Matrix) -> int:
    """Rank over GF(2) by XOR elimination on packed rows."""
    # pivot bit -> basis row whose highest set bit is that pivot
    basis: dict[int, int] = {}
    for word in l.bits:
        while word:
            pivot = word.bit_length() - 1
            reducer = basis.get(pivot)
            if reducer is None:
                basis[pivot] = word
                break
            word ^= reducer
    return len(basis)


def dephased_rank(h: SignMatrix) -> int:
    """Run to_log_hadamard, dephase and gf2_rank in sequence."""
    return gf2_rank(dephase(to_log_hadamard(h)))


def distinct_ranks(records: Iterable[RankRecord]) -> dict[int, List[int]]:
    """Group the distinct dephased ranks by order."""
    by_order: dict[int, set[int]] = {}
    for record in records:
        by_order.setdefault(record.order, set()).add(record.dephased_rank)
    return {order: sorted(ranks) for order, ranks in sorted(by_order.items())}
