"""Brute-force reference decisions for small dimensions.

These deliberately avoid the connection-set machinery: spectra are found by
explicit inner products of +-1 character vectors, tilings by set unions.
"""

from typing import List, Set

import numpy as np

from .errors import DimensionTooLargeError
from .spectile import SubsetZ2d

MAX_ORACLE_DIMENSION = 4


def _check_dimension(e: SubsetZ2d):
    if e.dimension > MAX_ORACLE_DIMENSION:
        raise DimensionTooLargeError(
            f"brute force is limited to d <= {MAX_ORACLE_DIMENSION}, got {e.dimension}"
        )


def character_vectors(e: SubsetZ2d) -> np.ndarray:
    """Row b holds (-1)^(b.x) for each x in E."""
    group = 1 << e.dimension
    rows = []
    for b in range(group):
        rows.append([-1 if bin(b & x).count("1") % 2 else 1 for x in e.points])
    return np.array(rows, dtype=np.int64).reshape(group, e.size)


def brute_is_spectral(e: SubsetZ2d) -> bool:
    """Search every |E|-subset of characters for a pairwise orthogonal one."""
    _check_dimension(e)
    if e.size == 0:
        return False
    vectors = character_vectors(e)
    gram = vectors @ vectors.T
    group = len(vectors)
    target = e.size

    def extend(chosen: List[int], start: int) -> bool:
        if len(chosen) == target:
            return True
        for b in range(start, group):
            if all(gram[b, c] == 0 for c in chosen):
                chosen.append(b)
                if extend(chosen, b + 1):
                    return True
                chosen.pop()
        return False

    return extend([], 0)


def brute_is_tile(e: SubsetZ2d) -> bool:
    """Search translate sets for a partition of the group.

    The smallest uncovered point must lie in some translate, which gives a
    complete search over all translate sets of size 2^d / |E|.
    """
    _check_dimension(e)
    group = 1 << e.dimension
    if e.size == 0 or group % e.size:
        return False
    base = set(e.points)

    def cover(covered: Set[int], remaining: int) -> bool:
        if remaining == 0:
            return len(covered) == group
        u = min(set(range(group)) - covered)
        for x in base:
            copy = {y ^ u ^ x for y in base}
            if covered.isdisjoint(copy) and cover(covered | copy, remaining - 1):
                return True
        return False

    return cover(set(), group // e.size)
