"""Classical Hadamard constructions used as offline catalog stand-ins.

Paley I over q = 19 and q = 23 and Paley II over q = 13 give matrices of
orders 20, 24 and 28 that belong to catalog classes, so their dephased
ranks are known without downloading anything.
"""

import numpy as np

from .gf2 import SignMatrix


def sylvester(k: int) -> SignMatrix:
    """Return the Sylvester matrix of order 2**k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    h = np.ones((1, 1), dtype=np.int8)
    block = np.array([[1, 1], [1, -1]], dtype=np.int8)
    for _ in range(k):
        h = np.kron(h, block)
    return SignMatrix(h)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, int(n**0.5) + 1))


def _jacobsthal(q: int) -> np.ndarray:
    """Return Q[a][b] = chi(a - b) for the quadratic character chi of GF(q)."""
    residues = {(x * x) % q for x in range(1, q)}
    chi = np.array([0] + [1 if a in residues else -1 for a in range(1, q)], dtype=np.int8)
    idx = np.arange(q)
    return chi[(idx[:, None] - idx[None, :]) % q]


def paley_i(q: int) -> SignMatrix:
    """Paley construction I: order q + 1 for a prime q = 3 mod 4."""
    if not _is_prime(q) or q % 4 != 3:
        raise ValueError(f"Paley I needs a prime q = 3 mod 4, got {q}")
    s = np.zeros((q + 1, q + 1), dtype=np.int8)
    s[0, 1:] = 1
    s[1:, 0] = -1
    s[1:, 1:] = _jacobsthal(q)
    return SignMatrix(np.eye(q + 1, dtype=np.int8) + s)


def paley_ii(q: int) -> SignMatrix:
    """Paley construction II: order 2(q + 1) for a prime q = 1 mod 4."""
    if not _is_prime(q) or q % 4 != 1:
        raise ValueError(f"Paley II needs a prime q = 1 mod 4, got {q}")
    c = np.zeros((q + 1, q + 1), dtype=np.int8)
    c[0, 1:] = 1
    c[1:, 0] = 1
    c[1:, 1:] = _jacobsthal(q)
    signed = np.array([[1, 1], [1, -1]], dtype=np.int8)
    zero_block = np.array([[1, -1], [-1, -1]], dtype=np.int8)
    h = np.kron(c, signed) + np.kron(np.eye(q + 1, dtype=np.int8), zero_block)
    return SignMatrix(h)
