"""Bit-coded relation tables for exhaustive sweeps over tiny sets.

A relation m -> n is coded as an integer whose bit ``i*n + j`` is set when
``(i, j)`` is related.  For m*n <= 9 every relation fits in a table of at most
512 entries, so composition, converse and meet become array lookups and whole
law families can be checked with vectorised numpy indexing.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

MAX_BITS = 9


def n_codes(m: int, n: int) -> int:
    return 1 << (m * n)


@lru_cache(maxsize=None)
def decode_all(m: int, n: int) -> np.ndarray:
    """All m x n boolean matrices, indexed by code."""
    if m * n > MAX_BITS:
        raise ValueError(f"{m}x{n} relations are too many to tabulate")
    codes = np.arange(n_codes(m, n), dtype=np.int64)
    bits = (codes[:, None] >> np.arange(m * n, dtype=np.int64)) & 1
    out = bits.astype(bool).reshape(len(codes), m, n)
    out.setflags(write=False)
    return out


def encode(mat: np.ndarray) -> int:
    flat = np.asarray(mat, dtype=bool).reshape(-1)
    return int(np.dot(flat.astype(np.int64), 1 << np.arange(flat.size, dtype=np.int64)))


def _weights(m: int, n: int) -> np.ndarray:
    return (1 << np.arange(m * n, dtype=np.int64)).reshape(m, n)


@lru_cache(maxsize=None)
def compose_table(m: int, n: int, p: int) -> np.ndarray:
    """table[a, b] = code of (a ; b) for a: m -> n, b: n -> p."""
    A = decode_all(m, n).astype(np.uint8)
    B = decode_all(n, p).astype(np.uint8)
    # (NA, m, n) x (NB, n, p) -> (NA, NB, m, p)
    prod = np.einsum("aij,bjk->abik", A, B) > 0
    w = _weights(m, p)
    out = (prod.astype(np.int64) * w).sum(axis=(2, 3))
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def converse_table(m: int, n: int) -> np.ndarray:
    mats = decode_all(m, n).transpose(0, 2, 1)
    out = (mats.astype(np.int64) * _weights(n, m)).sum(axis=(1, 2))
    out.setflags(write=False)
    return out


def identity_code(n: int) -> int:
    return encode(np.eye(n, dtype=bool))


def top_code(m: int, n: int) -> int:
    return n_codes(m, n) - 1


@lru_cache(maxsize=None)
def leq_identity(n: int) -> np.ndarray:
    """mask[c] is True when endo-relation c on n is below the identity."""
    codes = np.arange(n_codes(n, n), dtype=np.int64)
    return (codes & ~identity_code(n)) == 0
