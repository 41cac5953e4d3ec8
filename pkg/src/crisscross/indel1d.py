"""Systematic row protection against up to t insertions or deletions.

Two check functions are available:

* ``VT`` (t = 1 only): the Varshamov-Tenengolts syndrome
  ``sum(i * x_i) mod (w + 1)`` with 1-based ``i``.
* ``HASH``: a salted polynomial hash modulo the largest prime below
  ``2**payload_bits``.  Decoding is a brute-force search of the t-indel
  neighbourhood; a collision is reported as :class:`Ambiguous`, and
  :func:`certify_salt` finds a salt under which a given row has none.

The check value is written as ``payload_bits`` bits, repeated ``t + 1``
times back to back, then zero padded to ``r_w``.  Up to ``t`` redundancy
cells may arrive as erasures (``-1``) at known positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import (
    Ambiguous,
    BudgetExceeded,
    InvalidParams,
    LengthMismatch,
    NotASubsequence,
    NotASupersequence,
    Undecodable,
)

VT = "VT"
HASH = "HASH"
ERASED = -1


def clog2(x: int) -> int:
    return max(0, math.ceil(math.log2(x))) if x > 1 else 0


def redundancy_budget(w: int, t: int) -> int:
    """``(4t + 1) * ceil(log2 w)``."""
    return (4 * t + 1) * clog2(w)


@dataclass(frozen=True)
class RowCodeConfig:
    w: int
    t: int
    r_w: int
    salt: int = 0
    mode: str = HASH

    def __post_init__(self) -> None:
        if self.w < 1 or self.t < 1:
            raise InvalidParams("w and t must be positive")
        if self.mode not in (VT, HASH):
            raise InvalidParams(f"unknown mode {self.mode!r}")
        if self.mode == VT and self.t != 1:
            raise InvalidParams("VT mode corrects a single indel only")
        if self.mode == HASH and self.payload_bits < 2:
            raise BudgetExceeded("hash payload needs at least 2 bits")
        if self.replicated_bits > self.r_w:
            raise BudgetExceeded(f"replicated payload {self.replicated_bits} > r_w={self.r_w}")

    @classmethod
    def default(cls, w: int, t: int, mode: str | None = None, r_w: int | None = None, salt: int = 0) -> "RowCodeConfig":
        mode = mode or (VT if t == 1 else HASH)
        if r_w is None:
            if mode == VT:
                r_w = (t + 1) * clog2(w + 1)
            else:
                r_w = (t + 1) * (redundancy_budget(w, t) // (t + 1))
        return cls(w=w, t=t, r_w=r_w, salt=salt, mode=mode)

    @property
    def payload_bits(self) -> int:
        if self.mode == VT:
            return max(1, clog2(self.w + 1))
        return self.r_w // (self.t + 1)

    @property
    def replicated_bits(self) -> int:
        return (self.t + 1) * self.payload_bits


# ---------------------------------------------------------------------------
# check values
# ---------------------------------------------------------------------------


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d, s = d // 2, s + 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def _hash_prime(bits: int) -> int:
    p = (1 << bits) - 1
    while not _is_prime(p):
        p -= 1
    return p


def _mix(x: int) -> int:
    # splitmix64 finaliser
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return x ^ (x >> 31)


@lru_cache(maxsize=256)
def _hash_weights(w: int, bits: int, salt: int) -> tuple[int, np.ndarray]:
    p = _hash_prime(bits)
    a = 2 + _mix(salt * 0x1F123BB5 + bits) % max(1, p - 3)
    vals, x = [], a
    for _ in range(w):
        vals.append(x)
        x = x * a % p
    if w * p < (1 << 62):
        arr = np.array(vals, dtype=np.int64)
    else:
        arr = np.array(vals, dtype=object)
    arr.setflags(write=False)
    return p, arr


def check_values(rows: np.ndarray, cfg: RowCodeConfig) -> np.ndarray:
    """Check value of every row of a 2-D 0/1 array (vectorised)."""
    X = np.asarray(rows)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != cfg.w:
        raise LengthMismatch(f"rows must have length {cfg.w}")
    if cfg.mode == VT:
        idx = np.arange(1, cfg.w + 1, dtype=np.int64)
        return (X.astype(np.int64) @ idx) % (cfg.w + 1)
    p, weights = _hash_weights(cfg.w, cfg.payload_bits, cfg.salt)
    Xc = X.astype(weights.dtype)
    return (Xc @ weights) % p


def check_value(row: Sequence[int], cfg: RowCodeConfig) -> int:
    return int(check_values(np.asarray(row, dtype=np.uint8), cfg)[0])


def _value_bits(value: int, width: int) -> np.ndarray:
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def encode_redundancy(row: Sequence[int], cfg: RowCodeConfig) -> np.ndarray:
    x = np.asarray(row, dtype=np.uint8).reshape(-1)
    if x.size != cfg.w:
        raise LengthMismatch(f"row must have length {cfg.w}, got {x.size}")
    payload = _value_bits(check_value(x, cfg), cfg.payload_bits)
    out = np.zeros(cfg.r_w, dtype=np.uint8)
    out[: cfg.replicated_bits] = np.tile(payload, cfg.t + 1)
    return out


def dereplicate(redundancy: Sequence[int], cfg: RowCodeConfig) -> int:
    """Recover the check value from redundancy cells; ``-1``/``None`` marks an erasure."""
    red = [ERASED if v is None else int(v) for v in redundancy]
    if len(red) != cfg.r_w:
        raise LengthMismatch(f"redundancy must have length {cfg.r_w}, got {len(red)}")
    P = cfg.payload_bits
    value = 0
    for k in range(P):
        copies = {red[k + c * P] for c in range(cfg.t + 1)} - {ERASED}
        if len(copies) != 1:
            raise Undecodable(f"payload bit {k}: copies {sorted(copies) or 'all erased'}")
        value = (value << 1) | copies.pop()
    return value


# ---------------------------------------------------------------------------
# neighbourhoods (vectorised, deduplicated)
# ---------------------------------------------------------------------------


def _unique_rows(arr: np.ndarray) -> np.ndarray:
    if arr.shape[0] <= 1:
        return arr
    return np.unique(arr, axis=0)


def supersequences(rows, d: int) -> np.ndarray:
    """All distinct binary sequences obtained by inserting ``d`` symbols."""
    cur = np.asarray(rows, dtype=np.uint8)
    if cur.ndim == 1:
        cur = cur[None, :]
    for _ in range(d):
        N, m = cur.shape
        out = np.empty((N, m + 1, 2, m + 1), dtype=np.uint8)
        for p in range(m + 1):
            out[:, p, :, :p] = cur[:, None, :p]
            out[:, p, 0, p] = 0
            out[:, p, 1, p] = 1
            out[:, p, :, p + 1 :] = cur[:, None, p:]
        cur = _unique_rows(out.reshape(-1, m + 1))
    return cur


def subsequences(rows, d: int) -> np.ndarray:
    """All distinct sequences obtained by deleting ``d`` symbols."""
    cur = np.asarray(rows, dtype=np.uint8)
    if cur.ndim == 1:
        cur = cur[None, :]
    for _ in range(d):
        N, m = cur.shape
        if m == 0:
            raise ValueError("cannot delete from an empty sequence")
        parts = [np.delete(cur, p, axis=1) for p in range(m)]
        cur = _unique_rows(np.concatenate(parts, axis=0))
    return cur


# ---------------------------------------------------------------------------
# decoding
# ---------------------------------------------------------------------------


def _vt_single_deletion(y: np.ndarray, w: int, a: int) -> np.ndarray:
    weight = int(y.sum())
    delta = (a - int(np.dot(np.arange(1, w, dtype=np.int64), y))) % (w + 1)
    y = list(int(v) for v in y)
    if delta <= weight:
        # a 0 went missing; it had `delta` ones to its right
        ones, pos = 0, len(y)
        while ones < delta:
            pos -= 1
            ones += y[pos]
        # leftmost slot with exactly `delta` ones to the right
        while pos > 0 and y[pos - 1] == 0:
            pos -= 1
        return np.array(y[:pos] + [0] + y[pos:], dtype=np.uint8)
    zeros_left = delta - weight - 1
    zeros, pos = 0, 0
    while zeros < zeros_left:
        zeros += 1 - y[pos]
        pos += 1
    return np.array(y[:pos] + [1] + y[pos:], dtype=np.uint8)


def deletion_candidates(received, w: int, value: int, num_del: int, cfg: RowCodeConfig) -> np.ndarray:
    """Every length-``w`` supersequence of ``received`` whose check value is ``value``."""
    y = np.asarray(received, dtype=np.uint8).reshape(-1)
    if y.size != w - num_del:
        raise LengthMismatch(f"received length {y.size} != w - num_del = {w - num_del}")
    if cfg.mode == VT and num_del == 1:
        x = _vt_single_deletion(y, w, value)
        return x[None, :]
    cands = supersequences(y, num_del)
    return cands[check_values(cands, cfg) == value]


def insertion_candidates(received, w: int, value: int, num_ins: int, cfg: RowCodeConfig) -> np.ndarray:
    z = np.asarray(received, dtype=np.uint8).reshape(-1)
    if z.size != w + num_ins:
        raise LengthMismatch(f"received length {z.size} != w + num_ins = {w + num_ins}")
    cands = subsequences(z, num_ins)
    return cands[check_values(cands, cfg) == value]


def _unique_or_raise(cands: np.ndarray) -> np.ndarray:
    if cands.shape[0] == 0:
        raise Undecodable("no candidate matches the check value")
    if cands.shape[0] > 1:
        raise Ambiguous(f"{cands.shape[0]} candidates share the check value")
    return cands[0].copy()


def _check_budget(num: int, cfg: RowCodeConfig) -> None:
    if not 0 <= num <= cfg.t:
        raise InvalidParams(f"{num} indels exceed t={cfg.t}")


def decode_deletions(received, w: int, redundancy, num_del: int, cfg: RowCodeConfig) -> np.ndarray:
    _check_budget(num_del, cfg)
    value = dereplicate(redundancy, cfg)
    return _unique_or_raise(deletion_candidates(received, w, value, num_del, cfg))


def decode_insertions(received, w: int, redundancy, num_ins: int, cfg: RowCodeConfig) -> np.ndarray:
    _check_budget(num_ins, cfg)
    value = dereplicate(redundancy, cfg)
    return _unique_or_raise(insertion_candidates(received, w, value, num_ins, cfg))


def confusable_rows(row, t: int) -> np.ndarray:
    """Rows of the same length sharing a common subsequence after at most ``t`` deletions each."""
    x = np.asarray(row, dtype=np.uint8).reshape(1, -1)
    parts = [x]
    for d in range(1, t + 1):
        parts.append(supersequences(subsequences(x, d), d))
    return _unique_rows(np.concatenate(parts, axis=0))


def certify_salt(row, cfg: RowCodeConfig, max_tries: int = 256) -> RowCodeConfig:
    """Smallest salt >= ``cfg.salt`` whose hash isolates ``row`` in its indel neighbourhood."""
    if cfg.mode == VT:
        return cfg
    x = np.asarray(row, dtype=np.uint8).reshape(-1)
    others = confusable_rows(x, cfg.t)
    others = others[np.any(others != x, axis=1)]
    for k in range(max_tries):
        trial = replace(cfg, salt=cfg.salt + k)
        if not np.any(check_values(others, trial) == check_value(x, trial)):
            return trial
    raise Ambiguous(f"no collision-free salt within {max_tries} tries")


# ---------------------------------------------------------------------------
# exact position patterns
# ---------------------------------------------------------------------------


def deletion_embeddings(original: Sequence[Hashable], received: Sequence[Hashable]) -> set[tuple[int, ...]]:
    """All sorted index tuples ``P`` with ``delete(original, P) == received``."""
    orig, recv = list(original), list(received)
    n, m = len(orig), len(recv)
    d = n - m
    if d < 0:
        return set()

    @lru_cache(maxsize=None)
    def feasible(i: int, j: int) -> bool:
        if j == m:
            return True  # delete the rest
        if n - i < m - j:
            return False
        if orig[i] == recv[j] and feasible(i + 1, j + 1):
            return True
        return (i - j) < d and feasible(i + 1, j)

    out: set[tuple[int, ...]] = set()

    def walk(i: int, j: int, acc: tuple[int, ...]) -> None:
        if j == m:
            out.add(acc + tuple(range(i, n)))
            return
        if orig[i] == recv[j] and feasible(i + 1, j + 1):
            walk(i + 1, j + 1, acc)
        if (i - j) < d and feasible(i + 1, j):
            walk(i + 1, j, acc + (i,))

    if feasible(0, 0):
        walk(0, 0, ())
    return out


def candidate_deletion_patterns(original: Sequence[int], received: Sequence[int]) -> set[tuple[int, ...]]:
    orig = [int(v) for v in original]
    recv = [int(v) for v in received]
    pats = deletion_embeddings(orig, recv)
    if not pats:
        raise NotASubsequence("received is not a subsequence of original")
    return pats


def candidate_insertion_patterns(original: Sequence[int], received: Sequence[int]) -> set[tuple[int, ...]]:
    """Received-frame index tuples whose removal yields ``original``."""
    orig = [int(v) for v in original]
    recv = [int(v) for v in received]
    pats = deletion_embeddings(recv, orig)
    if not pats:
        raise NotASupersequence("received is not a supersequence of original")
    return pats


def apply_deletions(seq: Sequence, positions: Iterable[int]) -> list:
    drop = set(positions)
    return [v for i, v in enumerate(seq) if i not in drop]
