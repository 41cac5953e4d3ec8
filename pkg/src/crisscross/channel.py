"""Criss-cross deletion/insertion channel and exhaustive ball enumeration.

Deletion indices refer to the original array.  Insertion indices refer to
the received array and are applied in ascending order, rows first; column
contents are sized for the array after row insertion.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable

import numpy as np

from .core import BitArray2D
from .errors import ContentLengthMismatch, FormatError, IndexOutOfRange, Infeasible, TooLarge

DELETION = "deletion"
INSERTION = "insertion"

DELETION_CELL_CAP = 36
INSERTION_CELL_CAP = 30
_RESULT_CAP = 5_000_000


def _cap(default: int) -> int:
    env = os.environ.get("CRISSCROSS_MAX_ENUM")
    return int(env) if env else default


@dataclass(frozen=True)
class ChannelPattern:
    mode: str
    row_ops: tuple = ()
    col_ops: tuple = ()
    seed: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.mode not in (DELETION, INSERTION):
            raise FormatError(f"mode must be deletion or insertion, got {self.mode!r}")
        if self.mode == DELETION:
            object.__setattr__(self, "row_ops", tuple(sorted(int(i) for i in self.row_ops)))
            object.__setattr__(self, "col_ops", tuple(sorted(int(i) for i in self.col_ops)))
        else:
            norm = lambda ops: tuple(sorted((int(i), tuple(int(b) for b in c)) for i, c in ops))
            object.__setattr__(self, "row_ops", norm(self.row_ops))
            object.__setattr__(self, "col_ops", norm(self.col_ops))

    @property
    def t_r(self) -> int:
        return len(self.row_ops)

    @property
    def t_c(self) -> int:
        return len(self.col_ops)

    @property
    def t(self) -> int:
        return self.t_r + self.t_c

    def to_dict(self) -> dict:
        def ops(items):
            if self.mode == DELETION:
                return [{"index": i} for i in items]
            return [{"index": i, "content": "".join(map(str, c))} for i, c in items]

        d = {"mode": self.mode, "row_ops": ops(self.row_ops), "col_ops": ops(self.col_ops)}
        if self.seed is not None:
            d["seed"] = self.seed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "ChannelPattern":
        try:
            mode = d["mode"]

            def ops(items):
                if mode == DELETION:
                    return [int(o["index"]) for o in items]
                out = []
                for o in items:
                    c = o["content"]
                    bits = [int(ch) for ch in c] if isinstance(c, str) else [int(b) for b in c]
                    if any(b not in (0, 1) for b in bits):
                        raise FormatError("content must be binary")
                    out.append((int(o["index"]), bits))
                return out

            return cls(mode, ops(d.get("row_ops", [])), ops(d.get("col_ops", [])), d.get("seed"))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"malformed pattern: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "ChannelPattern":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from exc


def apply(X, p: ChannelPattern) -> BitArray2D:
    arr = np.asarray(X, dtype=np.uint8)
    rows, cols = arr.shape
    if p.mode == DELETION:
        for i in p.row_ops:
            if not 0 <= i < rows:
                raise IndexOutOfRange(f"row {i} outside [0, {rows})")
        for j in p.col_ops:
            if not 0 <= j < cols:
                raise IndexOutOfRange(f"column {j} outside [0, {cols})")
        if len(set(p.row_ops)) != len(p.row_ops) or len(set(p.col_ops)) != len(p.col_ops):
            raise IndexOutOfRange("repeated deletion index")
        out = np.delete(np.delete(arr, p.row_ops, axis=0), p.col_ops, axis=1)
        return BitArray2D._wrap(out)
    out = arr
    for i, content in p.row_ops:
        if not 0 <= i <= out.shape[0]:
            raise IndexOutOfRange(f"row insertion index {i} outside [0, {out.shape[0]}]")
        if len(content) != out.shape[1]:
            raise ContentLengthMismatch(f"row content length {len(content)} != {out.shape[1]}")
        out = np.insert(out, i, np.asarray(content, dtype=np.uint8), axis=0)
    for j, content in p.col_ops:
        if not 0 <= j <= out.shape[1]:
            raise IndexOutOfRange(f"column insertion index {j} outside [0, {out.shape[1]}]")
        if len(content) != out.shape[0]:
            raise ContentLengthMismatch(f"column content length {len(content)} != {out.shape[0]}")
        out = np.insert(out, j, np.asarray(content, dtype=np.uint8), axis=1)
    return BitArray2D._wrap(out)


# ---------------------------------------------------------------------------
# balls
# ---------------------------------------------------------------------------


def _delete_lines(arrs: np.ndarray, k: int, axis: int) -> np.ndarray:
    """All ways of deleting ``k`` lines along ``axis`` (1 = rows, 2 = columns) of a stack."""
    if k == 0:
        return arrs
    size = arrs.shape[axis]
    keeps = [np.array([i for i in range(size) if i not in drop], dtype=np.intp) for drop in combinations(range(size), k)]
    parts = [np.take(arrs, keep, axis=axis) for keep in keeps]
    return np.concatenate(parts, axis=0)


def _all_contents(length: int) -> np.ndarray:
    v = np.arange(1 << length, dtype=np.int64)
    return ((v[:, None] >> np.arange(length)) & 1).astype(np.uint8)


def _insert_rows(arrs: np.ndarray, k: int) -> np.ndarray:
    if k == 0:
        return arrs
    N, R, C = arrs.shape
    contents = _all_contents(C * k).reshape(-1, k, C)
    M = contents.shape[0]
    parts = []
    for pos in combinations(range(R + k), k):
        keep = [i for i in range(R + k) if i not in pos]
        out = np.empty((N, M, R + k, C), dtype=np.uint8)
        out[:, :, keep, :] = arrs[:, None, :, :]
        out[:, :, list(pos), :] = contents[None, :, :, :]
        parts.append(out.reshape(N * M, R + k, C))
    return np.concatenate(parts, axis=0)


def _insert_cols(arrs: np.ndarray, k: int) -> np.ndarray:
    return _insert_rows(arrs.transpose(0, 2, 1), k).transpose(0, 2, 1)


def _ball_size_estimate(shape: tuple[int, int], t_r: int, t_c: int, mode: str) -> int:
    r, c = shape
    if mode == DELETION:
        return comb(r, t_r) * comb(c, t_c)
    return comb(r + t_r, t_r) * 2 ** (c * t_r) * comb(c + t_c, t_c) * 2 ** ((r + t_r) * t_c)


def _check_feasible(shape: tuple[int, int], t_r: int, t_c: int, mode: str) -> None:
    r, c = shape
    if mode == DELETION:
        if t_r > r or t_c > c:
            raise Infeasible(f"cannot delete {t_r} rows / {t_c} columns from {r}x{c}")
        if r * c > _cap(DELETION_CELL_CAP):
            raise TooLarge(f"{r}x{c} exceeds the deletion enumeration cap")
    else:
        if (r + t_r) * (c + t_c) > _cap(INSERTION_CELL_CAP):
            raise TooLarge(f"output {(r + t_r)}x{(c + t_c)} exceeds the insertion enumeration cap")
        if _ball_size_estimate(shape, t_r, t_c, mode) > _RESULT_CAP:
            raise TooLarge("insertion ball enumeration too large")


def ball_stack(X, t_r: int, t_c: int, mode: str) -> np.ndarray:
    """Every channel output (with repeats) as an ``N x rows x cols`` stack."""
    arr = np.asarray(X, dtype=np.uint8)
    _check_feasible(arr.shape, t_r, t_c, mode)
    stack = arr[None, :, :]
    if mode == DELETION:
        return _delete_lines(_delete_lines(stack, t_r, 1), t_c, 2)
    return _insert_cols(_insert_rows(stack, t_r), t_c)


def ball_codes(X, t_r: int, t_c: int, mode: str) -> np.ndarray:
    """Sorted unique integer codes of the ball members (all of one shape)."""
    stack = ball_stack(X, t_r, t_c, mode)
    N = stack.shape[0]
    flat = stack.reshape(N, -1)
    if flat.shape[1] <= 62:
        weights = np.left_shift(np.int64(1), np.arange(flat.shape[1], dtype=np.int64))
        return np.unique(flat.astype(np.int64) @ weights)
    packed = np.packbits(flat, axis=1)
    return np.unique(np.array([p.tobytes() for p in packed], dtype=object))


def _as_set(stack: np.ndarray) -> set[BitArray2D]:
    if stack.shape[0] == 0:
        return set()
    uniq = np.unique(stack.reshape(stack.shape[0], -1), axis=0)
    shape = stack.shape[1:]
    return {BitArray2D._wrap(u.reshape(shape).copy()) for u in uniq}


def deletion_ball(X, t_r: int, t_c: int) -> set[BitArray2D]:
    return _as_set(ball_stack(X, t_r, t_c, DELETION))


def insertion_ball(X, t_r: int, t_c: int) -> set[BitArray2D]:
    return _as_set(ball_stack(X, t_r, t_c, INSERTION))


def splits(shape: tuple[int, int], t: int, mode: str) -> list[tuple[int, int]]:
    r, c = shape
    out = []
    for t_r in range(t + 1):
        t_c = t - t_r
        if mode == DELETION and (t_r > r or t_c > c):
            continue
        out.append((t_r, t_c))
    return out


def t_ball(X, t: int, mode: str) -> set[BitArray2D]:
    arr = np.asarray(X, dtype=np.uint8)
    out: set[BitArray2D] = set()
    for t_r, t_c in splits(arr.shape, t, mode):
        out |= _as_set(ball_stack(arr, t_r, t_c, mode))
    return out


def random_pattern(shape: tuple[int, int], t: int, mode: str, seed: int | None) -> ChannelPattern:
    rows, cols = shape
    options = splits(shape, t, mode)
    if t < 0 or not options:
        raise Infeasible(f"t={t} infeasible for shape {shape}")
    rng = np.random.default_rng(seed)
    t_r, t_c = options[int(rng.integers(len(options)))]
    if mode == DELETION:
        r_ops = sorted(rng.choice(rows, size=t_r, replace=False).tolist())
        c_ops = sorted(rng.choice(cols, size=t_c, replace=False).tolist())
        return ChannelPattern(DELETION, r_ops, c_ops, seed)
    r_pos = sorted(rng.choice(rows + t_r, size=t_r, replace=False).tolist())
    r_ops = [(i, rng.integers(0, 2, cols).tolist()) for i in r_pos]
    c_pos = sorted(rng.choice(cols + t_c, size=t_c, replace=False).tolist())
    c_ops = [(j, rng.integers(0, 2, rows + t_r).tolist()) for j in c_pos]
    return ChannelPattern(INSERTION, r_ops, c_ops, seed)


def all_deletion_patterns(shape: tuple[int, int], t: int) -> Iterable[ChannelPattern]:
    rows, cols = shape
    for t_r, t_c in splits(shape, t, DELETION):
        for R in combinations(range(rows), t_r):
            for C in combinations(range(cols), t_c):
                yield ChannelPattern(DELETION, R, C)
