"""Window-constrained blocks: every ``t + 1`` consecutive columns pairwise distinct.

Columns are ``ell``-bit integers read top to bottom (top row is the most
significant bit).  Messages map to blocks by mixed-radix unranking with
``2**ell - t`` choices per column.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import BitArray2D
from .errors import AmbiguousPattern, InvalidParams, NoConsistentPattern, NotEncodable, OutOfRange
from .indel1d import apply_deletions, deletion_embeddings


@dataclass(frozen=True)
class WindowBlock:
    ell: int
    t: int
    columns: tuple[int, ...]

    @property
    def w(self) -> int:
        return len(self.columns)

    def to_array(self) -> BitArray2D:
        out = np.zeros((self.ell, self.w), dtype=np.uint8)
        for j, v in enumerate(self.columns):
            for r in range(self.ell):
                out[r, j] = (v >> (self.ell - 1 - r)) & 1
        return BitArray2D._wrap(out)

    @classmethod
    def from_array(cls, arr, t: int) -> "WindowBlock":
        a = np.asarray(arr, dtype=np.uint8)
        ell = a.shape[0]
        weights = (1 << np.arange(ell - 1, -1, -1)).astype(np.int64)
        cols = tuple(int(v) for v in weights @ a.astype(np.int64))
        return cls(ell=ell, t=t, columns=cols)


@dataclass(frozen=True)
class ConfusionInterval:
    """Inclusive index range ``[start, end]`` holding ``original_count`` original lines."""

    start: int
    end: int
    original_count: int

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    def to_dict(self) -> dict:
        return {"start": self.start, "end": self.end, "original_count": self.original_count}


def capacity(ell: int, t: int, w: int) -> int:
    if (1 << ell) <= t:
        raise InvalidParams(f"2^ell = {1 << ell} must exceed t = {t}")
    return ((1 << ell) - t) ** w


def is_window_valid(columns: Sequence[int], t: int) -> bool:
    for i, c in enumerate(columns):
        if c in columns[i + 1 : i + 1 + t]:
            return False
    return True


def validate(block: WindowBlock) -> bool:
    return is_window_valid(block.columns, block.t)


def unrank(msg: int, ell: int, t: int, w: int) -> WindowBlock:
    radix = (1 << ell) - t
    cap = capacity(ell, t, w)
    if not 0 <= msg < cap:
        raise OutOfRange(f"message {msg} outside [0, {cap})")
    digits = [0] * w
    for i in range(w - 1, -1, -1):
        msg, digits[i] = divmod(msg, radix)
    cols: list[int] = []
    for i, d in enumerate(digits):
        v = d
        for f in sorted(set(cols[max(0, i - t) : i])):
            if f <= v:
                v += 1
        cols.append(v)
    return WindowBlock(ell=ell, t=t, columns=tuple(cols))


def rank(block: WindowBlock) -> int:
    ell, t = block.ell, block.t
    radix = (1 << ell) - t
    if radix < 1:
        raise NotEncodable("2^ell must exceed t")
    msg = 0
    cols = block.columns
    for i, v in enumerate(cols):
        forbidden = sorted(set(cols[max(0, i - t) : i]))
        if v in forbidden or not 0 <= v < (1 << ell):
            raise NotEncodable(f"column {i} repeats a column within the window")
        d = v - bisect_left(forbidden, v)
        if d >= radix:
            raise NotEncodable(f"column {i} lies outside the enumerable subset")
        msg = msg * radix + d
    return msg


def _row_tuples(rows) -> list[list[int]]:
    return [[int(v) for v in r] for r in np.asarray(rows, dtype=np.uint8)]


def localize_deleted_columns(originals, receiveds, t: int) -> tuple[int, ...]:
    """Exact deleted column indices of a window-constrained block."""
    orig = _row_tuples(originals)
    recv = _row_tuples(receiveds)
    if len(orig) != len(recv) or not orig:
        raise NoConsistentPattern("row counts differ or block is empty")
    d = len(orig[0]) - len(recv[0])
    if not 0 <= d <= t:
        raise NoConsistentPattern(f"length difference {d} outside [0, {t}]")
    surviving: set[tuple[int, ...]] | None = None
    for o, r in zip(orig, recv):
        pats = deletion_embeddings(o, r)
        surviving = pats if surviving is None else surviving & pats
        if not surviving:
            raise NoConsistentPattern("row candidate patterns do not intersect")
    if len(surviving) != 1:
        raise AmbiguousPattern(f"{len(surviving)} deletion patterns survive")
    (pattern,) = surviving
    assert all(apply_deletions(o, pattern) == r for o, r in zip(orig, recv))
    return pattern


def confusion_findings(
    patterns: Iterable[tuple[int, ...]], t: int, strict: bool = True
) -> list[int | ConfusionInterval]:
    """Collapse surviving insertion tuples into exact indices and merged windows.

    With ``strict`` the window bounds are asserted; the decoder turns it off
    and discards oversized windows itself.
    """
    pats = sorted(set(patterns))
    if not pats:
        return []
    d = len(pats[0])
    if len(pats) == 1:
        return list(pats[0])
    spans = [(min(p[k] for p in pats), max(p[k] for p in pats)) for k in range(d)]
    merged: list[list[int]] = []
    for lo, hi in spans:
        if merged and lo <= merged[-1][1] + 1:
            merged[-1][1] = max(merged[-1][1], hi)
            merged[-1][2] += 1
        else:
            merged.append([lo, hi, 1])
    out: list[int | ConfusionInterval] = []
    for lo, hi, ins in merged:
        if lo == hi:
            out.append(lo)
        else:
            ci = ConfusionInterval(lo, hi, (hi - lo + 1) - ins)
            if strict:
                assert ci.length <= 2 * t + 1 and ci.original_count <= t, ci
            out.append(ci)
    return out


def localize_inserted_columns(originals, receiveds, t: int) -> list[int | ConfusionInterval]:
    orig = _row_tuples(originals)
    recv = _row_tuples(receiveds)
    if len(orig) != len(recv) or not orig:
        raise NoConsistentPattern("row counts differ or block is empty")
    d = len(recv[0]) - len(orig[0])
    if not 0 <= d <= t:
        raise NoConsistentPattern(f"length difference {d} outside [0, {t}]")
    if d == 0:
        if orig != recv:
            raise NoConsistentPattern("equal lengths but different content")
        return []
    surviving: set[tuple[int, ...]] | None = None
    for o, r in zip(orig, recv):
        pats = deletion_embeddings(r, o)
        surviving = pats if surviving is None else surviving & pats
        if not surviving:
            raise NoConsistentPattern("row candidate patterns do not intersect")
    return confusion_findings(surviving, t)
