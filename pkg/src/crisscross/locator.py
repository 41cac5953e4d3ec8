"""Locator arrays ``L_s`` / ``T_s``, marker arrays, and pattern matching against them.

``L'`` is ``I_{t+1} (x) 1_{t+1}``: row ``i`` is the indicator of column group
``i``.  ``L_s`` stacks ``s / (t+1)`` copies of ``L'`` and ``T_s`` is its
transpose.  Because the content is public, detection is exhaustive matching:
column hypotheses are enumerated and rows are aligned by a memoised
subsequence walk.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .core import BitArray2D
from .errors import (
    AmbiguousPattern,
    InvalidSize,
    MarkerNotFound,
    NotALocatorSubpattern,
    NotALocatorSuperpattern,
)
from .indel1d import deletion_embeddings
from .window import ConfusionInterval, confusion_findings

L = "L"
T = "T"


def min_size(t: int) -> int:
    return -(-t // 2) * (t + 1)


@lru_cache(maxsize=None)
def _locator_cells(s: int, t: int) -> np.ndarray:
    g = t + 1
    base = np.kron(np.eye(g, dtype=np.uint8), np.ones((1, g), dtype=np.uint8))
    out = np.tile(base, (s // g, 1))
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class LocatorArray:
    s: int
    t: int
    orientation: str
    cells: BitArray2D


def build_locator(s: int, t: int, orientation: str = L) -> LocatorArray:
    if t < 1 or s % (t + 1) or s < min_size(t) or s <= 0:
        raise InvalidSize(f"s={s} must be a positive multiple of {t + 1} and >= {min_size(t)}")
    if orientation not in (L, T):
        raise ValueError(f"orientation must be 'L' or 'T', got {orientation!r}")
    cells = _locator_cells(s, t)
    if orientation == T:
        cells = cells.T
    return LocatorArray(s, t, orientation, BitArray2D._wrap(np.ascontiguousarray(cells)))


@dataclass(frozen=True)
class MarkerSet:
    E11: BitArray2D
    E12: BitArray2D
    E21: BitArray2D
    E22: BitArray2D


def build_markers(t: int) -> MarkerSet:
    g = t + 1
    base = _locator_cells(g, t)
    e21 = np.ascontiguousarray(base[:, :g])
    e22 = np.ascontiguousarray(1 - base[:, -g:])
    w = BitArray2D._wrap
    return MarkerSet(E11=w(e21.T.copy()), E12=w(e22.T.copy()), E21=w(e21), E22=w(e22))


# ---------------------------------------------------------------------------
# generic 2-D matching
# ---------------------------------------------------------------------------


def _row_keys(arr: np.ndarray) -> tuple[bytes, ...]:
    return tuple(r.tobytes() for r in np.ascontiguousarray(arr, dtype=np.uint8))


def deletion_solutions(original, received) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All (row pattern, column pattern) pairs turning ``original`` into ``received``.

    Column subsets are enumerated and rows aligned by subsequence walk, so put
    the longer dimension on the rows.
    """
    O = np.asarray(original, dtype=np.uint8)
    R = np.asarray(received, dtype=np.uint8)
    dc = O.shape[1] - R.shape[1]
    if dc < 0 or O.shape[0] < R.shape[0]:
        return set()
    rkeys = _row_keys(R)
    seen: dict[bytes, set[tuple[int, ...]]] = {}
    out = set()
    for cols in combinations(range(O.shape[1]), dc):
        reduced = np.delete(O, cols, axis=1) if cols else O
        key = reduced.tobytes()
        if key not in seen:
            seen[key] = deletion_embeddings(_row_keys(reduced), rkeys)
        for rp in seen[key]:
            out.add((rp, cols))
    return out


def insertion_solutions(original, received) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All (row pattern, column pattern) in the received frame whose removal gives ``original``."""
    O = np.asarray(original, dtype=np.uint8)
    R = np.asarray(received, dtype=np.uint8)
    ic = R.shape[1] - O.shape[1]
    if ic < 0 or R.shape[0] < O.shape[0]:
        return set()
    okeys = _row_keys(O)
    out = set()
    for cols in combinations(range(R.shape[1]), ic):
        reduced = np.delete(R, cols, axis=1) if cols else R
        for rp in deletion_embeddings(_row_keys(reduced), okeys):
            out.add((rp, cols))
    return out


# ---------------------------------------------------------------------------
# locator detection
# ---------------------------------------------------------------------------


class DeletionLocation(NamedTuple):
    rows: frozenset
    col_counts: tuple[int, ...]


@dataclass(frozen=True)
class InsertionLocation:
    row_findings: tuple
    col_counts: tuple[int, ...]
    col_ambiguous: tuple[bool, ...]

    def __iter__(self):
        yield self.row_findings
        yield (self.col_counts, self.col_ambiguous)


def group_counts(cols, t: int) -> tuple[int, ...]:
    counts = [0] * (t + 1)
    for c in cols:
        counts[c // (t + 1)] += 1
    return tuple(counts)


def canonical_deleted_columns(counts, t: int) -> tuple[int, ...]:
    """Attribute each run's deletions to the highest indices of that run."""
    g = t + 1
    out = []
    for k, c in enumerate(counts):
        out.extend(range((k + 1) * g - c, (k + 1) * g))
    return tuple(out)


def locate_deletions_L(received, s: int, t: int) -> DeletionLocation:
    R = np.asarray(received, dtype=np.uint8)
    Ls = build_locator(s, t).cells.bits
    sols = deletion_solutions(Ls, R)
    if not sols:
        raise NotALocatorSubpattern("received cannot come from L_s by row/column deletions")
    outcomes = {(rp, group_counts(cp, t)) for rp, cp in sols}
    if len(outcomes) != 1:
        raise AmbiguousPattern(f"{len(outcomes)} distinct deletion explanations")
    ((rp, counts),) = outcomes
    return DeletionLocation(frozenset(rp), counts)


def _insert_groups(cols: tuple[int, ...], t: int) -> tuple[tuple[int, ...], tuple[bool, ...]]:
    g = t + 1
    q = g * g
    counts = [0] * g
    amb = [False] * g
    for k, c in enumerate(cols):
        before = c - k  # original columns preceding this insertion
        grp = min(max(before - 1, 0), q - 1) // g
        counts[grp] += 1
        if 0 < before < q and before % g == 0:
            amb[grp] = amb[min(grp + 1, g - 1)] = True
    return tuple(counts), tuple(amb)


def locate_insertions_L(received, s: int, t: int) -> InsertionLocation:
    R = np.asarray(received, dtype=np.uint8)
    Ls = build_locator(s, t).cells.bits
    sols = insertion_solutions(Ls, R)
    if not sols:
        raise NotALocatorSuperpattern("received cannot come from L_s by row/column insertions")
    findings = confusion_findings({rp for rp, _ in sols}, t)
    for f in findings:
        if isinstance(f, ConfusionInterval):
            assert f.length <= 2 * t and f.original_count <= t, f
    attributions = sorted({_insert_groups(cp, t) for _, cp in sols})
    counts = attributions[0][0]
    amb = list(attributions[0][1])
    for c, a in attributions[1:]:
        for k in range(t + 1):
            amb[k] = amb[k] or a[k] or c[k] != counts[k]
    return InsertionLocation(tuple(findings), counts, tuple(amb))


def scan_for_marker(strip, marker, t: int, mode: str = "del") -> list[tuple[int, int]]:
    """Offsets where ``marker`` occurs in ``strip``.

    Exact occurrences are returned when present.  Otherwise the marker is
    allowed to have lost (``del``) or gained (``ins``) up to ``t`` rows and
    columns, and the top-left offsets of such windows are returned.
    """
    S = np.asarray(strip, dtype=np.uint8)
    M = np.asarray(marker, dtype=np.uint8)
    h, w = M.shape
    hits = _exact_hits(S, M)
    if hits:
        return hits
    found: set[tuple[int, int]] = set()
    for dr in range(t + 1):
        for dc in range(t + 1 - dr):
            if dr + dc == 0:
                continue
            if mode == "del":
                hh, ww = h - dr, w - dc
                if hh < 1 or ww < 1:
                    continue
                for r in range(S.shape[0] - hh + 1):
                    for c in range(S.shape[1] - ww + 1):
                        if deletion_solutions(M, S[r : r + hh, c : c + ww]):
                            found.add((r, c))
            else:
                hh, ww = h + dr, w + dc
                for r in range(S.shape[0] - hh + 1):
                    for c in range(S.shape[1] - ww + 1):
                        if insertion_solutions(M, S[r : r + hh, c : c + ww]):
                            found.add((r, c))
        if found:
            break
    if not found:
        raise MarkerNotFound("marker absent from strip")
    return sorted(found)


def _exact_hits(S: np.ndarray, M: np.ndarray) -> list[tuple[int, int]]:
    h, w = M.shape
    if S.shape[0] < h or S.shape[1] < w:
        return []
    win = np.lib.stride_tricks.sliding_window_view(S, (h, w))
    eq = np.all(win == M, axis=(2, 3))
    return [(int(r), int(c)) for r, c in zip(*np.nonzero(eq))]
