"""Ball-intersection checks for the insertion/deletion equivalence, and redundancy bounds."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .channel import DELETION, INSERTION, ball_codes, splits
from .errors import InvalidParams


def balls_disjoint(X1, X2, t: int, mode: str) -> bool:
    A = np.asarray(X1, dtype=np.uint8)
    B = np.asarray(X2, dtype=np.uint8)
    if A.shape != B.shape:
        raise InvalidParams("arrays must share a shape")
    for t_r, t_c in splits(A.shape, t, mode):
        a = ball_codes(A, t_r, t_c, mode)
        b = ball_codes(B, t_r, t_c, mode)
        if np.intersect1d(a, b, assume_unique=True).size:
            return False
    return True


def equivalence_check(X1, X2, t: int) -> bool:
    """True when deletion balls and insertion balls agree on disjointness."""
    return balls_disjoint(X1, X2, t, DELETION) == balls_disjoint(X1, X2, t, INSERTION)


@dataclass(frozen=True)
class EquivalenceSummary:
    shape: tuple[int, int]
    t: int
    pairs_tested: int
    counterexamples: int
    disjoint_pairs: int
    first_counterexample: tuple | None = None

    def to_dict(self) -> dict:
        d = {
            "shape": list(self.shape),
            "t": self.t,
            "pairs_tested": self.pairs_tested,
            "counterexamples": self.counterexamples,
            "disjoint_pairs": self.disjoint_pairs,
        }
        if self.first_counterexample is not None:
            d["first_counterexample"] = [a.tolist() for a in self.first_counterexample]
        return d


def equivalence_sweep(shape: tuple[int, int], t: int, pairs: int, seed: int = 0) -> EquivalenceSummary:
    """Sample random pairs and count violations of the equivalence."""
    if pairs < 1:
        raise InvalidParams("pairs must be >= 1")
    rng = np.random.default_rng(seed)
    bad, disjoint, first = 0, 0, None
    for _ in range(pairs):
        X1 = rng.integers(0, 2, shape, dtype=np.uint8)
        X2 = rng.integers(0, 2, shape, dtype=np.uint8)
        d = balls_disjoint(X1, X2, t, DELETION)
        i = balls_disjoint(X1, X2, t, INSERTION)
        disjoint += d
        if d != i:
            bad += 1
            first = first or (X1, X2)
    return EquivalenceSummary(tuple(shape), t, pairs, bad, disjoint, first)


# ---------------------------------------------------------------------------
# bounds (log base 2 throughout)
# ---------------------------------------------------------------------------


def lower_bound_redundancy(n: int, t: int) -> float:
    return t * n + t * math.log2(n) - math.log2(math.factorial(t))


def cardinality_upper_bound_log2(n: int, t: int) -> float:
    return math.log2(math.factorial(t)) + n * n - t * math.log2(2**n - 1) - t * math.log2(n)


def construction_upper_bound_bits(n: int, t: int) -> float:
    L = math.log2(n)
    return (
        t * n
        + 2 * (4 * t * t + t) * L * L
        + 2 * (5 * t * t + t) * L
        + 4 * t * (t + 1) ** 2
        + (6 * t**3 + 13 * t * t + 8 * t + 1) * L
        + 4 * (t + 1) ** 2
    )


@dataclass(frozen=True)
class BoundsRecord:
    n: int
    t: int
    lower_bound_bits: float
    cardinality_upper_bound_log2: float
    construction_upper_bound_bits: float


def bounds_record(n: int, t: int) -> BoundsRecord:
    if n < 2 or t < 1:
        raise InvalidParams("need n >= 2 and t >= 1")
    return BoundsRecord(
        n,
        t,
        lower_bound_redundancy(n, t),
        cardinality_upper_bound_log2(n, t),
        construction_upper_bound_bits(n, t),
    )


def bounds_csv(records: Iterable[BoundsRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "t", "lower", "construction_upper", "cardinality_upper_log2"])
    for r in records:
        w.writerow([r.n, r.t, repr(r.lower_bound_bits), repr(r.construction_upper_bound_bits), repr(r.cardinality_upper_bound_log2)])
    return buf.getvalue()
