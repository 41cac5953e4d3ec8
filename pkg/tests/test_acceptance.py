"""One test per acceptance criterion."""

import itertools
import math
from collections import Counter

import numpy as np
import pytest

from crisscross import analysis, channel, codec, gabidulin, indel1d, locator, window
from crisscross.channel import ChannelPattern
from crisscross.errors import AmbiguousPattern
from crisscross.indel1d import HASH, VT, RowCodeConfig
from helpers import adversarial_insertion, gf2_rank_oracle, naive_deletion_patterns, naive_insertion_patterns

# (n, t) points where the layout exists for n <= 256
GRID = [(64, 1), (128, 1), (128, 2), (128, 3), (256, 1), (256, 2), (256, 3)]


def _roundtrip(p, gab, X, msg, pattern):
    C, out, rep = codec.decode(p, gab, channel.apply(X, pattern))
    return C == X and bool(np.array_equal(out, msg)), rep


def test_c01_exhaustive_deletions_n64(code64):
    p, gab = code64
    rng = np.random.default_rng(101)
    patterns = list(channel.all_deletion_patterns((64, 64), 1))
    assert len(patterns) == 128
    failures = 0
    for _ in range(20):
        msg = rng.integers(0, 2, codec.message_capacity(p), dtype=np.uint8)
        X = codec.encode(p, gab, msg)
        for pat in patterns:
            ok, _ = _roundtrip(p, gab, X, msg, pat)
            failures += not ok
    assert failures == 0


def test_c02_sampled_deletions_n128_t2(code128):
    p, gab = code128
    rng = np.random.default_rng(202)
    splits, failures = Counter(), 0
    X = msg = None
    for k in range(500):
        if k % 50 == 0:
            msg = rng.integers(0, 2, codec.message_capacity(p), dtype=np.uint8)
            X = codec.encode(p, gab, msg)
        pat = channel.random_pattern((128, 128), 2, "deletion", 20_000 + k)
        splits[(pat.t_r, pat.t_c)] += 1
        ok, _ = _roundtrip(p, gab, X, msg, pat)
        failures += not ok
    assert set(splits) == {(2, 0), (1, 1), (0, 2)}
    assert failures == 0


def test_c03_insertions_random_and_adversarial(code64, code128):
    for p, gab in (code64, code128):
        _insertion_trials(p, gab, 150)


def _insertion_trials(p, gab, trials):
    n, t = p.n, p.t
    rng = np.random.default_rng(303 + n)
    failures, worst = 0, 0
    for k in range(trials):
        if k % 25 == 0:
            msg = rng.integers(0, 2, codec.message_capacity(p), dtype=np.uint8)
            X = codec.encode(p, gab, msg)
        for pat in (
            channel.random_pattern((n, n), t, "insertion", 30_000 + k),
            adversarial_insertion(X.bits, t, 40_000 + k),
        ):
            ok, rep = _roundtrip(p, gab, X, msg, pat)
            failures += not ok
            worst = max(worst, rep.erasures_used)
    assert failures == 0
    assert worst <= t


def test_c04_equivalence_property():
    small = analysis.equivalence_sweep((3, 3), 1, 10_000, seed=404)
    assert small.pairs_tested == 10_000 and small.counterexamples == 0
    big = analysis.equivalence_sweep((4, 4), 2, 1_000, seed=405)
    assert big.pairs_tested == 1_000 and big.counterexamples == 0


def test_c05_locator_exhaustive():
    for t in (1, 2):
        _locator_recovery(t)


def _locator_recovery(t):
    q, g = (t + 1) ** 2, t + 1
    s_min = locator.min_size(t)
    checked = 0
    for s in (s_min, s_min + g):
        Ls = locator.build_locator(s, t).cells.bits
        for dr in range(t + 1):
            for R in itertools.combinations(range(s), dr):
                for C in itertools.combinations(range(q), t - dr):
                    Y = np.delete(np.delete(Ls, R, 0), C, 1)
                    loc = locator.locate_deletions_L(Y, s, t)
                    assert loc.rows == frozenset(R)
                    assert loc.col_counts == tuple(sum(1 for c in C if c // g == k) for k in range(g))
                    checked += 1
    expected = sum(
        math.comb(s, dr) * math.comb(q, t - dr) for s in (s_min, s_min + g) for dr in range(t + 1)
    )
    assert checked == expected


def test_c06_window_localization():
    for t in (1, 2):
        _window_recovery(t)


def _window_recovery(t):
    ell, w = 4, 10
    rng = np.random.default_rng(606 + t)
    cap = window.capacity(ell, t, w)
    for _ in range(150):
        blk = window.unrank(int(rng.integers(cap)), ell, t, w)
        assert window.validate(blk)
        A = blk.to_array().bits
        for d in range(1, t + 1):
            for P in itertools.combinations(range(w), d):
                try:
                    got = window.localize_deleted_columns(A, np.delete(A, P, axis=1), t)
                except AmbiguousPattern:
                    pytest.fail(f"ambiguous for columns {blk.columns} pattern {P}")
                assert got == P


def test_c07_gabidulin_n8_t2():
    gab = gabidulin.build(8, 2)
    rng = np.random.default_rng(707)
    masks = [((), ())]
    masks += [((i,), ()) for i in range(8)] + [((), (j,)) for j in range(8)]
    masks += [(R, ()) for R in itertools.combinations(range(8), 2)]
    masks += [((), C) for C in itertools.combinations(range(8), 2)]
    masks += [((i,), (j,)) for i in range(8) for j in range(8)]
    assert len(masks) == 137
    for _ in range(100):
        X = gabidulin.encode(gab, rng.integers(0, 2, gab.message_bits))
        for R, C in masks:
            Z = X.bits.copy()
            Z[list(R), :] = rng.integers(0, 2, (len(R), 8))
            Z[:, list(C)] = rng.integers(0, 2, (8, len(C)))
            assert gabidulin.erasure_decode(gab, Z, R, C) == X
    low = 0
    for _ in range(10_000):
        m = rng.integers(0, 2, gab.message_bits)
        if not m.any():
            continue
        low += gf2_rank_oracle(gabidulin.encode(gab, m).bits) < 3
    assert low == 0


def test_c08_redundancy_arithmetic():
    assert analysis.lower_bound_redundancy(64, 2) == 139
    for t in (1, 2, 3):
        p = codec.make_params(256, t)
        markers = sum(p.regions[k].size for k in ("E11", "E12", "E21", "E22"))
        assert markers == 4 * (t + 1) ** 2
        assert codec.redundancy_accounting(p)["actual"]["R_M"] == 4 * (t + 1) ** 2
    for n, t in GRID:
        L = math.log2(n)
        lower = t * n + t * L - math.log2(math.factorial(t))
        upper = (
            t * n
            + 2 * (4 * t * t + t) * L * L
            + 2 * (5 * t * t + t) * L
            + 4 * t * (t + 1) ** 2
            + (6 * t**3 + 13 * t * t + 8 * t + 1) * L
            + 4 * (t + 1) ** 2
        )
        assert analysis.lower_bound_redundancy(n, t) == pytest.approx(lower, rel=1e-9)
        assert analysis.construction_upper_bound_bits(n, t) == pytest.approx(upper, rel=1e-9)
        actual = n * n - codec.message_capacity(codec.make_params(n, t))
        assert lower <= actual <= upper, (n, t, actual)


ROW_CONFIGS = [(20, 1, 40), (20, 2, 30), (12, 1, 40), (12, 2, 50), (16, 2, 40)]


def _row_cfg(w, t, row):
    cfg = RowCodeConfig.default(w, t, mode=VT if t == 1 else HASH)
    return indel1d.certify_salt(row, cfg)


def test_c09_indel1d_exhaustive():
    assert sum(r for _, _, r in ROW_CONFIGS) == 200
    for w, t, rows in ROW_CONFIGS:
        _indel_rows(w, t, rows)


def _indel_rows(w, t, rows):
    rng = np.random.default_rng(900 + 10 * w + t)
    for _ in range(rows):
        x = rng.integers(0, 2, w).astype(np.uint8)
        cfg = _row_cfg(w, t, x)
        red = indel1d.encode_redundancy(x, cfg)
        xs = x.tolist()
        dels = {tuple(np.delete(x, P)) for P in itertools.combinations(range(w), t)}
        for y in dels:
            assert indel1d.decode_deletions(list(y), w, red, t, cfg).tolist() == xs
        ins = set()
        for P in itertools.combinations(range(w + t), t):
            for bits in itertools.product((0, 1), repeat=t):
                y = list(xs)
                for pos, b in zip(P, bits):
                    y.insert(pos, b)
                ins.add(tuple(y))
        for y in ins:
            assert indel1d.decode_insertions(list(y), w, red, t, cfg).tolist() == xs
        if w <= 12:
            for y in dels:
                assert indel1d.candidate_deletion_patterns(xs, list(y)) == naive_deletion_patterns(xs, list(y))
            for y in ins:
                assert indel1d.candidate_insertion_patterns(xs, list(y)) == naive_insertion_patterns(xs, list(y))


def test_c10_window_bijection():
    seen = set()
    for m in range(2401):
        blk = window.unrank(m, 3, 1, 4)
        assert window.validate(blk)
        assert window.rank(blk) == m
        seen.add(blk.columns)
    assert len(seen) == 2401 == window.capacity(3, 1, 4)
