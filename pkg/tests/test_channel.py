import json
from collections import Counter

import numpy as np
import pytest

from crisscross import channel
from crisscross.channel import ChannelPattern
from crisscross.core import BitArray2D
from crisscross.errors import ContentLengthMismatch, FormatError, IndexOutOfRange, Infeasible, TooLarge
from helpers import naive_deletion_ball, naive_insertion_ball, naive_t_ball


def _codes(ball):
    return {(b.shape, b.bits.tobytes()) for b in ball}


def test_apply_examples():
    X = BitArray2D([[0, 1], [1, 0]])
    assert channel.apply(X, ChannelPattern("deletion")) == X
    assert channel.apply(X, ChannelPattern("deletion", [1], [1])).bits.tolist() == [[0]]
    Z = channel.apply(np.zeros((3, 3)), ChannelPattern("insertion", [(0, [0, 0, 0])], []))
    assert Z.shape == (4, 3) and not Z.bits.any()


def test_insertion_frames():
    X = np.array([[1, 1], [1, 1]])
    p = ChannelPattern("insertion", [(0, [0, 0]), (2, [0, 0])], [(2, [0, 0, 0, 0])])
    Y = channel.apply(X, p).bits
    assert Y.tolist() == [[0, 0, 0], [1, 1, 0], [0, 0, 0], [1, 1, 0]]
    with pytest.raises(IndexOutOfRange):
        channel.apply(X, ChannelPattern("insertion", [(0, [0, 0])], [(3, [0, 0, 0])]))


def test_apply_errors():
    X = np.zeros((3, 3))
    with pytest.raises(IndexOutOfRange):
        channel.apply(X, ChannelPattern("deletion", [3], []))
    with pytest.raises(IndexOutOfRange):
        channel.apply(X, ChannelPattern("insertion", [(5, [0, 0, 0])], []))
    with pytest.raises(ContentLengthMismatch):
        channel.apply(X, ChannelPattern("insertion", [(0, [0, 0])], []))
    # column contents are sized for the frame after row insertion
    with pytest.raises(ContentLengthMismatch):
        channel.apply(X, ChannelPattern("insertion", [(0, [0, 0, 0])], [(0, [0, 0, 0])]))


def test_deletion_ball_examples():
    assert len(channel.deletion_ball(np.zeros((2, 2)), 1, 0)) == 1
    assert _codes(channel.deletion_ball([[0, 1], [0, 1]], 0, 1)) == {
        ((2, 1), bytes([0, 0])),
        ((2, 1), bytes([1, 1])),
    }
    assert len(channel.deletion_ball([[0, 1], [1, 0]], 0, 1)) == 2


def test_insertion_ball_examples():
    got = {tuple(b.bits.ravel()) for b in channel.insertion_ball([[0]], 1, 0)}
    assert got == {(0, 0), (0, 1), (1, 0)}
    assert channel.insertion_ball([[1, 0]], 0, 0) == {BitArray2D([[1, 0]])}
    ball = channel.insertion_ball(np.zeros((2, 2)), 1, 0)
    assert _codes(ball) == naive_insertion_ball(np.zeros((2, 2)), 1, 0)


def test_balls_match_naive(rng):
    for _ in range(30):
        r, c = rng.integers(1, 4, 2)
        X = rng.integers(0, 2, (r, c)).astype(np.uint8)
        for t_r in range(min(r, 2) + 1):
            for t_c in range(min(c, 2) + 1):
                assert _codes(channel.deletion_ball(X, t_r, t_c)) == naive_deletion_ball(X, t_r, t_c)
        for t_r, t_c in [(1, 0), (0, 1), (1, 1)]:
            assert _codes(channel.insertion_ball(X, t_r, t_c)) == naive_insertion_ball(X, t_r, t_c)


def test_t_ball(rng):
    X = rng.integers(0, 2, (2, 2))
    assert channel.t_ball(X, 0, "deletion") == {BitArray2D(X)}
    assert channel.t_ball(X, 1, "deletion") == channel.deletion_ball(X, 1, 0) | channel.deletion_ball(X, 0, 1)
    Y = rng.integers(0, 2, (3, 3))
    shapes = {b.shape for b in channel.t_ball(Y, 2, "deletion")}
    assert shapes == {(1, 3), (2, 2), (3, 1)}
    assert _codes(channel.t_ball(Y, 1, "insertion")) == naive_t_ball(Y.astype(np.uint8), 1, "insertion")


def test_original_recoverable_from_deletion(rng):
    for _ in range(20):
        X = rng.integers(0, 2, (3, 3)).astype(np.uint8)
        p = channel.random_pattern((3, 3), 1, "deletion", int(rng.integers(1 << 30)))
        Y = channel.apply(X, p)
        assert BitArray2D(X) in channel.insertion_ball(Y, p.t_r, p.t_c)


def test_caps(monkeypatch):
    with pytest.raises(TooLarge):
        channel.deletion_ball(np.zeros((7, 7)), 1, 0)
    with pytest.raises(TooLarge):
        channel.insertion_ball(np.zeros((6, 5)), 1, 0)
    assert len(channel.insertion_ball(np.zeros((5, 5)), 1, 0)) == 6 * 32 - 5
    monkeypatch.setenv("CRISSCROSS_MAX_ENUM", "64")
    assert len(channel.deletion_ball(np.zeros((7, 7)), 1, 0)) == 1


def test_random_pattern(rng):
    a = channel.random_pattern((64, 64), 2, "insertion", 9)
    assert a == channel.random_pattern((64, 64), 2, "insertion", 9)
    assert channel.random_pattern((8, 8), 1, "deletion", 3).t == 1
    splits = Counter()
    for s in range(10_000):
        p = channel.random_pattern((8, 8), 2, "deletion", s)
        splits[(p.t_r, p.t_c)] += 1
    assert set(splits) == {(2, 0), (1, 1), (0, 2)}
    with pytest.raises(Infeasible):
        channel.random_pattern((1, 1), 3, "deletion", 0)


def test_pattern_json_roundtrip():
    p = channel.random_pattern((6, 6), 2, "insertion", 4)
    assert ChannelPattern.from_json(p.to_json()) == p
    d = json.loads(p.to_json())
    assert set(d) == {"mode", "row_ops", "col_ops", "seed"}
    with pytest.raises(FormatError):
        ChannelPattern.from_json("{bad")
    with pytest.raises(FormatError):
        ChannelPattern.from_json('{"mode":"smear"}')
    with pytest.raises(FormatError):
        ChannelPattern.from_json('{"mode":"insertion","row_ops":[{"index":0,"content":"012"}]}')
