import json

import numpy as np
import pytest

from crisscross import channel, codec, gabidulin
from crisscross.channel import ChannelPattern
from crisscross.errors import InvalidParams, LengthMismatch, ShapeMismatch, TooSmall


def _msg(p, rng):
    return rng.integers(0, 2, codec.message_capacity(p), dtype=np.uint8)


def test_make_params_small_grids():
    p = codec.make_params(64, 1)
    assert (p.ell, p.w, p.r_w, p.s_L, p.s_T) == (6, 42, 12, 6, 16)
    assert p.block_bits == 251
    p2 = codec.make_params(128, 2)
    assert (p2.ell, p2.r_w, p2.w) == (9, 45, 56)
    assert p2.r_w % 3 == 0 and p2.s_L % 3 == 0


def test_make_params_errors():
    with pytest.raises(TooSmall):
        codec.make_params(16, 1)
    with pytest.raises(InvalidParams):
        codec.make_params(128, 2, ell=5)
    with pytest.raises(InvalidParams):
        codec.make_params(64, 0)


@pytest.mark.parametrize("n,t", [(64, 1), (128, 1), (128, 2), (256, 2)])
def test_layout_partition(n, t):
    p = codec.make_params(n, t)
    cov = p.regions.coverage()
    A = p.s_L
    # the corner is counted through the message cells
    assert (cov == 1).all()
    interior = set(p.regions.interior_free)
    assert set(p.regions.parity_cells) <= interior
    assert len(p.regions.parity_cells) == t * n
    for f in p.regions.interior_free:
        assert f // n >= A and f % n >= A


def test_capacity_properties():
    for n in (64, 128, 256):
        caps = []
        for t in (1, 2):
            try:
                p = codec.make_params(n, t)
            except TooSmall:
                continue
            cap = codec.message_capacity(p)
            assert n * n - cap >= t * n
            caps.append(cap)
        assert caps == sorted(caps, reverse=True)
    p = codec.make_params(64, 1)
    assert codec.message_capacity(p) == 3694


def test_accounting():
    acc = codec.redundancy_accounting(codec.make_params(64, 1))
    assert acc["actual"] == {"R_G": 64, "R_E": 176, "R_M": 16, "R_HV": 146}
    assert acc["total_actual"] == 402
    acc2 = codec.redundancy_accounting(codec.make_params(128, 2))
    assert acc2["actual"]["R_M"] == 36 and acc2["actual"]["R_G"] == 256
    assert acc2["total_actual"] <= acc2["total_upper_bound"]
    assert acc2["total_actual"] == 3212


def test_encode_membership_and_extract(code64, rng):
    p, gab = code64
    m = _msg(p, rng)
    X = codec.encode(p, gab, m)
    assert gabidulin.is_codeword(gab, X)
    rep = codec.validate_locator_set_membership(p, X)
    assert rep.ok and rep.first_failure is None
    assert np.array_equal(codec.extract_message(p, X), m)
    with pytest.raises(LengthMismatch):
        codec.encode(p, gab, m[:-1])


def test_membership_failures(code64, rng):
    p, gab = code64
    X = codec.encode(p, gab, _msg(p, rng)).bits.copy()
    L1 = p.regions["L1"]
    X[L1.r0, L1.c0] ^= 1
    rep = codec.validate_locator_set_membership(p, X)
    assert rep.families == {"H": True, "V": True, "E": False, "M": True, "window": True}
    R = rng.integers(0, 2, (64, 64))
    assert not codec.validate_locator_set_membership(p, R).ok
    with pytest.raises(ShapeMismatch):
        codec.validate_locator_set_membership(p, np.zeros((63, 64)))


def test_injective(code64, rng):
    p, gab = code64
    seen = {}
    for _ in range(20):
        m = _msg(p, rng)
        seen[codec.encode(p, gab, m).bits.tobytes()] = m.tobytes()
    assert len(seen) == 20
    m = _msg(p, rng)
    m2 = m.copy()
    m2[-1] ^= 1
    assert codec.encode(p, gab, m) != codec.encode(p, gab, m2)


def test_identity_decode(code64, rng):
    p, gab = code64
    m = _msg(p, rng)
    X = codec.encode(p, gab, m)
    C, out, rep = codec.decode(p, gab, X)
    assert C == X and np.array_equal(out, m) and rep.success


def test_shape_errors(code64):
    p, gab = code64
    with pytest.raises(ShapeMismatch):
        codec.decode(p, gab, np.zeros((62, 64)))
    with pytest.raises(ShapeMismatch):
        codec.decode(p, gab, np.zeros((63, 65)))


def test_fewer_errors_than_t(code128, rng):
    p, gab = code128
    m = _msg(p, rng)
    X = codec.encode(p, gab, m)
    for pat in (ChannelPattern("deletion", [70], []), ChannelPattern("insertion", [], [(5, rng.integers(0, 2, 128))])):
        C, out, rep = codec.decode(p, gab, channel.apply(X, pat))
        assert C == X and np.array_equal(out, m)
        assert rep.t_r + rep.t_c == 1


def test_report_json(code64, rng):
    p, gab = code64
    X = codec.encode(p, gab, _msg(p, rng))
    _, _, rep = codec.decode(p, gab, channel.apply(X, ChannelPattern("deletion", [], [30])))
    d = json.loads(rep.to_json())
    assert set(d) == {"mode", "t_r", "t_c", "located_rows", "located_cols", "confusions", "erasures_used", "success"}
    assert d["located_cols"] == [30] and d["success"] and d["erasures_used"] <= 1


def test_params_summary_serialisable():
    s = codec.make_params(64, 1).summary()
    assert json.loads(json.dumps(s))["message_capacity"] == 3694
