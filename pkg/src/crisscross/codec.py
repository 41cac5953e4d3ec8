"""Layout, encoder and locate-then-erase decoder for n x n criss-cross indel codes.

Coordinates are 0-based and rectangles half-open.  With ``A = t * ell``,
``q = (t + 1)**2`` and ``S = r_w + q``:

* rows ``[0, A)`` hold ``t`` horizontal blocks of ``ell`` rows; each row is
  ``H_sys`` (``w`` window-coded bits), ``H_red`` (``r_w`` row-code bits) and
  the locator ``L1 = L_A``.
* columns ``[0, A)`` hold the transposed copy: ``V_sys``, ``V_red`` and
  ``T2 = T_A``.
* ``T1 = T_S`` sits under ``H_red``/``L1``; ``L2 = L_S`` sits right of ``V_red``/``T2``.
* four ``(t+1) x (t+1)`` markers border ``T1`` and ``L2``.

The layout is symmetric under transposition, so one routine locates both
columns (on the received array) and rows (on its transpose).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Mapping

import numpy as np

from . import gabidulin
from .core import BitArray2D, bits_to_int, int_to_bits, inverse_gf2
from .errors import (
    BudgetExceeded,
    EncodingFailure,
    InvalidParams,
    LengthMismatch,
    LocalizationFailure,
    NotEncodable,
    ShapeMismatch,
    SingularParitySelection,
    TooManyErasures,
    TooSmall,
    Undecodable,
)
from .indel1d import (
    HASH,
    VT,
    RowCodeConfig,
    check_values,
    clog2,
    deletion_candidates,
    deletion_embeddings,
    dereplicate,
    insertion_candidates,
    redundancy_budget,
)
from .locator import _locator_cells, build_markers, deletion_solutions, insertion_solutions, min_size
from .window import ConfusionInterval, WindowBlock, capacity, confusion_findings, is_window_valid, rank, unrank


# ---------------------------------------------------------------------------
# layout
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rect:
    r0: int
    r1: int
    c0: int
    c1: int

    @property
    def shape(self) -> tuple[int, int]:
        return (self.r1 - self.r0, self.c1 - self.c0)

    @property
    def size(self) -> int:
        return (self.r1 - self.r0) * (self.c1 - self.c0)

    @property
    def slices(self) -> tuple[slice, slice]:
        return slice(self.r0, self.r1), slice(self.c0, self.c1)

    def to_dict(self) -> dict:
        return {"rows": [self.r0, self.r1], "cols": [self.c0, self.c1]}


@dataclass(frozen=True, eq=False)
class RegionMap:
    n: int
    rects: Mapping[str, Rect]
    message_cells: tuple[int, ...]
    parity_cells: tuple[int, ...]
    interior_free: tuple[int, ...]

    def __getitem__(self, name: str) -> Rect:
        return self.rects[name]

    def coverage(self) -> np.ndarray:
        """Per-cell count of structured regions, message cells and parity cells."""
        cov = np.zeros((self.n, self.n), dtype=np.int32)
        for name, r in self.rects.items():
            if name != "corner":
                cov[r.slices] += 1
        flat = cov.reshape(-1)
        np.add.at(flat, np.array(self.message_cells, dtype=np.int64), 1)
        np.add.at(flat, np.array(self.parity_cells, dtype=np.int64), 1)
        return cov


@dataclass(frozen=True, eq=False)
class CodeParams:
    n: int
    t: int
    ell: int
    w: int
    r_w: int
    row_cfg: RowCodeConfig
    regions: RegionMap
    block_bits: int
    template: np.ndarray = field(repr=False)
    known: np.ndarray = field(repr=False)
    parity_inverse: np.ndarray = field(repr=False)

    @property
    def s_L(self) -> int:
        return self.t * self.ell

    @property
    def s_T(self) -> int:
        return self.r_w + (self.t + 1) ** 2

    @property
    def q(self) -> int:
        return (self.t + 1) ** 2

    def summary(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "ell": self.ell,
            "w": self.w,
            "r_w": self.r_w,
            "s_L": self.s_L,
            "s_T": self.s_T,
            "row_code": {"mode": self.row_cfg.mode, "payload_bits": self.row_cfg.payload_bits, "salt": self.row_cfg.salt},
            "block_bits": self.block_bits,
            "message_capacity": message_capacity(self),
            "regions": {k: v.to_dict() for k, v in self.regions.rects.items()},
            "parity_cells": len(self.regions.parity_cells),
        }


def row_code_for(w: int, t: int, r_w: int | None = None) -> RowCodeConfig:
    """Row code used inside the array: VT for t = 1, a short salted hash otherwise."""
    if t == 1:
        need = 2 * clog2(w + 1)
        return RowCodeConfig(w, 1, need if r_w is None else r_w, mode=VT)
    # per-copy hash width, capped so the t+1 copies fit the budget
    per_copy = min(t * (clog2(w) + 1) + 1, redundancy_budget(w, t) // (t + 1))
    need = (t + 1) * per_copy
    return RowCodeConfig(w, t, need if r_w is None else r_w, mode=HASH)


def default_ell(n: int, t: int) -> int:
    ell = max(1, clog2(n))
    while (t * ell) % (t + 1) or t * ell < min_size(t) or (1 << ell) <= t:
        ell += 1
    return ell


def _choose_rw(n: int, t: int, A: int, q: int) -> RowCodeConfig:
    g = t + 1
    for r in range(g, n, g):
        w = n - A - q - r
        if w < 1:
            break
        if row_code_for(w, t).r_w <= r:
            if r > -(-redundancy_budget(w, t) // g) * g:
                raise BudgetExceeded(f"r_w={r} exceeds the row-code budget at w={w}")
            return row_code_for(w, t, r)
    raise TooSmall(f"n={n} too small for t={t}: no room for the row code")


def _rects(n: int, t: int, A: int, r_w: int) -> dict[str, Rect]:
    q = (t + 1) ** 2
    S = r_w + q
    g = t + 1
    a = n - S  # first H_red column / first V_red row
    return {
        "corner": Rect(0, A, 0, A),
        "H_sys": Rect(0, A, A, a),
        "H_red": Rect(0, A, a, n - q),
        "L1": Rect(0, A, n - q, n),
        "V_sys": Rect(A, a, 0, A),
        "V_red": Rect(a, n - q, 0, A),
        "T2": Rect(n - q, n, 0, A),
        "T1": Rect(A, A + q, a, n),
        "L2": Rect(a, n, A, A + q),
        "E11": Rect(A, A + g, a - g, a),
        "E12": Rect(A + q, A + q + g, n - g, n),
        "E21": Rect(a - g, a, A, A + g),
        "E22": Rect(n - g, n, A + q, A + q + g),
    }


def _select_parity(gab: gabidulin.GabidulinCode, candidates: Iterable[int]) -> tuple[int, ...]:
    H = gab.parity_check_binary
    need = H.shape[0]
    basis: dict[int, int] = {}
    chosen: list[int] = []
    for cell in candidates:
        v = int.from_bytes(np.packbits(H[:, cell]).tobytes(), "big")
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                chosen.append(cell)
                break
        if len(chosen) == need:
            return tuple(chosen)
    raise SingularParitySelection(f"only {len(chosen)} of {need} independent parity cells found")


@lru_cache(maxsize=32)
def make_params(n: int, t: int, ell: int | None = None) -> CodeParams:
    if t < 1:
        raise InvalidParams("t must be >= 1")
    if n < 4:
        raise TooSmall(f"n={n} too small")
    if ell is None:
        ell = default_ell(n, t)
    if ell < 1 or (t * ell) % (t + 1):
        raise InvalidParams(f"t*ell = {t * ell} must be a multiple of t+1 = {t + 1}")
    if t * ell < min_size(t):
        raise InvalidParams(f"t*ell = {t * ell} below the locator minimum {min_size(t)}")
    if (1 << ell) <= t + 1:
        raise InvalidParams(f"ell={ell} too small for window coding with t={t}")
    A, q, g = t * ell, (t + 1) ** 2, t + 1
    cfg = _choose_rw(n, t, A, q)
    r_w = cfg.r_w
    w = n - A - q - r_w
    if w < t + 2 or w < q + g:
        raise TooSmall(f"w={w} leaves no room for the layout (need >= {max(t + 2, q + g)})")
    rects = _rects(n, t, A, r_w)

    paint = np.zeros((n, n), dtype=np.int32)
    for name, r in rects.items():
        paint[r.slices] += 1
    if paint.max() > 1:
        raise TooSmall("layout regions overlap")
    interior = np.zeros((n, n), dtype=bool)
    interior[A:, A:] = True
    interior &= paint == 0
    interior_free = tuple(int(i) for i in np.flatnonzero(interior.reshape(-1)))

    gab = gabidulin.build(n, t)
    # column-major scan for the parity cells
    order = sorted(interior_free, key=lambda f: (f % n, f // n))
    parity = _select_parity(gab, order)
    pset = set(parity)
    corner = [r * n + c for r in range(A) for c in range(A)]
    message_cells = tuple(sorted(corner + [f for f in interior_free if f not in pset]))

    template = np.zeros((n, n), dtype=np.uint8)
    known = np.zeros((n, n), dtype=bool)
    markers = build_markers(t)
    content = {
        "L1": _locator_cells(A, t),
        "T2": _locator_cells(A, t).T,
        "T1": _locator_cells(r_w + q, t).T,
        "L2": _locator_cells(r_w + q, t),
        "E11": markers.E11.bits,
        "E12": markers.E12.bits,
        "E21": markers.E21.bits,
        "E22": markers.E22.bits,
    }
    for name, block in content.items():
        template[rects[name].slices] = block
        known[rects[name].slices] = True
    template.setflags(write=False)
    known.setflags(write=False)

    pinv = inverse_gf2(gab.parity_check_binary[:, list(parity)])
    pinv.setflags(write=False)
    bb = int(math.floor(w * math.log2((1 << ell) - t)))
    while (1 << bb) > capacity(ell, t, w):  # guard float rounding
        bb -= 1
    regions = RegionMap(n, rects, message_cells, parity, interior_free)
    return CodeParams(n, t, ell, w, r_w, cfg, regions, bb, template, known, pinv)


def message_capacity_breakdown(params: CodeParams) -> dict[str, int]:
    t = params.t
    return {
        "H_blocks": t * params.block_bits,
        "V_blocks": t * params.block_bits,
        "corner": params.s_L**2,
        "interior": len(params.regions.interior_free) - t * params.n,
    }


def message_capacity(params: CodeParams) -> int:
    return sum(message_capacity_breakdown(params).values())


def redundancy_accounting(params: CodeParams) -> dict:
    n, t, ell, w, r_w = params.n, params.t, params.ell, params.w, params.r_w
    L = math.log2(n)
    A, q, S = params.s_L, params.q, params.s_T
    window_loss = ell * w - params.block_bits
    actual = {
        "R_G": t * n,
        "R_E": 2 * A * q + 2 * S * q,
        "R_M": 4 * (t + 1) ** 2,
        "R_HV": 2 * t * (window_loss + ell * r_w),
    }
    bounds = {
        "R_G": float(t * n),
        "R_E": (6 * t**3 + 13 * t * t + 8 * t + 1) * L,
        "R_M": float(4 * (t + 1) ** 2),
        "R_HV": 2 * (4 * t * t + t) * L * L + 2 * (5 * t * t + t) * L + 4 * t * (t + 1) ** 2,
    }
    total = n * n - message_capacity(params)
    assert total == sum(actual.values()), (total, actual)
    return {
        "actual": actual,
        "upper_bounds": bounds,
        "within_bound": {k: actual[k] <= bounds[k] + 1e-9 for k in actual},
        "total_actual": total,
        "total_upper_bound": sum(bounds.values()),
        "window_loss_per_block": window_loss,
    }


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------


def _redundancy_rows(rows: np.ndarray, cfg: RowCodeConfig) -> np.ndarray:
    vals = check_values(rows, cfg)
    P = cfg.payload_bits
    shifts = np.arange(P - 1, -1, -1)
    payload = ((np.asarray(vals, dtype=object)[:, None] >> shifts) & 1).astype(np.uint8)
    out = np.zeros((rows.shape[0], cfg.r_w), dtype=np.uint8)
    out[:, : (cfg.t + 1) * P] = np.tile(payload, (1, cfg.t + 1))
    return out


def _block(params: CodeParams, b: int) -> slice:
    return slice(b * params.ell, (b + 1) * params.ell)


def encode(params: CodeParams, gab: gabidulin.GabidulinCode, message) -> BitArray2D:
    n, t, ell, w = params.n, params.t, params.ell, params.w
    msg = np.asarray(message, dtype=np.uint8).reshape(-1)
    cap = message_capacity(params)
    if msg.size != cap:
        raise LengthMismatch(f"message must have {cap} bits, got {msg.size}")
    if gab.n != n or gab.t != t:
        raise InvalidParams("Gabidulin code does not match params")
    R = params.regions
    X = params.template.copy()
    bb = params.block_bits
    hs, vs = R["H_sys"], R["V_sys"]
    pos = 0
    for b in range(2 * t):
        value = bits_to_int(msg[pos : pos + bb])
        pos += bb
        W = unrank(value, ell, t, w).to_array().bits
        rows = _block(params, b % t)
        if b < t:
            X[rows, hs.c0 : hs.c1] = W
        else:
            X[vs.r0 : vs.r1, rows] = W.T
    X.reshape(-1)[list(R.message_cells)] = msg[pos:]
    hr, vr = R["H_red"], R["V_red"]
    X[hr.slices] = _redundancy_rows(X[hs.slices], params.row_cfg)
    X[vr.slices] = _redundancy_rows(X[vs.slices].T, params.row_cfg).T
    s = gab.syndrome(X)
    par = (params.parity_inverse.astype(np.int32) @ s.astype(np.int32)) & 1
    X.reshape(-1)[list(R.parity_cells)] = par.astype(np.uint8)
    if not gabidulin.is_codeword(gab, X):
        raise EncodingFailure("parity solve did not produce a codeword")
    return BitArray2D._wrap(X)


def extract_message(params: CodeParams, X) -> np.ndarray:
    arr = np.asarray(X, dtype=np.uint8)
    t, bb = params.t, params.block_bits
    hs, vs = params.regions["H_sys"], params.regions["V_sys"]
    parts = []
    for b in range(2 * t):
        rows = _block(params, b % t)
        W = arr[rows, hs.c0 : hs.c1] if b < t else arr[vs.r0 : vs.r1, rows].T
        value = rank(WindowBlock.from_array(W, t))
        if value >= (1 << bb):
            raise NotEncodable("window block outside the message range")
        parts.append(np.array(int_to_bits(value, bb), dtype=np.uint8))
    parts.append(arr.reshape(-1)[list(params.regions.message_cells)])
    return np.concatenate(parts)


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

FAMILIES = ("H", "V", "E", "M", "window")


@dataclass(frozen=True)
class MembershipReport:
    families: dict

    @property
    def ok(self) -> bool:
        return all(self.families.values())

    @property
    def first_failure(self) -> str | None:
        for f in FAMILIES:
            if not self.families[f]:
                return f
        return None


def _window_ok(params: CodeParams, W: np.ndarray) -> bool:
    blk = WindowBlock.from_array(W, params.t)
    if not is_window_valid(blk.columns, params.t):
        return False
    try:
        return rank(blk) < (1 << params.block_bits)
    except NotEncodable:
        return False


def validate_locator_set_membership(params: CodeParams, X) -> MembershipReport:
    arr = np.asarray(X, dtype=np.uint8)
    if arr.shape != (params.n, params.n):
        raise ShapeMismatch(f"expected {params.n}x{params.n}, got {arr.shape}")
    R = params.regions
    cfg = params.row_cfg
    hs, hr, vs, vr = R["H_sys"], R["H_red"], R["V_sys"], R["V_red"]
    fam = {}
    fam["H"] = bool(np.array_equal(_redundancy_rows(arr[hs.slices], cfg), arr[hr.slices]))
    fam["V"] = bool(np.array_equal(_redundancy_rows(arr[vs.slices].T, cfg), arr[vr.slices].T))

    def region_ok(names):
        return all(np.array_equal(arr[R[k].slices], params.template[R[k].slices]) for k in names)

    fam["E"] = region_ok(("L1", "T1", "T2", "L2"))
    fam["M"] = region_ok(("E11", "E12", "E21", "E22"))
    fam["window"] = all(
        _window_ok(params, arr[_block(params, b), hs.c0 : hs.c1]) and _window_ok(params, arr[vs.r0 : vs.r1, _block(params, b)].T)
        for b in range(params.t)
    )
    return MembershipReport(fam)


# ---------------------------------------------------------------------------
# decoding
# ---------------------------------------------------------------------------

DELETION = "deletion"
INSERTION = "insertion"


@dataclass
class DecodeReport:
    mode: str
    t_r: int
    t_c: int
    located_rows: list = field(default_factory=list)
    located_cols: list = field(default_factory=list)
    confusions: list = field(default_factory=list)
    erasures_used: int = 0
    success: bool = False

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "t_r": self.t_r,
            "t_c": self.t_c,
            "located_rows": list(self.located_rows),
            "located_cols": list(self.located_cols),
            "confusions": list(self.confusions),
            "erasures_used": self.erasures_used,
            "success": self.success,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _keys(arr: np.ndarray) -> tuple[bytes, ...]:
    return tuple(r.tobytes() for r in np.ascontiguousarray(arr, dtype=np.uint8))


class _Geometry:
    """Constants of the column-locating pass (identical for the row pass)."""

    def __init__(self, p: CodeParams) -> None:
        self.p = p
        self.n, self.t, self.ell, self.w, self.r_w = p.n, p.t, p.ell, p.w, p.r_w
        self.A = p.s_L
        self.q = p.q
        self.S = p.s_T
        self.LA = _locator_cells(self.A, self.t)
        self.LS = _locator_cells(self.S, self.t)


def _intersect_rows(rows: list[np.ndarray], red_rows: list[np.ndarray], cM: int, g: _Geometry, mode: str) -> set:
    cfg = g.p.row_cfg
    surviving = None
    for y, red in zip(rows, red_rows):
        try:
            value = dereplicate(red, cfg)
        except Undecodable:
            return set()
        yl = y.tolist()
        if mode == DELETION:
            cands = deletion_candidates(y, g.w, value, cM, cfg)
            pats = set().union(*(deletion_embeddings(x.tolist(), yl) for x in cands)) if len(cands) else set()
        else:
            cands = insertion_candidates(y, g.w, value, cM, cfg)
            pats = set().union(*(deletion_embeddings(yl, x.tolist()) for x in cands)) if len(cands) else set()
        surviving = pats if surviving is None else surviving & pats
        if not surviving:
            return set()
    return surviving or set()


def _col_deletion_options(g: _Geometry, Y: np.ndarray, tr: int, tc: int) -> set[tuple[int, ...]]:
    """Candidate sets of deleted original column indices."""
    if tc == 0:
        return {()}
    n, A, q, S, w, ell, t = g.n, g.A, g.q, g.S, g.w, g.ell, g.t
    rows_y, cols_y = Y.shape
    left: dict[int, set] = {}
    for cL in range(tc + 1):
        pats = set()
        for dB in range(tr + 1):
            band = Y[rows_y - (q - dB) :, : A - cL]
            pats |= {rp for rp, _ in deletion_solutions(g.LA, band.T)}
        if pats:
            left[cL] = pats
    right: dict[tuple[int, int], set] = {}
    for aT in range(tr + 1):
        for cR in range(tc + 1):
            pats = set()
            for dT in range(tr - aT + 1):
                band = Y[A - aT : A - aT + q - dT, cols_y - (S - cR) :]
                pats |= {tuple(n - S + i for i in rp) for rp, _ in deletion_solutions(g.LS, band.T)}
            if pats:
                right[(aT, cR)] = pats

    out: set[tuple[int, ...]] = set()
    for cL, lpats in left.items():
        for (aT, cR), rpats in right.items():
            cM = tc - cL - cR
            if cM < 0:
                continue
            for rp in rpats:
                mids = {()} if cM == 0 else _middle_deletions(g, Y, aT, cL, cM, rp)
                for lp, mp in product(lpats, mids):
                    out.add(tuple(sorted(lp + tuple(A + i for i in mp) + rp)))
    return out


def _middle_deletions(g: _Geometry, Y: np.ndarray, aT: int, cL: int, cM: int, rp: tuple[int, ...]) -> set:
    n, A, q, S, w, ell, t, r_w = g.n, g.A, g.q, g.S, g.w, g.ell, g.t, g.r_w
    cols_y = Y.shape[1]
    in_l1 = [i - (n - q) for i in rp if i >= n - q]
    band = Y[: A - aT, cols_y - (q - len(in_l1)) :]
    LA_red = np.delete(g.LA, in_l1, axis=1)
    out = set()
    for D in deletion_embeddings(_keys(LA_red), _keys(band)):
        blocks = [b for b in range(t) if not any(b * ell <= d < (b + 1) * ell for d in D)]
        if not blocks:
            continue
        b = blocks[0]
        r0 = b * ell - sum(1 for d in D if d < b * ell)
        c0 = A - cL
        erased = {i - (n - S) for i in rp if n - S <= i < n - q}
        red_cols = [o - (cL + cM) - sum(1 for i in rp if i < o) for o in range(n - S, n - q) if (o - (n - S)) not in erased]
        rows, reds = [], []
        for r in range(r0, r0 + ell):
            rows.append(Y[r, c0 : c0 + w - cM])
            red = np.full(r_w, -1, dtype=np.int64)
            red[[k for k in range(r_w) if k not in erased]] = Y[r, red_cols]
            reds.append(red)
        out |= _intersect_rows(rows, reds, cM, g, DELETION)
    return out


def _resolve(pats: set, t: int, frame_len: int):
    """Turn surviving insertion patterns into (removed received indices, erased original indices, findings)."""
    findings = confusion_findings(pats, t, strict=False)
    removed: list[int] = []
    erased: list[int] = []
    ins_before = 0
    for f in sorted(findings, key=lambda f: f if isinstance(f, int) else f.start):
        if isinstance(f, int):
            removed.append(f)
            ins_before += 1
        else:
            start = f.start - ins_before
            erased.extend(range(start, start + f.original_count))
            removed.extend(range(f.start, f.end + 1))
            ins_before += f.length - f.original_count
    if len(erased) > t or any(r >= frame_len for r in removed):
        return None
    return tuple(removed), tuple(erased), tuple(findings)


def _col_insertion_options(g: _Geometry, Y: np.ndarray, tr: int, tc: int) -> set:
    if tc == 0:
        return {((), (), ())}
    n, A, q, S, w, ell, t = g.n, g.A, g.q, g.S, g.w, g.ell, g.t
    rows_y, cols_y = Y.shape
    left: dict[int, set] = {}
    for cL in range(tc + 1):
        pats = set()
        for iB in range(tr + 1):
            band = Y[rows_y - (q + iB) :, : A + cL]
            pats |= {rp for rp, _ in insertion_solutions(g.LA, band.T)}
        if pats:
            left[cL] = pats
    right: dict[tuple[int, int], set] = {}
    for aT in range(tr + 1):
        for cR in range(tc + 1):
            pats = set()
            off = cols_y - (S + cR)
            for iT in range(tr - aT + 1):
                band = Y[A + aT : A + aT + q + iT, off:]
                pats |= {tuple(off + i for i in rp) for rp, _ in insertion_solutions(g.LS, band.T)}
            if pats:
                right[(aT, cR)] = pats

    out = set()
    for cL, lpats in left.items():
        for (aT, cR), rpats in right.items():
            cM = tc - cL - cR
            if cM < 0:
                continue
            full = set()
            for rp in rpats:
                mids = {()} if cM == 0 else _middle_insertions(g, Y, aT, cL, cM, rp)
                for lp, mp in product(lpats, mids):
                    full.add(tuple(sorted(lp + tuple(A + cL + i for i in mp) + rp)))
            if full:
                res = _resolve(full, t, cols_y)
                if res is not None:
                    out.add(res)
                # a merged window may hide a tighter explanation per right-band choice
                for rp in rpats:
                    sub = {p for p in full if set(rp) <= set(p)}
                    if sub and sub != full:
                        r2 = _resolve(sub, t, cols_y)
                        if r2 is not None:
                            out.add(r2)
    return out


def _middle_insertions(g: _Geometry, Y: np.ndarray, aT: int, cL: int, cM: int, rp: tuple[int, ...]) -> set:
    n, A, q, S, w, ell, t, r_w = g.n, g.A, g.q, g.S, g.w, g.ell, g.t, g.r_w
    cols_y = Y.shape[1]
    # inserted columns with fewer than q originals to their right sit in L1
    in_l1 = [i for k, i in enumerate(rp) if (cols_y - 1 - i) - (len(rp) - 1 - k) < q]
    l1_start = cols_y - (q + len(in_l1))
    band = np.delete(Y[: A + aT, l1_start:], [i - l1_start for i in in_l1], axis=1)
    c0 = A + cL
    red_start = c0 + w + cM
    red_cols = [c for c in range(red_start, l1_start) if c not in rp]
    if len(red_cols) != r_w:
        return set()
    out = set()
    for D in deletion_embeddings(_keys(band), _keys(g.LA)):
        keep = [r for r in range(A + aT) if r not in D]
        blocks = [b for b in range(t) if keep[(b + 1) * ell - 1] - keep[b * ell] == ell - 1]
        if not blocks:
            continue
        r0 = keep[blocks[0] * ell]
        rows = [Y[r, c0 : c0 + w + cM] for r in range(r0, r0 + ell)]
        reds = [Y[r, red_cols] for r in range(r0, r0 + ell)]
        out |= _intersect_rows(rows, reds, cM, g, INSERTION)
    return out


def _template_ok(params: CodeParams, Y: np.ndarray, keep_rows, keep_cols, row_idx, col_idx) -> bool:
    """Known locator/marker cells agree with the received cells they map to."""
    known = params.known[np.ix_(row_idx, col_idx)]
    want = params.template[np.ix_(row_idx, col_idx)]
    got = Y[np.ix_(keep_rows, keep_cols)]
    return bool(np.array_equal(got[known], want[known]))


def _verified(params: CodeParams, gab, X: np.ndarray, rows, cols):
    try:
        C = gabidulin.erasure_decode(gab, X, rows, cols)
    except (Undecodable, TooManyErasures):
        return None
    arr = C.bits
    if not validate_locator_set_membership(params, arr).ok:
        return None
    return C


def _concrete_patterns(removed, findings, axis_len) -> list[tuple[int, ...]]:
    """Exact insertion patterns consistent with findings (one choice per window)."""
    exact = [f for f in findings if isinstance(f, int)]
    windows = [f for f in findings if not isinstance(f, int)]
    choices = [list(combinations(range(f.start, f.end + 1), f.length - f.original_count)) for f in windows]
    out = []
    for pick in product(*choices):
        out.append(tuple(sorted(exact + [i for c in pick for i in c])))
    return out


def decode(params: CodeParams, gab: gabidulin.GabidulinCode, received) -> tuple[BitArray2D, np.ndarray, DecodeReport]:
    Y = np.asarray(received, dtype=np.uint8)
    n, t = params.n, params.t
    if Y.ndim != 2:
        raise ShapeMismatch("received must be two-dimensional")
    dr, dc = n - Y.shape[0], n - Y.shape[1]
    if dr >= 0 and dc >= 0:
        mode, tr, tc = DELETION, dr, dc
    elif dr <= 0 and dc <= 0:
        mode, tr, tc = INSERTION, -dr, -dc
    else:
        raise ShapeMismatch(f"shape {Y.shape} mixes growth and shrinkage")
    if tr + tc > t:
        raise ShapeMismatch(f"shape {Y.shape} implies {tr + tc} > t={t} indels")
    g = _Geometry(params)
    report = DecodeReport(mode, tr, tc)

    if tr == tc == 0:
        if not (gabidulin.is_codeword(gab, Y) and validate_locator_set_membership(params, Y).ok):
            raise LocalizationFailure("array of full size is not a codeword")
        report.success = True
        C = BitArray2D._wrap(Y.copy())
        return C, extract_message(params, C), report

    results: dict[bytes, tuple] = {}
    if mode == DELETION:
        col_opts = sorted(_col_deletion_options(g, Y, tr, tc))
        row_opts = sorted(_col_deletion_options(g, np.ascontiguousarray(Y.T), tc, tr))
        for R, C in product(row_opts, col_opts):
            keep_r = list(range(Y.shape[0]))
            keep_c = list(range(Y.shape[1]))
            ri = [i for i in range(n) if i not in R]
            ci = [j for j in range(n) if j not in C]
            if not _template_ok(params, Y, keep_r, keep_c, ri, ci):
                continue
            X = np.zeros((n, n), dtype=np.uint8)
            X[np.ix_(ri, ci)] = Y
            out = _verified(params, gab, X, R, C)
            if out is not None:
                key = out.bits.tobytes()
                if key not in results:
                    results[key] = (out, R, C, ())
    else:
        col_opts = sorted(_col_insertion_options(g, Y, tr, tc))
        row_opts = sorted(_col_insertion_options(g, np.ascontiguousarray(Y.T), tc, tr))
        for (rrem, rers, rfind), (crem, cers, cfind) in product(row_opts, col_opts):
            if len(rers) + len(cers) > t:
                continue
            keep_r = [i for i in range(Y.shape[0]) if i not in rrem]
            keep_c = [j for j in range(Y.shape[1]) if j not in crem]
            ri = [i for i in range(n) if i not in rers]
            ci = [j for j in range(n) if j not in cers]
            if len(keep_r) != len(ri) or len(keep_c) != len(ci):
                continue
            if not _template_ok(params, Y, keep_r, keep_c, ri, ci):
                continue
            X = np.zeros((n, n), dtype=np.uint8)
            X[np.ix_(ri, ci)] = Y[np.ix_(keep_r, keep_c)]
            out = _verified(params, gab, X, rers, cers)
            if out is None:
                continue
            arr = out.bits
            explained = any(
                np.array_equal(np.delete(np.delete(Y, rp, axis=0), cp, axis=1), arr)
                for rp in _concrete_patterns(rrem, rfind, Y.shape[0])
                for cp in _concrete_patterns(crem, cfind, Y.shape[1])
            )
            if not explained:
                continue
            key = arr.tobytes()
            if key not in results:
                results[key] = (out, (rrem, rers, rfind), (crem, cers, cfind), None)

    if not results:
        raise LocalizationFailure("no index assignment yields a valid codeword")
    if len(results) > 1:
        raise LocalizationFailure(f"{len(results)} distinct codewords explain the received array")
    (out, R, C, _), = results.values()
    if mode == DELETION:
        report.located_rows, report.located_cols = list(R), list(C)
        report.erasures_used = len(R) + len(C)
    else:
        (_, rers, rfind), (_, cers, cfind) = R, C
        report.located_rows = [f for f in rfind if isinstance(f, int)]
        report.located_cols = [f for f in cfind if isinstance(f, int)]
        report.confusions = [dict(axis="row", **f.to_dict()) for f in rfind if isinstance(f, ConfusionInterval)] + [
            dict(axis="col", **f.to_dict()) for f in cfind if isinstance(f, ConfusionInterval)
        ]
        report.erasures_used = len(rers) + len(cers)
    assert report.erasures_used <= t
    report.success = True
    return out, extract_message(params, out), report
