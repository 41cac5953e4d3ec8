"""Gabidulin rank-metric code over GF(2^n), handled as binary n x n arrays.

Column ``j`` of an array is the field element ``c_j`` with row ``b`` holding
the coefficient of ``alpha**b``.  Evaluation points are the polynomial basis
``alpha**0 .. alpha**(n-1)``.  The parity check uses the trace-dual basis:
if ``g*`` is dual to the evaluation points, then ``h_j = (g*_j)^(2^(n-t))``
makes ``sum_j h_j^(2^i) c_j = 0`` (``i < t``) hold for every codeword.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .core import (
    BitArray2D,
    FieldContext,
    _pmulmod,
    frobenius,
    gf_trace,
    ints_to_bits,
    inverse_gf2,
    solve_gf2,
)
from .errors import DimensionMismatch, InvalidParams, LengthMismatch, NoSolution, TooManyErasures, Undecodable


@dataclass(frozen=True, eq=False)
class GabidulinCode:
    n: int
    t: int
    ctx: FieldContext
    eval_points: tuple[int, ...]
    parity_check_binary: np.ndarray = field(repr=False)
    # rows of H^T, contiguous, for fast syndrome accumulation
    _h_cols: np.ndarray = field(repr=False)
    _sys_inverse: np.ndarray = field(repr=False)

    @property
    def k(self) -> int:
        return self.n - self.t

    @property
    def message_bits(self) -> int:
        return self.k * self.n

    def syndrome(self, X) -> np.ndarray:
        arr = np.asarray(X, dtype=np.uint8)
        if arr.shape != (self.n, self.n):
            raise DimensionMismatch(f"expected {self.n}x{self.n}, got {arr.shape}")
        return _accumulate(self._h_cols, arr.reshape(-1))


def _accumulate(h_cols: np.ndarray, vec: np.ndarray) -> np.ndarray:
    idx = np.flatnonzero(vec)
    if idx.size == 0:
        return np.zeros(h_cols.shape[1], dtype=np.uint8)
    return np.bitwise_xor.reduce(h_cols[idx], axis=0)


def _times_alpha(x: int, ctx: FieldContext) -> int:
    x <<= 1
    if x >> ctx.m:
        x ^= ctx.modulus
    return x


def dual_basis(ctx: FieldContext) -> list[int]:
    """Trace-dual of the polynomial basis: ``Tr(alpha^i * d_j) = [i == j]``."""
    n = ctx.m
    tr_basis = 0
    for b in range(n):
        tr_basis |= gf_trace(1 << b, ctx) << b
    powers, x = [], 1
    for _ in range(2 * n - 1):
        powers.append(x)
        x = _times_alpha(x, ctx)
    tmat = np.array(
        [[(powers[a + b] & tr_basis).bit_count() & 1 for b in range(n)] for a in range(n)],
        dtype=np.uint8,
    )
    dmat = inverse_gf2(tmat)
    return [int(sum(int(dmat[j, b]) << b for b in range(n))) for j in range(n)]


@lru_cache(maxsize=16)
def build(n: int, t: int, ctx: FieldContext | None = None) -> GabidulinCode:
    if not 1 <= t < n:
        raise InvalidParams(f"need 1 <= t < n, got n={n}, t={t}")
    ctx = ctx or FieldContext.default(n)
    if ctx.m != n:
        raise InvalidParams(f"field degree {ctx.m} must equal n={n}")
    k = n - t
    dual = dual_basis(ctx)
    h = [frobenius(d, k, ctx) for d in dual]

    H = np.zeros((t * n, n * n), dtype=np.uint8)
    for i in range(t):
        for j in range(n):
            beta = frobenius(h[j], i, ctx)
            cols = np.empty((n, n), dtype=np.uint8)
            p = beta
            for b in range(n):
                cols[:, b] = ints_to_bits(p, n)
                p = _times_alpha(p, ctx)
            # cell (b, j) sits at flat index b*n + j
            H[i * n : (i + 1) * n, j::n] = cols
    H.setflags(write=False)
    h_cols = np.ascontiguousarray(H.T)
    h_cols.setflags(write=False)

    parity_cells = [b * n + j for j in range(k, n) for b in range(n)]
    sys_inv = inverse_gf2(H[:, parity_cells])
    sys_inv.setflags(write=False)
    return GabidulinCode(
        n=n,
        t=t,
        ctx=ctx,
        eval_points=tuple(1 << j for j in range(n)),
        parity_check_binary=H,
        _h_cols=h_cols,
        _sys_inverse=sys_inv,
    )


def encode(code: GabidulinCode, message: Sequence[int] | np.ndarray) -> BitArray2D:
    """Systematic encoding: message fills columns ``0 .. n-t-1`` column by column."""
    n, k = code.n, code.k
    msg = np.asarray(message, dtype=np.uint8).reshape(-1)
    if msg.size != k * n:
        raise LengthMismatch(f"message must have {k * n} bits, got {msg.size}")
    X = np.zeros((n, n), dtype=np.uint8)
    X[:, :k] = msg.reshape(k, n).T
    s = _accumulate(code._h_cols, X.reshape(-1))
    par = (code._sys_inverse.astype(np.int32) @ s.astype(np.int32)) & 1
    X[:, k:] = par.astype(np.uint8).reshape(code.t, n).T
    return BitArray2D._wrap(X)


def message_of(code: GabidulinCode, X) -> np.ndarray:
    arr = np.asarray(X, dtype=np.uint8)
    return arr[:, : code.k].T.reshape(-1).copy()


def is_codeword(code: GabidulinCode, X) -> bool:
    return not code.syndrome(X).any()


def erasure_decode(
    code: GabidulinCode,
    X_masked,
    erased_rows: Iterable[int],
    erased_cols: Iterable[int],
) -> BitArray2D:
    """Fill erased rows/columns so the result is a codeword.

    Values in erased cells of ``X_masked`` are ignored.
    """
    n = code.n
    arr = np.array(X_masked, dtype=np.uint8)
    if arr.shape != (n, n):
        raise DimensionMismatch(f"expected {n}x{n}, got {arr.shape}")
    rows = sorted(set(erased_rows))
    cols = sorted(set(erased_cols))
    if any(not 0 <= i < n for i in rows + cols):
        raise IndexError("erasure index out of range")
    if len(rows) + len(cols) > code.t:
        raise TooManyErasures(f"{len(rows)} rows + {len(cols)} cols > t={code.t}")
    mask = np.zeros((n, n), dtype=bool)
    mask[rows, :] = True
    mask[:, cols] = True
    unknown = np.flatnonzero(mask.reshape(-1))
    if unknown.size == 0:
        if not is_codeword(code, arr):
            raise Undecodable("no erasures and the array is not a codeword")
        return BitArray2D._wrap(arr)
    assert unknown.size <= code.t * n
    arr[mask] = 0
    rhs = _accumulate(code._h_cols, arr.reshape(-1))
    A = code.parity_check_binary[:, unknown]
    try:
        x = solve_gf2(A, rhs)
    except NoSolution as exc:
        raise Undecodable("unerased cells agree with no codeword") from exc
    flat = arr.reshape(-1)
    flat[unknown] = x
    return BitArray2D._wrap(flat.reshape(n, n))


def evaluate_linearized(coeffs: Sequence[int], points: Sequence[int], ctx: FieldContext) -> list[int]:
    """``f(x) = sum_i coeffs[i] * x^(2^i)`` at each point."""
    out = []
    for x in points:
        acc, xp = 0, x
        for c in coeffs:
            acc ^= _pmulmod(c, xp, ctx.modulus)
            xp = _pmulmod(xp, xp, ctx.modulus)
        out.append(acc)
    return out


def column_array(values: Sequence[int], n: int) -> BitArray2D:
    """Binary array whose column ``j`` expands field element ``values[j]``."""
    return BitArray2D._wrap(np.stack([ints_to_bits(v, n) for v in values], axis=1))
