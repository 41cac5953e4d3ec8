"""GF(2) linear algebra, GF(2^m) arithmetic and the binary array carrier.

Field elements are plain Python ints holding polynomial-basis coefficients
(bit ``i`` is the coefficient of ``alpha**i``).  Matrices for the linear
algebra routines are anything ``numpy.asarray`` turns into a 0/1 2-D array,
including :class:`BitArray2D`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, FormatError, InvalidParams, NoSolution, ZeroInverse

TEXT_HEADER = "crisscross-array v1"


# ---------------------------------------------------------------------------
# BitArray2D
# ---------------------------------------------------------------------------


class BitArray2D:
    """Immutable rectangular binary array.

    Cells are stored unpacked as ``uint8``; the cell-level API is the
    contract, so callers never depend on the storage layout.
    """

    __slots__ = ("_bits",)

    def __init__(self, bits) -> None:
        arr = np.array(bits, dtype=np.uint8, copy=True)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-D array, got ndim={arr.ndim}")
        if arr.size and arr.max() > 1:
            raise ValueError("cells must be 0 or 1")
        arr.setflags(write=False)
        self._bits = arr

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitArray2D":
        if rows < 0 or cols < 0:
            raise DimensionMismatch("negative dimension")
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "BitArray2D":
        # trusted fast path: arr is already a fresh 0/1 uint8 matrix
        obj = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.uint8)
        arr.setflags(write=False)
        obj._bits = arr
        return obj

    @property
    def bits(self) -> np.ndarray:
        """Read-only ``uint8`` view of the cells."""
        return self._bits

    @property
    def rows(self) -> int:
        return self._bits.shape[0]

    @property
    def cols(self) -> int:
        return self._bits.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._bits.shape  # type: ignore[return-value]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._bits
        return self._bits.astype(dtype)

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(f"cell {(r, c)} outside {self.shape}")
        return int(self._bits[r, c])

    def _check_box(self, r0: int, r1: int, c0: int, c1: int) -> None:
        if not (0 <= r0 <= r1 <= self.rows and 0 <= c0 <= c1 <= self.cols):
            raise IndexError(f"region rows[{r0}:{r1}] cols[{c0}:{c1}] outside {self.shape}")

    def region(self, r0: int, r1: int, c0: int, c1: int) -> "BitArray2D":
        """Half-open sub-rectangle ``rows[r0:r1] x cols[c0:c1]``."""
        self._check_box(r0, r1, c0, c1)
        return BitArray2D._wrap(self._bits[r0:r1, c0:c1].copy())

    def with_region(self, r0: int, c0: int, block) -> "BitArray2D":
        """Copy of self with ``block`` written at top-left corner ``(r0, c0)``."""
        blk = np.asarray(block, dtype=np.uint8)
        self._check_box(r0, r0 + blk.shape[0], c0, c0 + blk.shape[1])
        out = self._bits.copy()
        out[r0 : r0 + blk.shape[0], c0 : c0 + blk.shape[1]] = blk
        return BitArray2D._wrap(out)

    def transpose(self) -> "BitArray2D":
        return BitArray2D._wrap(self._bits.T.copy())

    T = property(transpose)

    def flip(self, r: int, c: int) -> "BitArray2D":
        out = self._bits.copy()
        out[r, c] ^= 1
        return BitArray2D._wrap(out)

    def to_numpy(self) -> np.ndarray:
        return self._bits.copy()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitArray2D):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self) -> int:
        return hash((self.shape, self._bits.tobytes()))

    def __repr__(self) -> str:
        return f"BitArray2D({self.rows}x{self.cols})"

    # -- text format ----------------------------------------------------

    def to_text(self) -> str:
        lines = [TEXT_HEADER, f"{self.rows} {self.cols}"]
        lines.extend("".join("1" if v else "0" for v in row) for row in self._bits)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BitArray2D":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines or lines[0] != TEXT_HEADER:
            raise FormatError("missing 'crisscross-array v1' header")
        if len(lines) < 2:
            raise FormatError("missing dimension line")
        parts = lines[1].split(" ")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise FormatError(f"bad dimension line {lines[1]!r}")
        rows, cols = int(parts[0]), int(parts[1])
        body = lines[2:]
        if len(body) != rows:
            raise FormatError(f"expected {rows} rows, found {len(body)}")
        arr = np.zeros((rows, cols), dtype=np.uint8)
        for i, line in enumerate(body):
            if len(line) != cols or set(line) - {"0", "1"}:
                raise FormatError(f"row {i} is not {cols} characters of 0/1")
            arr[i] = np.frombuffer(line.encode(), dtype=np.uint8) - ord("0")
        return cls._wrap(arr)

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_text().encode())

    @classmethod
    def load(cls, path: str | Path) -> "BitArray2D":
        try:
            text = Path(path).read_bytes().decode("ascii")
        except UnicodeDecodeError as exc:
            raise FormatError("array file is not ASCII") from exc
        return cls.from_text(text)


# ---------------------------------------------------------------------------
# GF(2)[x] helpers on int-encoded polynomials
# ---------------------------------------------------------------------------


def _pdeg(a: int) -> int:
    return a.bit_length() - 1


def _pmod(a: int, m: int) -> int:
    dm = _pdeg(m)
    while a and _pdeg(a) >= dm:
        a ^= m << (_pdeg(a) - dm)
    return a


_SPREAD = [int(bin(i)[2:].replace("", "0")[:-1] or "0", 2) for i in range(256)]


def _clmul(a: int, b: int) -> int:
    if a.bit_count() < b.bit_count():
        a, b = b, a
    r, i = 0, 0
    while b:
        if b & 1:
            r ^= a << i
        b >>= 1
        i += 1
    return r


def _psquare(a: int) -> int:
    r, shift = 0, 0
    while a:
        r |= _SPREAD[a & 0xFF] << shift
        a >>= 8
        shift += 16
    return r


@lru_cache(maxsize=None)
def _tail_terms(m: int) -> tuple[int, tuple[int, ...]]:
    d = _pdeg(m)
    return d, tuple(i for i in range(d) if (m >> i) & 1)


def _reduce(a: int, m: int) -> int:
    d, terms = _tail_terms(m)
    mask = (1 << d) - 1
    while a >> d:
        high = a >> d
        a &= mask
        for i in terms:
            a ^= high << i
    return a


def _pmulmod(a: int, b: int, m: int) -> int:
    if a == b:
        return _reduce(_psquare(a), m)
    return _reduce(_clmul(a, b), m)


def _pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pmod(a, b)
    return a


def _prime_factors(m: int) -> list[int]:
    out, p = [], 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def is_irreducible(poly: int) -> bool:
    """Rabin's irreducibility test for a bit-encoded polynomial over GF(2)."""
    m = _pdeg(poly)
    if m < 1:
        return False
    if m == 1:
        return True
    if not poly & 1:
        return False

    def x_pow2k(k: int) -> int:
        r = 0b10 if m > 1 else _pmod(0b10, poly)
        for _ in range(k):
            r = _pmulmod(r, r, poly)
        return r

    if x_pow2k(m) != 0b10:
        return False
    return all(_pgcd(poly, x_pow2k(m // p) ^ 0b10) == 1 for p in _prime_factors(m))


@lru_cache(maxsize=None)
def default_modulus(m: int) -> int:
    """Lowest-weight irreducible of degree ``m``: first trinomial, else pentanomial."""
    if m < 1:
        raise InvalidParams("field degree must be >= 1")
    if m == 1:
        return 0b11
    top = 1 << m
    for k in range(1, m):
        cand = top | (1 << k) | 1
        if is_irreducible(cand):
            return cand
    for a in range(3, m):
        for b in range(2, a):
            for c in range(1, b):
                cand = top | (1 << a) | (1 << b) | (1 << c) | 1
                if is_irreducible(cand):
                    return cand
    raise InvalidParams(f"no irreducible trinomial/pentanomial of degree {m}")  # pragma: no cover


@dataclass(frozen=True)
class FieldContext:
    """GF(2^m) in polynomial basis, reduced modulo ``modulus``."""

    m: int
    modulus: int

    def __post_init__(self) -> None:
        if self.m < 1 or _pdeg(self.modulus) != self.m:
            raise InvalidParams(f"modulus degree must equal m={self.m}")
        if not is_irreducible(self.modulus):
            raise InvalidParams(f"modulus {self.modulus:#x} is reducible")

    @classmethod
    def default(cls, m: int) -> "FieldContext":
        return _default_ctx(m)

    @property
    def size(self) -> int:
        return 1 << self.m

    def check(self, a: int) -> int:
        if not 0 <= a < (1 << self.m):
            raise ValueError(f"{a} is not an element of GF(2^{self.m})")
        return a


@lru_cache(maxsize=None)
def _default_ctx(m: int) -> FieldContext:
    return FieldContext(m, default_modulus(m))


def gf_mul(a: int, b: int, ctx: FieldContext) -> int:
    return _pmulmod(ctx.check(a), ctx.check(b), ctx.modulus)


def gf_pow(a: int, e: int, ctx: FieldContext) -> int:
    result, base = 1, ctx.check(a)
    if e < 0:
        base, e = gf_inv(base, ctx), -e
    while e:
        if e & 1:
            result = _pmulmod(result, base, ctx.modulus)
        base = _pmulmod(base, base, ctx.modulus)
        e >>= 1
    return result


def gf_inv(a: int, ctx: FieldContext) -> int:
    if ctx.check(a) == 0:
        raise ZeroInverse("0 has no inverse")
    # a^(2^m - 2)
    return gf_pow(a, (1 << ctx.m) - 2, ctx)


def frobenius(a: int, k: int, ctx: FieldContext) -> int:
    """``a ** (2 ** k)``; ``k`` is reduced modulo ``m``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    a = ctx.check(a)
    for _ in range(k % ctx.m):
        a = _pmulmod(a, a, ctx.modulus)
    return a


def gf_trace(a: int, ctx: FieldContext) -> int:
    s, x = 0, ctx.check(a)
    for _ in range(ctx.m):
        s ^= x
        x = _pmulmod(x, x, ctx.modulus)
    return s  # lies in GF(2): 0 or 1


# ---------------------------------------------------------------------------
# GF(2) linear algebra on int-bitset rows
# ---------------------------------------------------------------------------


def _as_matrix(M) -> np.ndarray:
    arr = np.asarray(M, dtype=np.uint8)
    if arr.ndim != 2:
        raise DimensionMismatch("expected a 2-D matrix")
    return arr


def rows_to_ints(M) -> list[int]:
    """Row ``r`` becomes an int with bit ``c`` equal to ``M[r, c]``."""
    arr = _as_matrix(M)
    if arr.shape[1] == 0:
        return [0] * arr.shape[0]
    packed = np.packbits(arr, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def ints_to_bits(value: int, width: int) -> np.ndarray:
    nbytes = (width + 7) // 8
    raw = np.frombuffer(value.to_bytes(max(nbytes, 1), "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:width].copy()


def rank_gf2(M) -> int:
    rows = rows_to_ints(M)
    rank = 0
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in pivots:
                r ^= pivots[top]
            else:
                pivots[top] = r
                rank += 1
                break
    return rank


def solve_gf2(A, b: Sequence[int] | np.ndarray) -> np.ndarray:
    """Solve ``A x = b`` over GF(2).

    Pivot columns are taken left to right; within a column the lowest-index
    remaining row with a 1 is the pivot.  Free variables are set to 0.
    Raises :class:`NoSolution` when the system is inconsistent.
    """
    arr = _as_matrix(A)
    rhs = np.asarray(b, dtype=np.uint8).reshape(-1)
    nrows, ncols = arr.shape
    if rhs.shape[0] != nrows:
        raise DimensionMismatch(f"A has {nrows} rows but b has length {rhs.shape[0]}")
    rows = rows_to_ints(arr)
    bbit = 1 << ncols
    rows = [r | (bbit if v else 0) for r, v in zip(rows, rhs)]
    pivot_cols: list[int] = []
    prow = 0
    for c in range(ncols):
        mask = 1 << c
        sel = next((i for i in range(prow, nrows) if rows[i] & mask), None)
        if sel is None:
            continue
        rows[prow], rows[sel] = rows[sel], rows[prow]
        pr = rows[prow]
        for i in range(nrows):
            if i != prow and rows[i] & mask:
                rows[i] ^= pr
        pivot_cols.append(c)
        prow += 1
        if prow == nrows:
            break
    for i in range(prow, nrows):
        if rows[i] == bbit:
            raise NoSolution("inconsistent linear system over GF(2)")
    x = np.zeros(ncols, dtype=np.uint8)
    for i, c in enumerate(pivot_cols):
        x[c] = 1 if rows[i] & bbit else 0
    return x


def inverse_gf2(A) -> np.ndarray:
    """Inverse of a square GF(2) matrix; :class:`NoSolution` if singular."""
    arr = _as_matrix(A)
    n = arr.shape[0]
    if arr.shape[1] != n:
        raise DimensionMismatch("matrix is not square")
    rows = rows_to_ints(arr)
    rows = [r | (1 << (n + i)) for i, r in enumerate(rows)]
    for c in range(n):
        mask = 1 << c
        sel = next((i for i in range(c, n) if rows[i] & mask), None)
        if sel is None:
            raise NoSolution("matrix is singular")
        rows[c], rows[sel] = rows[sel], rows[c]
        pr = rows[c]
        for i in range(n):
            if i != c and rows[i] & mask:
                rows[i] ^= pr
    return np.array([ints_to_bits(r >> n, n) for r in rows], dtype=np.uint8).reshape(n, n)


def matvec_gf2(A, x) -> np.ndarray:
    arr = _as_matrix(A)
    vec = np.asarray(x, dtype=np.uint8).reshape(-1)
    if arr.shape[1] != vec.shape[0]:
        raise DimensionMismatch("matrix/vector size mismatch")
    idx = np.flatnonzero(vec)
    if idx.size == 0:
        return np.zeros(arr.shape[0], dtype=np.uint8)
    return (np.bitwise_xor.reduce(arr[:, idx], axis=1)).astype(np.uint8)


def bits_to_int(bits: Iterable[int]) -> int:
    """Big-endian: first bit is the most significant."""
    v = 0
    for b in bits:
        v = (v << 1) | (1 if b else 0)
    return v


def int_to_bits(value: int, width: int) -> list[int]:
    if value < 0 or value >> width:
        raise ValueError(f"{value} does not fit in {width} bits")
    return [(value >> (width - 1 - i)) & 1 for i in range(width)]
