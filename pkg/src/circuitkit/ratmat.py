"""Exact rational vectors, matrices, and the elimination kernels.

Everything downstream (subspaces, imbalance measures, the simplex solver)
works over `fractions.Fraction`.  Floating point appears only in the two
explicitly inexact estimators in `imbalance` (spectral norm, angle minimum).

Vectors are plain tuples of Fractions; matrices are immutable row tuples.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DeskScaleExceeded,
    DimensionMismatch,
    NonIntegerMatrix,
    NotSquare,
    SingularBasis,
    ZeroVector,
)

Vec = tuple  # tuple[Fraction, ...]

MAX_COLS_ENV = "CIRCUITKIT_MAX_COLS"
DEFAULT_MAX_COLS = 12


def max_enum_cols() -> int:
    raw = os.environ.get(MAX_COLS_ENV)
    if raw is None:
        return DEFAULT_MAX_COLS
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_MAX_COLS
    return value if value > 0 else DEFAULT_MAX_COLS


def check_desk_scale(width: int, what: str = "enumeration"):
    cap = max_enum_cols()
    if width > cap:
        raise DeskScaleExceeded(
            f"{what} over {width} columns exceeds the cap of {cap} "
            f"(raise {MAX_COLS_ENV} to override)"
        )


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot build an exact rational from {type(x).__name__}")


def vec(entries: Iterable) -> Vec:
    return tuple(as_fraction(e) for e in entries)


def vec_add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vec_sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vec_scale(a: Vec, s) -> Vec:
    s = as_fraction(s)
    return tuple(s * x for x in a)


def vec_dot(a: Vec, b: Vec) -> Fraction:
    return sum((x * y for x, y in zip(a, b, strict=True)), Fraction(0))


def vec_zero(n: int) -> Vec:
    return (Fraction(0),) * n


def norm1(a: Vec) -> Fraction:
    return sum((abs(x) for x in a), Fraction(0))


def norminf(a: Vec) -> Fraction:
    return max((abs(x) for x in a), default=Fraction(0))


def norm2_sq(a: Vec) -> Fraction:
    return sum((x * x for x in a), Fraction(0))


def pos_part(a: Vec) -> Vec:
    return tuple(x if x > 0 else Fraction(0) for x in a)


def neg_part(a: Vec) -> Vec:
    """Componentwise max(-a, 0); a = pos_part(a) - neg_part(a)."""
    return tuple(-x if x < 0 else Fraction(0) for x in a)


def support(a: Vec) -> tuple[int, ...]:
    return tuple(i for i, x in enumerate(a) if x != 0)


def is_conformal(g: Vec, z: Vec) -> bool:
    """True when g lies in the same orthant as z with supp(g) inside supp(z)."""
    return all(gi == 0 or gi * zi > 0 for gi, zi in zip(g, z, strict=True))


@dataclass(frozen=True)
class RatMatrix:
    """Immutable dense matrix over Fraction.  Zero-row matrices keep `cols`."""

    data: tuple
    cols: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        data = tuple(vec(r) for r in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise DimensionMismatch("ragged rows")
            if cols is not None and cols != width:
                raise DimensionMismatch("cols does not match row width")
            cols = width
        elif cols is None:
            raise DimensionMismatch("zero-row matrix needs an explicit column count")
        return cls(data=data, cols=cols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls(
            data=tuple(
                tuple(one if i == j else zero for j in range(n)) for i in range(n)
            ),
            cols=n,
        )

    @classmethod
    def zeros(cls, m: int, n: int) -> "RatMatrix":
        return cls(data=tuple(vec_zero(n) for _ in range(m)), cols=n)

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entry(self, i: int, j: int) -> Fraction:
        return self.data[i][j]

    def row(self, i: int) -> Vec:
        return self.data[i]

    def col(self, j: int) -> Vec:
        return tuple(r[j] for r in self.data)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            data=tuple(self.col(j) for j in range(self.cols)), cols=self.rows
        )

    def matvec(self, v: Vec) -> Vec:
        if len(v) != self.cols:
            raise DimensionMismatch("matvec width mismatch")
        return tuple(vec_dot(r, v) for r in self.data)

    def vecmat(self, v: Vec) -> Vec:
        if len(v) != self.rows:
            raise DimensionMismatch("vecmat height mismatch")
        return tuple(
            sum((v[i] * self.data[i][j] for i in range(self.rows)), Fraction(0))
            for j in range(self.cols)
        )

    def mul(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch("matrix product shape mismatch")
        ot = other.transpose()
        return RatMatrix(
            data=tuple(tuple(vec_dot(r, c) for c in ot.data) for r in self.data),
            cols=other.cols,
        )

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix(
            data=tuple(tuple(self.data[i][j] for j in col_idx) for i in row_idx),
            cols=len(col_idx),
        )

    def take_cols(self, col_idx: Sequence[int]) -> "RatMatrix":
        return self.submatrix(range(self.rows), col_idx)

    def vstack(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.cols:
            raise DimensionMismatch("vstack width mismatch")
        return RatMatrix(data=self.data + other.data, cols=self.cols)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.data for x in r)

    def to_int_rows(self) -> list[list[int]]:
        return [[int(x) for x in r] for r in self.data]


def _rref_rows(rows: list[list[Fraction]], ncols: int):
    """In-place RREF; returns (rank, pivot column list)."""
    pivots = []
    r = 0
    for j in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][j] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][j]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][j] != 0:
                f = rows[i][j]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(j)
        r += 1
        if r == len(rows):
            break
    return r, pivots


def rref(M: RatMatrix):
    """Reduced row echelon form.  Returns (rank, pivot_cols, R)."""
    rows = [list(r) for r in M.data]
    rank_, pivots = _rref_rows(rows, M.cols)
    return rank_, tuple(pivots), RatMatrix.from_rows(rows, cols=M.cols)


def rref_nonzero(M: RatMatrix) -> RatMatrix:
    """RREF with zero rows dropped: a canonical basis of the row space."""
    rank_, _, R = rref(M)
    return RatMatrix(data=R.data[:rank_], cols=M.cols)


def rank(M: RatMatrix) -> int:
    return rref(M)[0]


def rref_kernel(M: RatMatrix):
    """RREF plus a kernel basis.

    Returns (rank, pivot_cols, kernel_basis) where the rows of kernel_basis
    span {x : Mx = 0}.  The basis is the standard one: for each free column
    f the vector with 1 at f and minus the reduced column on the pivots.
    """
    rank_, pivots, R = rref(M)
    pivot_set = set(pivots)
    free = [j for j in range(M.cols) if j not in pivot_set]
    basis_rows = []
    for f in free:
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R.entry(i, f)
        basis_rows.append(v)
    return rank_, tuple(pivots), RatMatrix.from_rows(basis_rows, cols=M.cols)


def solve_linear(A: RatMatrix, b: Vec):
    """One exact solution of Ax = b, or None when inconsistent."""
    if len(b) != A.rows:
        raise DimensionMismatch("rhs height mismatch")
    aug_rows = [list(r) + [bb] for r, bb in zip(A.data, b)]
    _, pivots = _rref_rows(aug_rows, A.cols + 1)
    if A.cols in pivots:
        return None
    x = [Fraction(0)] * A.cols
    for i, p in enumerate(pivots):
        x[p] = aug_rows[i][A.cols]
    return tuple(x)


def invert(M: RatMatrix) -> RatMatrix:
    if M.rows != M.cols:
        raise NotSquare("inverse needs a square matrix")
    n = M.rows
    aug = [list(r) + list(RatMatrix.identity(n).row(i)) for i, r in enumerate(M.data)]
    rank_, pivots = _rref_rows(aug, 2 * n)
    if rank_ < n or list(pivots[:n]) != list(range(n)):
        raise SingularBasis("matrix is singular")
    return RatMatrix.from_rows([row[n:] for row in aug], cols=n)


def basis_form(A: RatMatrix, basis: Sequence[int]) -> RatMatrix:
    """A_B^{-1} A for the column subset `basis` (must be a nonsingular m x m block)."""
    basis = list(basis)
    if len(basis) != A.rows:
        raise SingularBasis(f"basis needs exactly {A.rows} columns, got {len(basis)}")
    A_B = A.take_cols(basis)
    try:
        inv = invert(A_B)
    except NotSquare as exc:  # pragma: no cover - guarded above
        raise SingularBasis(str(exc)) from exc
    return inv.mul(A)


def _int_bareiss(rows: list[list[int]]) -> int:
    """Fraction-free Bareiss elimination on an integer matrix; returns det."""
    n = len(rows)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if swap is None:
                return 0
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) // prev
            rows[i][k] = 0
        prev = rows[k][k]
    return sign * rows[n - 1][n - 1]


def bareiss_det(M: RatMatrix) -> Fraction:
    """Exact determinant via Bareiss after clearing row denominators."""
    if M.rows != M.cols:
        raise NotSquare("determinant needs a square matrix")
    if M.rows == 0:
        return Fraction(1)
    scale = Fraction(1)
    int_rows = []
    for r in M.data:
        den = math.lcm(*(x.denominator for x in r))
        scale *= den
        int_rows.append([int(x * den) for x in r])
    return Fraction(_int_bareiss(int_rows), 1) / scale


@dataclass(frozen=True)
class SubdetStats:
    """Largest absolute subdeterminant and the lcm of all nonzero ones."""

    delta_max: Fraction
    delta_lcm: int
    witness_max: tuple  # (row index tuple, col index tuple)


def subdet_stats(A: RatMatrix) -> SubdetStats:
    """Exhaustive statistics over every square submatrix (desk scale only)."""
    check_desk_scale(A.cols, "subdeterminant enumeration")
    if not A.is_integral():
        # The lcm statistic is only meaningful for integer matrices.
        raise NonIntegerMatrix("subdeterminant statistics need an integer matrix")
    best = Fraction(0)
    witness = ((), ())
    acc_lcm = 1
    for k in range(1, min(A.rows, A.cols) + 1):
        for ri in itertools.combinations(range(A.rows), k):
            for ci in itertools.combinations(range(A.cols), k):
                d = bareiss_det(A.submatrix(ri, ci))
                if d == 0:
                    continue
                ad = abs(d)
                acc_lcm = math.lcm(acc_lcm, int(ad))
                if ad > best:
                    best = ad
                    witness = (ri, ci)
    return SubdetStats(delta_max=best, delta_lcm=acc_lcm, witness_max=witness)


def integer_normalize(v: Vec):
    """Scale a nonzero rational vector to a coprime integer vector.

    Returns (g, scale) with v = scale * g, g integer entries with gcd 1,
    and the first nonzero entry of g positive.
    """
    v = vec(v)
    if all(x == 0 for x in v):
        raise ZeroVector("cannot normalize the zero vector")
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x != 0)
    flip = -1 if first < 0 else 1
    ints = [flip * x for x in ints]
    scale = Fraction(flip * g, den)
    return tuple(ints), scale


def int_nth_root(x: int, n: int):
    """Floor of the n-th root of a nonnegative integer, plus exactness flag."""
    if x < 0 or n < 1:
        raise ValueError("int_nth_root needs x >= 0, n >= 1")
    if x in (0, 1) or n == 1:
        return x, True
    r = int(round(x ** (1.0 / n)))
    while r > 0 and r**n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r, r**n == x


def fraction_nth_root(q: Fraction, n: int):
    """Exact n-th root of a positive rational when it exists, else None."""
    if q <= 0:
        raise ValueError("fraction_nth_root needs a positive rational")
    rn, okn = int_nth_root(q.numerator, n)
    rd, okd = int_nth_root(q.denominator, n)
    if okn and okd:
        return Fraction(rn, rd)
    return None
