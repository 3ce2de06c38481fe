"""Dense linear algebra over exact rationals or tolerance-aware floats.

Every certificate in this package bottoms out in a rank or nullspace
computation, so the kernel supports two scalar realizations behind one
elimination routine:

* exact mode -- ``fractions.Fraction`` entries (arbitrary-precision, no
  rounding; results are certificates, not estimates);
* float mode -- ``float`` entries with the scale-invariant zero test
  ``|x| <= tol * max initial |entry|``.

Matrices are immutable values; every operation returns a new ``Mat``.
``vec`` follows column-stacking order: ``vec(A)[c*m + r] = A[r, c]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import FormatError, ShapeError, SingularMatrixError

Scalar = Fraction | float

#: Default comparison tolerance for float-mode zero tests.
DEFAULT_TOL = 1e-9


def _coerce_exact(x) -> Fraction:
    if isinstance(x, float):
        raise FormatError("exact matrices cannot be built from floats")
    return Fraction(x)


@dataclass(frozen=True)
class Mat:
    """Immutable dense matrix with uniformly exact or float entries."""

    rows: int
    cols: int
    entries: tuple
    exact: bool

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rows(rows: Iterable[Iterable], exact: bool) -> "Mat":
        conv = _coerce_exact if exact else float
        data = tuple(tuple(conv(x) for x in row) for row in rows)
        m = len(data)
        n = len(data[0]) if m else 0
        if any(len(row) != n for row in data):
            raise ShapeError("ragged rows")
        return Mat(m, n, data, exact)

    @staticmethod
    def exact_matrix(rows: Iterable[Iterable]) -> "Mat":
        """Build an exact matrix from ints, ``Fraction``s, or ``'p/q'`` strings."""
        return Mat.from_rows(rows, exact=True)

    @staticmethod
    def float_matrix(rows: Iterable[Iterable]) -> "Mat":
        return Mat.from_rows(rows, exact=False)

    @staticmethod
    def zeros(m: int, n: int, exact: bool = True) -> "Mat":
        zero = Fraction(0) if exact else 0.0
        return Mat(m, n, tuple((zero,) * n for _ in range(m)), exact)

    @staticmethod
    def identity(n: int, exact: bool = True) -> "Mat":
        one = Fraction(1) if exact else 1.0
        zero = Fraction(0) if exact else 0.0
        return Mat(n, n, tuple(tuple(one if i == j else zero for j in range(n))
                               for i in range(n)), exact)

    @staticmethod
    def from_numpy(arr) -> "Mat":
        return Mat.float_matrix([[float(x) for x in row] for row in arr])

    # -- basic accessors ----------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, key: tuple[int, int]) -> Scalar:
        i, j = key
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def col(self, j: int) -> tuple:
        return tuple(row[j] for row in self.entries)

    @property
    def T(self) -> "Mat":
        return Mat(self.cols, self.rows,
                   tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)),
                   self.exact)

    def take_rows(self, indices: Sequence[int]) -> "Mat":
        return Mat(len(indices), self.cols,
                   tuple(self.entries[i] for i in indices), self.exact)

    # -- arithmetic ----------------------------------------------------

    def _zip(self, other: "Mat", op) -> "Mat":
        if self.shape != other.shape or self.exact != other.exact:
            raise ShapeError("operands must share shape and scalar kind")
        return Mat(self.rows, self.cols,
                   tuple(tuple(op(a, b) for a, b in zip(ra, rb))
                         for ra, rb in zip(self.entries, other.entries)), self.exact)

    def __add__(self, other: "Mat") -> "Mat":
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: "Mat") -> "Mat":
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self) -> "Mat":
        return self.scale(-1)

    def scale(self, c) -> "Mat":
        c = Fraction(c) if self.exact else float(c)
        return Mat(self.rows, self.cols,
                   tuple(tuple(c * x for x in row) for row in self.entries), self.exact)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        if self.exact != other.exact:
            raise ShapeError("cannot mix exact and float matrices")
        bt = other.T.entries
        data = tuple(tuple(sum(a * b for a, b in zip(row, colv)) for colv in bt)
                     for row in self.entries)
        if self.rows and not other.cols:
            data = tuple(() for _ in range(self.rows))
        return Mat(self.rows, other.cols, data, self.exact)

    def matvec(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ShapeError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    # -- conversions and norms ------------------------------------------

    def to_float(self) -> "Mat":
        if not self.exact:
            return self
        return Mat(self.rows, self.cols,
                   tuple(tuple(float(x) for x in row) for row in self.entries), False)

    def to_numpy(self):
        import numpy as np

        return np.array([[float(x) for x in row] for row in self.entries], dtype=float)

    def max_abs(self) -> Scalar:
        best = Fraction(0) if self.exact else 0.0
        for row in self.entries:
            for x in row:
                if abs(x) > best:
                    best = abs(x)
        return best


# -- zero tests ---------------------------------------------------------


def is_zero(x: Scalar, tol: float = DEFAULT_TOL) -> bool:
    """Kind-aware zero test: exact equality for ``Fraction``, ``|x| <= tol`` else."""
    if isinstance(x, Fraction):
        return x == 0
    return abs(x) <= tol


def nonzero_positions(M: Mat, tol: float = DEFAULT_TOL) -> list[tuple[int, int]]:
    """Support of ``M`` in row-major order."""
    return [(i, j) for i in range(M.rows) for j in range(M.cols)
            if not is_zero(M[i, j], tol)]


# -- elimination kernel ---------------------------------------------------


@dataclass(frozen=True)
class RrefResult:
    reduced: Mat
    pivot_cols: tuple[int, ...]
    rank: int


def rref(M: Mat, tol: float = DEFAULT_TOL) -> RrefResult:
    """Reduced row echelon form with pivot columns and rank.

    Float mode pivots on the largest magnitude in the current column and
    treats ``|x| <= tol * (max initial |entry|)`` as zero; exact mode is
    exact.
    """
    m, n = M.shape
    a = [list(row) for row in M.entries]
    if M.exact:
        thresh = None
    else:
        scale = float(M.max_abs())
        thresh = tol * scale if scale > 0 else tol

    def negligible(x) -> bool:
        return x == 0 if thresh is None else abs(x) <= thresh

    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        if thresh is None:
            pr = next((i for i in range(r, m) if a[i][c] != 0), None)
        else:
            pr = max(range(r, m), key=lambda i: abs(a[i][c]))
            if negligible(a[pr][c]):
                pr = None
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(m):
            if i == r:
                continue
            f = a[i][c]
            if negligible(f):
                continue
            a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    reduced = Mat(m, n, tuple(tuple(row) for row in a), M.exact)
    return RrefResult(reduced, tuple(pivots), len(pivots))


def rank(M: Mat, tol: float = DEFAULT_TOL) -> int:
    return rref(M, tol).rank


def nullspace(M: Mat, tol: float = DEFAULT_TOL) -> list[tuple]:
    """Basis of ``{v : M v = 0}``; one vector per free column of the rref."""
    m, n = M.shape
    res = rref(M, tol)
    piv = set(res.pivot_cols)
    basis = []
    zero = Fraction(0) if M.exact else 0.0
    one = Fraction(1) if M.exact else 1.0
    for f in range(n):
        if f in piv:
            continue
        v = [zero] * n
        v[f] = one
        for r, p in enumerate(res.pivot_cols):
            v[p] = -res.reduced[r, f]
        basis.append(tuple(v))
    return basis


def left_nullspace(M: Mat, tol: float = DEFAULT_TOL) -> list[tuple]:
    """Basis of ``{x : x^T M = 0}``."""
    return nullspace(M.T, tol)


def solve(A: Mat, b: Sequence, tol: float = DEFAULT_TOL):
    """One solution of ``A x = b`` (free variables set to 0), or None."""
    if len(b) != A.rows:
        raise ShapeError("right-hand side length mismatch")
    conv = Fraction if A.exact else float
    aug = Mat(A.rows, A.cols + 1,
              tuple(tuple(row) + (conv(bi),) for row, bi in zip(A.entries, b)), A.exact)
    res = rref(aug, tol)
    if A.cols in res.pivot_cols:
        return None
    zero = Fraction(0) if A.exact else 0.0
    x = [zero] * A.cols
    for r, p in enumerate(res.pivot_cols):
        x[p] = res.reduced[r, A.cols]
    return tuple(x)


def inverse(A: Mat, tol: float = DEFAULT_TOL) -> Mat:
    if not A.is_square:
        raise ShapeError("inverse requires a square matrix")
    n = A.rows
    ident = Mat.identity(n, A.exact)
    aug = Mat(n, 2 * n,
              tuple(ra + ri for ra, ri in zip(A.entries, ident.entries)), A.exact)
    res = rref(aug, tol)
    if res.rank < n or any(p >= n for p in res.pivot_cols):
        raise SingularMatrixError("matrix is singular")
    return Mat(n, n, tuple(row[n:] for row in res.reduced.entries), A.exact)


def determinant(A: Mat, tol: float = DEFAULT_TOL) -> Scalar:
    """Determinant by elimination; exact over rationals."""
    if not A.is_square:
        raise ShapeError("determinant requires a square matrix")
    n = A.rows
    a = [list(row) for row in A.entries]
    if A.exact:
        thresh = None
    else:
        scale = float(A.max_abs())
        thresh = tol * scale if scale > 0 else tol
    det = Fraction(1) if A.exact else 1.0
    sign = 1
    for c in range(n):
        if thresh is None:
            pr = next((i for i in range(c, n) if a[i][c] != 0), None)
        else:
            pr = max(range(c, n), key=lambda i: abs(a[i][c]))
            if abs(a[pr][c]) <= thresh:
                pr = None
        if pr is None:
            return Fraction(0) if A.exact else 0.0
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            sign = -sign
        pv = a[c][c]
        det *= pv
        for i in range(c + 1, n):
            f = a[i][c] / pv
            if f == 0:
                continue
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * det


# -- vec, Hadamard, block assembly ---------------------------------------


def vec_index_pairs(m: int, n: int) -> list[tuple[int, int]]:
    """0-based (row, col) pairs in column-stacking order."""
    return [(i, j) for j in range(n) for i in range(m)]


def vec(M: Mat) -> tuple:
    """Column-stacking of ``M`` into a vector of length ``rows*cols``."""
    return tuple(M[i, j] for (i, j) in vec_index_pairs(M.rows, M.cols))


def unvec(v: Sequence, m: int, n: int, exact: bool) -> Mat:
    if len(v) != m * n:
        raise ShapeError("vector length does not match target shape")
    return Mat(m, n, tuple(tuple(v[j * m + i] for j in range(n)) for i in range(m)), exact)


def vec_restrict(M: Mat, positions: Sequence[tuple[int, int]]) -> tuple:
    """Entries of ``vec(M)`` at the given (row, col) positions, in their order."""
    for (i, j) in positions:
        if not (0 <= i < M.rows and 0 <= j < M.cols):
            raise ShapeError(f"position {(i, j)} out of bounds")
    return tuple(M[i, j] for (i, j) in positions)


def hadamard(A: Mat, B: Mat) -> Mat:
    return A._zip(B, lambda a, b: a * b)


def block(grid: Sequence[Sequence[Mat]]) -> Mat:
    """Assemble a block matrix from a grid of conformal blocks."""
    if not grid or not grid[0]:
        raise ShapeError("empty block grid")
    exact = grid[0][0].exact
    widths = [b.cols for b in grid[0]]
    rows_out = []
    for brow in grid:
        if len(brow) != len(widths) or any(b.cols != w for b, w in zip(brow, widths)):
            raise ShapeError("block column widths do not align")
        h = brow[0].rows
        if any(b.rows != h or b.exact != exact for b in brow):
            raise ShapeError("block row heights or scalar kinds do not align")
        for i in range(h):
            rows_out.append(tuple(x for b in brow for x in b.row(i)))
    return Mat(len(rows_out), sum(widths), tuple(rows_out), exact)


def direct_sum(A: Mat, B: Mat) -> Mat:
    return block([[A, Mat.zeros(A.rows, B.cols, A.exact)],
                  [Mat.zeros(B.rows, A.cols, B.exact), B]])


# -- small vector helpers --------------------------------------------------


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def integerize(v: Sequence[Fraction]) -> tuple:
    """Rescale a rational vector to coprime integers, first nonzero positive."""
    denoms = [x.denominator for x in v if x != 0]
    if not denoms:
        return tuple(Fraction(0) for _ in v)
    lcm = 1
    for d in denoms:
        lcm = lcm * d // gcd(lcm, d)
    ints = [x * lcm for x in v]
    g = 0
    for x in ints:
        g = gcd(g, int(x))
    if g:
        ints = [x / g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


# -- matrix file format ----------------------------------------------------


def matrix_to_jsonable(M: Mat) -> dict:
    """JSON form: exact entries as ``"p/q"`` strings, float entries as numbers."""
    if M.exact:
        entries = [[str(x) for x in row] for row in M.entries]
    else:
        entries = [[float(x) for x in row] for row in M.entries]
    return {"rows": M.rows, "cols": M.cols, "entries": entries}


def matrix_from_jsonable(obj) -> Mat:
    if not isinstance(obj, dict) or not {"rows", "cols", "entries"} <= set(obj):
        raise FormatError("matrix object must carry rows, cols, entries")
    entries = obj["entries"]
    if len(entries) != obj["rows"] or any(len(r) != obj["cols"] for r in entries):
        raise FormatError("entry grid does not match declared shape")
    flat = [x for row in entries for x in row]
    if all(isinstance(x, str) for x in flat):
        try:
            return Mat.exact_matrix([[Fraction(x) for x in row] for row in entries])
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad rational entry: {exc}") from exc
    if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in flat):
        return Mat.float_matrix(entries)
    raise FormatError("matrix file mixes exact (string) and float (number) entries")


def read_matrix(path) -> Mat:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON in {path}: {exc}") from exc
    return matrix_from_jsonable(obj)


def write_matrix(path, M: Mat) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_jsonable(M), fh)
        fh.write("\n")
