"""Families of sparse row orthogonal matrices with the SIPP.

The constructions keep entries rational wherever the family allows it
(Hessenberg rows, Cayley transforms of rational skew matrices) so SIPP
checks stay exact; hollow families cannot avoid square roots and are
produced in float mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (HollowOrderError, NotHollowError, NotOrthogonalError,
                     ShapeError, SingularMatrixError, StructureError)
from .linalg import DEFAULT_TOL, Mat, block, inverse, is_zero
from .sipp_core import orthogonality_defect


def hessenberg_orthogonal(n: int, normalized: bool = False) -> Mat:
    """The order-``n`` orthogonal Hessenberg family.

    Row ``i`` (1-based, ``i < n``) is ``(1, ..., 1, -i, 0, ..., 0)`` with
    ``i`` leading ones; the last row is all ones.  Rows are exactly
    orthogonal with squared norms ``i(i+1)`` (and ``n`` for the last row);
    ``normalized=True`` divides each row by its length in float mode.
    """
    if n < 2:
        raise ShapeError("the Hessenberg family starts at order 2")
    rows = []
    for i in range(1, n):
        rows.append([1] * i + [-i] + [0] * (n - i - 1))
    rows.append([1] * n)
    h = Mat.exact_matrix(rows)
    if not normalized:
        return h
    scaled = []
    for row in h.entries:
        norm = math.sqrt(float(sum(x * x for x in row)))
        scaled.append([float(x) / norm for x in row])
    return Mat.float_matrix(scaled)


@dataclass(frozen=True)
class GivensSpec:
    """A plane rotation: ``n`` is the order, ``1 <= i < j <= n`` the plane
    (1-based), ``theta`` the counterclockwise angle in radians."""

    n: int
    i: int
    j: int
    theta: float

    def __post_init__(self):
        if not (1 <= self.i < self.j <= self.n):
            raise ShapeError("requires 1 <= i < j <= n")


def givens(spec: GivensSpec) -> Mat:
    """The rotation matrix ``G`` with ``G[i,i] = G[j,j] = cos``,
    ``G[j,i] = sin``, ``G[i,j] = -sin`` (1-based indices)."""
    c, s = math.cos(spec.theta), math.sin(spec.theta)
    i, j = spec.i - 1, spec.j - 1
    rows = [[1.0 if a == b else 0.0 for b in range(spec.n)] for a in range(spec.n)]
    rows[i][i] = c
    rows[j][j] = c
    rows[j][i] = s
    rows[i][j] = -s
    return Mat.float_matrix(rows)


def pre_apply(spec: GivensSpec, A: Mat) -> Mat:
    """``G A``: row ``i`` becomes ``cos*r_i - sin*r_j``, row ``j`` becomes
    ``cos*r_j + sin*r_i``; all other entries are returned bit-identical."""
    if A.rows != spec.n:
        raise ShapeError("row count must equal the rotation order")
    c, s = math.cos(spec.theta), math.sin(spec.theta)
    i, j = spec.i - 1, spec.j - 1
    a = A.to_float()
    rows = [list(r) for r in a.entries]
    ri, rj = rows[i][:], rows[j][:]
    rows[i] = [c * x - s * y for x, y in zip(ri, rj)]
    rows[j] = [c * y + s * x for x, y in zip(ri, rj)]
    return Mat.float_matrix(rows)


def post_apply(spec: GivensSpec, A: Mat) -> Mat:
    """``A G``: column ``i`` becomes ``cos*c_i + sin*c_j``, column ``j``
    becomes ``cos*c_j - sin*c_i``; other entries are bit-identical."""
    if A.cols != spec.n:
        raise ShapeError("column count must equal the rotation order")
    c, s = math.cos(spec.theta), math.sin(spec.theta)
    i, j = spec.i - 1, spec.j - 1
    a = A.to_float()
    rows = [list(r) for r in a.entries]
    for row in rows:
        ci, cj = row[i], row[j]
        row[i] = c * ci + s * cj
        row[j] = c * cj - s * ci
    return Mat.float_matrix(rows)


# -- hollow orthogonal matrices -------------------------------------------------


def _hollow_base4() -> Mat:
    rows = ((0, 1, 1, 1), (1, 0, -1, 1), (1, 1, 0, -1), (1, -1, 1, 0))
    s = 1.0 / math.sqrt(3.0)
    return Mat.float_matrix([[s * x for x in row] for row in rows])


def _hollow_base5() -> Mat:
    a = (-1.0 + math.sqrt(3.0)) / 2.0
    b = (-1.0 - math.sqrt(3.0)) / 2.0
    rows = ((0, 1, 1, 1, 1), (1, 0, a, 1, b), (1, b, 0, a, 1),
            (1, 1, b, 0, a), (1, a, 1, b, 0))
    return Mat.float_matrix([[x / 2.0 for x in row] for row in rows])


def _require_hollow_orthogonal(M: Mat, tol: float, name: str) -> None:
    if not M.is_square:
        raise NotHollowError(f"{name} must be square")
    n = M.rows
    for i in range(n):
        if not is_zero(M[i, i], tol):
            raise NotHollowError(f"{name} has a nonzero diagonal entry at {i}")
        for j in range(n):
            if i != j and is_zero(M[i, j], tol):
                raise NotHollowError(f"{name} has a zero off-diagonal entry at ({i},{j})")
    if orthogonality_defect(M) > max(tol, 1e-9):
        raise NotOrthogonalError(f"{name} is not orthogonal within tolerance")


def merge_hollow(M: Mat, N: Mat, tol: float = DEFAULT_TOL) -> Mat:
    """Corner-merge of hollow orthogonal matrices.

    With ``M = [[A, v], [u^T, 0]]`` of order ``m+1`` and
    ``N = [[0, x^T], [y, B]]`` of order ``n+1``, the matrix
    ``[[A, v x^T], [y u^T, B]]`` is hollow orthogonal of order ``m + n``.
    """
    _require_hollow_orthogonal(M, tol, "M")
    _require_hollow_orthogonal(N, tol, "N")
    return _corner_merge(M, N)


def _corner_merge(M: Mat, N: Mat) -> Mat:
    if M.exact != N.exact:
        raise ShapeError("cannot merge exact with float matrices")
    rm, cm = M.shape
    rn, cn = N.shape
    a = [list(M.entries[i][: cm - 1]) for i in range(rm - 1)]
    v = [M[i, cm - 1] for i in range(rm - 1)]
    u = [M[rm - 1, j] for j in range(cm - 1)]
    x = [N[0, j] for j in range(1, cn)]
    y = [N[i, 0] for i in range(1, rn)]
    b = [list(N.entries[i][1:]) for i in range(1, rn)]
    top = [a[i] + [v[i] * xx for xx in x] for i in range(rm - 1)]
    bot = [[yy * uu for uu in u] + b[i] for i, yy in enumerate(y)]
    return Mat.from_rows(top + bot, exact=M.exact)


def merge_row_orthogonal(M: Mat, N: Mat, tol: float = DEFAULT_TOL) -> Mat:
    """General corner-merge of row orthogonal matrices.

    ``M = [[A, v], [u^T, 0]]`` and ``N = [[0, x^T], [y, B]]`` must be row
    orthogonal with ``u, v, x, y`` nowhere zero; the merge
    ``[[A, v x^T], [y u^T, B]]`` is then row orthogonal, and it has the SIPP
    whenever both inputs do.
    """
    for name, mat in (("M", M), ("N", N)):
        if mat.rows > mat.cols:
            raise ShapeError(f"{name} must have m <= n")
        if orthogonality_defect(mat) > max(tol, 1e-9):
            raise NotOrthogonalError(f"{name} is not row orthogonal within tolerance")
    rm, cm = M.shape
    rn, cn = N.shape
    if not is_zero(M[rm - 1, cm - 1], tol):
        raise StructureError("M must end in a zero corner entry")
    if not is_zero(N[0, 0], tol):
        raise StructureError("N must start with a zero corner entry")
    if any(is_zero(M[i, cm - 1], tol) for i in range(rm - 1)):
        raise StructureError("the last column of M must be nowhere zero above the corner")
    if any(is_zero(M[rm - 1, j], tol) for j in range(cm - 1)):
        raise StructureError("the last row of M must be nowhere zero before the corner")
    if any(is_zero(N[0, j], tol) for j in range(1, cn)):
        raise StructureError("the first row of N must be nowhere zero after the corner")
    if any(is_zero(N[i, 0], tol) for i in range(1, rn)):
        raise StructureError("the first column of N must be nowhere zero below the corner")
    return _corner_merge(M, N)


def hollow_orthogonal(n: int, tol: float = DEFAULT_TOL) -> Mat:
    """A hollow orthogonal matrix of order ``n`` that is not signature
    equivalent to a symmetric matrix (so it has the SIPP).

    Exists exactly for ``n >= 4``: hollow orthogonal matrices of orders 1
    and 3 do not exist at all, and at order 2 only symmetric ones do.  Built
    by corner-merging the order-4 and order-5 base matrices, adding two to
    the order per merge.
    """
    if n in (1, 3):
        raise HollowOrderError(f"hollow orthogonal matrices of order {n} do not exist")
    if n == 2:
        raise HollowOrderError(
            "every hollow orthogonal matrix of order 2 is symmetric up to signatures")
    if n < 1:
        raise ShapeError("order must be positive")
    q = _hollow_base4() if n % 2 == 0 else _hollow_base5()
    while q.rows < n:
        q = merge_hollow(_hollow_base4(), q, tol)
    return q


# -- block assemblies ------------------------------------------------------------


def block_lower_triangular(A: Mat, B: Mat, C: Mat, tol: float = DEFAULT_TOL) -> Mat:
    """Assemble ``Q = [[A, O], [B, C]]`` and validate its preconditions.

    ``Q`` must come out row orthogonal and ``B`` nowhere zero; then ``Q``
    has the SIPP whenever ``A`` and ``C`` both do.
    """
    if A.exact != B.exact or B.exact != C.exact:
        raise ShapeError("blocks must share a scalar kind")
    if B.rows != C.rows or B.cols != A.cols:
        raise ShapeError("blocks do not conform to [[A, O], [B, C]]")
    if any(is_zero(x, tol) for row in B.entries for x in row):
        raise StructureError("B must be nowhere zero")
    q = block([[A, Mat.zeros(A.rows, C.cols, A.exact)], [B, C]])
    if orthogonality_defect(q) > max(tol, 1e-9):
        raise NotOrthogonalError("assembled block matrix is not row orthogonal")
    return q


def bordered_block(M: Mat, N: Mat, tol: float = DEFAULT_TOL) -> Mat:
    """Assemble ``[[A, O], [b a^T, B]]`` from ``M = [[A], [a^T]]`` and
    ``N = [b | B]``.

    ``M`` and ``N`` must be row orthogonal with ``a`` (the last row of
    ``M``) and ``b`` (the first column of ``N``) nowhere zero; the result is
    row orthogonal, and it has the SIPP iff both ``M`` and ``N`` do.
    """
    if M.exact != N.exact:
        raise ShapeError("inputs must share a scalar kind")
    for name, mat in (("M", M), ("N", N)):
        if orthogonality_defect(mat) > max(tol, 1e-9):
            raise NotOrthogonalError(f"{name} is not row orthogonal within tolerance")
    a = M.entries[M.rows - 1]
    b = [N[i, 0] for i in range(N.rows)]
    if any(is_zero(x, tol) for x in a):
        raise StructureError("the last row of M must be nowhere zero")
    if any(is_zero(x, tol) for x in b):
        raise StructureError("the first column of N must be nowhere zero")
    top = [list(M.entries[i]) + [Fraction(0) if M.exact else 0.0] * (N.cols - 1)
           for i in range(M.rows - 1)]
    bot = [[bb * aa for aa in a] + list(N.entries[i][1:]) for i, bb in enumerate(b)]
    return Mat.from_rows(top + bot, exact=M.exact)


def pad_columns(A: Mat, p: int) -> Mat:
    """``[A | O]`` with ``p - n`` zero columns appended; SIPP-neutral."""
    if p <= A.cols:
        raise ShapeError("padded width must exceed the current width")
    return block([[A, Mat.zeros(A.rows, p - A.cols, A.exact)]])


def cayley(K: Mat, eps) -> Mat:
    """The Cayley transform ``(I - eps*K)(I + eps*K)^{-1}`` of a skew ``K``.

    Always orthogonal with determinant +1; exact over rational inputs.
    """
    if not K.is_square:
        raise ShapeError("K must be square")
    n = K.rows
    e = Fraction(eps) if K.exact else float(eps)
    tol = DEFAULT_TOL
    for i in range(n):
        for j in range(n):
            if not is_zero(K[i, j] + K[j, i], tol):
                raise StructureError("K must be skew-symmetric")
    ident = Mat.identity(n, K.exact)
    plus = ident + K.scale(e)
    minus = ident - K.scale(e)
    try:
        return minus @ inverse(plus)
    except SingularMatrixError as exc:  # unreachable for real skew K
        raise SingularMatrixError("I + eps*K is singular") from exc
