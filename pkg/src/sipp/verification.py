"""Tangent/normal verification matrices and the liberation machinery.

For row orthogonal ``Q`` the tangent space of the orthogonal manifold is
spanned by ``B_ij = K_ij P`` (``K_ij = E_ij - E_ji``, ``i < j <= m``) and
``E_ij P`` (``m < j <= n``), where ``P`` completes ``Q`` to ``Q P^T = [I O]``;
the normal space is spanned by ``C_kl = (E_kl + E_lk) Q`` and ``E_kk Q``.
Restricting the stacked ``vec`` columns to the zero (resp. nonzero)
positions of ``Q`` gives the verification matrices: independent rows of the
tangent restriction, or independent columns of the normal restriction,
certify the SIPP, and partial row independence certifies that particular
zero entries can be liberated into larger sign patterns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotOrthogonalError, ShapeError, StructureError
from .linalg import (DEFAULT_TOL, Mat, block, direct_sum, dot, is_zero,
                     left_nullspace, nullspace, rank, vec_index_pairs)
from .signpat import SignPattern, sign_of, super_pattern
from .sipp_core import (SippCertificate, Verdict, orthogonality_defect,
                        sym_pairs, symmetric_system)


@dataclass(frozen=True)
class LabeledMatrix:
    """A matrix whose rows/columns carry human-readable 1-based labels.

    Row labels are matrix positions ``(i, j)``; column labels are basis tags
    ``("K", i, j)`` / ``("E", i, j)`` for tangent directions and
    ``("N", k, l)`` for symmetric normal directions.
    """

    data: Mat
    row_labels: tuple
    col_labels: tuple

    def __post_init__(self):
        if len(self.row_labels) != self.data.rows or len(self.col_labels) != self.data.cols:
            raise ShapeError("label counts must match the matrix shape")

    def take_rows(self, indices) -> "LabeledMatrix":
        return LabeledMatrix(self.data.take_rows(list(indices)),
                             tuple(self.row_labels[i] for i in indices),
                             self.col_labels)

    def to_csv(self) -> str:
        head = "pos," + ",".join(_label_str(c) for c in self.col_labels)
        lines = [head]
        for lab, row in zip(self.row_labels, self.data.entries):
            lines.append(f"({lab[0]};{lab[1]})," + ",".join(str(x) for x in row))
        return "\n".join(lines)


def _label_str(lab) -> str:
    return f"{lab[0]}({lab[1]};{lab[2]})"


def _require_row_orthogonal(Q: Mat, tol: float) -> None:
    if Q.rows > Q.cols:
        raise ShapeError("row orthogonality requires m <= n")
    if orthogonality_defect(Q) > max(tol, 1e-9):
        raise NotOrthogonalError("Q Q^T differs from I beyond tolerance")


def orthogonal_completion(Q: Mat, tol: float = DEFAULT_TOL) -> Mat:
    """An orthogonal ``P`` with ``Q P^T = [I O]`` whose first rows equal ``Q``.

    Square inputs return ``Q`` itself (exactness preserved); rectangular
    inputs extend the rows of ``Q`` by Gram-Schmidt over the standard basis
    in float mode, picking the candidate with the largest residual at each
    step (so ``[1 0 0]`` completes to the identity).
    """
    _require_row_orthogonal(Q, tol)
    if Q.is_square:
        return Q
    n = Q.cols
    rows = [list(map(float, r)) for r in Q.to_float().entries]

    def residual(k: int) -> list[float]:
        v = [1.0 if i == k else 0.0 for i in range(n)]
        for _ in range(2):  # double orthogonalization for float hygiene
            for r in rows:
                c = dot(v, r)
                v = [x - c * y for x, y in zip(v, r)]
        return v

    while len(rows) < n:
        cands = [(residual(k), k) for k in range(n)]
        norms = [sum(x * x for x in v) for v, _ in cands]
        best = max(range(n), key=lambda k: norms[k])
        nb = norms[best] ** 0.5
        if nb <= 1e-8:
            raise NotOrthogonalError("failed to extend Q to an orthonormal basis")
        rows.append([x / nb for x in cands[best][0]])
    return Mat.float_matrix(rows)


def _zero_positions_vec(M: Mat, tol: float) -> list[tuple[int, int]]:
    return [(i, j) for (i, j) in vec_index_pairs(M.rows, M.cols)
            if is_zero(M[i, j], tol)]


def _support_positions_vec(M: Mat, tol: float) -> list[tuple[int, int]]:
    return [(i, j) for (i, j) in vec_index_pairs(M.rows, M.cols)
            if not is_zero(M[i, j], tol)]


def tangent_basis_labels(m: int, n: int) -> list[tuple]:
    labels = [("K", i + 1, j + 1) for i in range(m) for j in range(i + 1, m)]
    labels += [("E", i + 1, j + 1) for j in range(m, n) for i in range(m)]
    return labels


def tangent_space_matrix(Q: Mat, P: Mat, tol: float = DEFAULT_TOL) -> LabeledMatrix:
    """Stacked tangent basis: column ``(i, j)`` is ``vec(B_ij)``.

    The result has ``mn`` rows and ``mn - m(m+1)/2`` columns.
    """
    m, n = Q.shape
    if P.shape != (n, n):
        raise ShapeError("P must be a square completion of Q")
    _check_completion(Q, P, tol)
    zero = Fraction(0) if P.exact else 0.0
    mn = m * n
    cols = []
    for i in range(m):
        for j in range(i + 1, m):
            col = [zero] * mn
            for c in range(n):
                col[c * m + i] = P[j, c]
                col[c * m + j] = -P[i, c]
            cols.append(col)
    for j in range(m, n):
        for i in range(m):
            col = [zero] * mn
            for c in range(n):
                col[c * m + i] = P[j, c]
            cols.append(col)
    data = Mat(mn, len(cols), tuple(tuple(col[r] for col in cols) for r in range(mn)),
               P.exact)
    row_labels = tuple((i + 1, j + 1) for (i, j) in vec_index_pairs(m, n))
    return LabeledMatrix(data, row_labels, tuple(tangent_basis_labels(m, n)))


def _check_completion(Q: Mat, P: Mat, tol: float) -> None:
    qf = Q if Q.exact == P.exact else Q.to_float()
    pf = P if Q.exact == P.exact else P.to_float()
    prod = qf @ pf.T
    for i in range(Q.rows):
        for j in range(Q.cols):
            target = 1 if i == j else 0
            if abs(float(prod[i, j] - target)) > max(tol, 1e-8):
                raise NotOrthogonalError("Q P^T is not [I O] within tolerance")


def tangent_verification_matrix(Q: Mat, P: Mat, tol: float = DEFAULT_TOL) -> LabeledMatrix:
    """Rows of the tangent space matrix at the zero positions of ``Q``."""
    ts = tangent_space_matrix(Q, P, tol)
    zeros = _zero_positions_vec(Q, tol)
    index_of = {pos: r for r, pos in enumerate(vec_index_pairs(Q.rows, Q.cols))}
    return ts.take_rows([index_of[z] for z in zeros])


def normal_space_matrix(Q: Mat, tol: float = DEFAULT_TOL) -> LabeledMatrix:
    """Stacked normal basis: column ``(k, l)`` is ``vec(C_kl)``; exact-capable."""
    _require_row_orthogonal(Q, tol)
    m, n = Q.shape
    zero = Fraction(0) if Q.exact else 0.0
    mn = m * n
    cols = []
    labels = []
    for (k, l) in sym_pairs(m):
        col = [zero] * mn
        if k == l:
            for c in range(n):
                col[c * m + k] = Q[k, c]
        else:
            for c in range(n):
                col[c * m + k] = Q[l, c]
                col[c * m + l] = Q[k, c]
        cols.append(col)
        labels.append(("N", k + 1, l + 1))
    data = Mat(mn, len(cols), tuple(tuple(col[r] for col in cols) for r in range(mn)),
               Q.exact)
    row_labels = tuple((i + 1, j + 1) for (i, j) in vec_index_pairs(m, n))
    return LabeledMatrix(data, row_labels, tuple(labels))


def normal_verification_matrix(Q: Mat, tol: float = DEFAULT_TOL) -> LabeledMatrix:
    """Rows of the normal space matrix at the support of ``Q``."""
    ns = normal_space_matrix(Q, tol)
    supp = _support_positions_vec(Q, tol)
    index_of = {pos: r for r, pos in enumerate(vec_index_pairs(Q.rows, Q.cols))}
    return ns.take_rows([index_of[s] for s in supp])


def sipp_by_verification(Q: Mat, route: str = "normal",
                         tol: float = DEFAULT_TOL) -> SippCertificate:
    """SIPP of row orthogonal ``Q`` through a verification matrix.

    ``route="tangent"``: the rows of the restricted tangent matrix must be
    linearly independent; ``route="normal"``: the columns of the restricted
    normal matrix must be.  Both agree with :func:`sipp_core.has_sipp`.
    """
    _require_row_orthogonal(Q, tol)
    m = Q.rows
    dim = m * (m + 1) // 2
    if route == "tangent":
        p = orthogonal_completion(Q, tol)
        psi = tangent_verification_matrix(Q, p, tol)
        r = rank(psi.data, tol)
        if r == psi.data.rows:
            return SippCertificate(Verdict.HAS_SIPP, None, r, True)
        witness = _normal_witness(Q, tol)
        return SippCertificate(Verdict.NOT_SIPP, witness, r, True)
    if route == "normal":
        omega = normal_verification_matrix(Q, tol)
        kernel = nullspace(omega.data, tol)
        if not kernel:
            return SippCertificate(Verdict.HAS_SIPP, None, dim, True)
        witness = _assemble_from_pairs(kernel[0], m, Q.exact)
        return SippCertificate(Verdict.NOT_SIPP, witness, dim - len(kernel), True)
    raise ValueError("route must be 'tangent' or 'normal'")


def _assemble_from_pairs(v, m: int, exact: bool) -> Mat:
    from .linalg import integerize

    vv = integerize(v) if exact else v
    zero = Fraction(0) if exact else 0.0
    grid = [[zero] * m for _ in range(m)]
    for (k, l), x in zip(sym_pairs(m), vv):
        grid[k][l] = x
        grid[l][k] = x
    return Mat.from_rows(grid, exact=exact)


def _normal_witness(Q: Mat, tol: float) -> Mat | None:
    omega = normal_verification_matrix(Q, tol)
    kernel = nullspace(omega.data, tol)
    if not kernel:
        return None
    return _assemble_from_pairs(kernel[0], Q.rows, Q.exact)


# -- tangent directions and liberation ----------------------------------------


@dataclass(frozen=True)
class TangentDirection:
    """A tangent matrix ``B`` (``B Q^T`` skew); optionally ``B = K Q`` for a
    square skew ``K``."""

    B: Mat
    K: Mat | None = None


def _as_direction(b) -> TangentDirection:
    return b if isinstance(b, TangentDirection) else TangentDirection(b)


def _check_tangent(Q: Mat, d: TangentDirection, tol: float) -> None:
    b = d.B
    if b.shape != Q.shape:
        raise ShapeError("tangent direction must match the shape of Q")
    qx = Q if Q.exact == b.exact else Q.to_float()
    bx = b if Q.exact == b.exact else b.to_float()
    s = bx @ qx.T
    scale = max(1.0, float(bx.max_abs()) * float(qx.max_abs()) * Q.cols)
    for i in range(Q.rows):
        for j in range(Q.rows):
            if abs(float(s[i, j] + s[j, i])) > tol * scale:
                raise StructureError("B Q^T is not skew-symmetric within tolerance")
    if d.K is not None:
        if d.K.shape != (Q.rows, Q.rows):
            raise ShapeError("K must be square of order m")
        kx = d.K if d.K.exact == qx.exact else d.K.to_float()
        diff = bx - (kx @ qx)
        if any(abs(float(x)) > tol * scale for row in diff.entries for x in row):
            raise StructureError("B does not equal K Q within tolerance")


@dataclass(frozen=True)
class LiberationResult:
    """Verdict of the algebraic liberation test.

    ``certified`` means every super pattern of ``pattern`` allows
    orthogonality.  ``mll_agrees`` reports the float cross-check through the
    restricted tangent matrix (row independence on the zeros of the
    liberated pattern), which is mathematically equivalent.
    """

    certified: bool
    pattern: SignPattern
    system_rank: int
    mll_agrees: bool | None = None


def liberate(Q: Mat, direction, tol: float = DEFAULT_TOL) -> LiberationResult:
    """Certify super patterns reachable from ``Q`` along a tangent direction.

    With ``R = sgn(B)`` and the liberated pattern ``T = S_R`` (the super
    pattern of ``sgn(Q)`` in the direction of ``R``), the test asks that the
    only symmetric ``X`` with ``(X Q) ∘ T = O`` is ``X = O``; the check is
    exact over rational ``Q``.
    """
    _require_row_orthogonal(Q, tol)
    d = _as_direction(direction)
    _check_tangent(Q, d, tol)
    target = super_pattern(sign_of(Q, tol), sign_of(d.B, tol))
    support = [(i, j) for (i, j) in vec_index_pairs(Q.rows, Q.cols)
               if target[i, j] != 0]
    system = symmetric_system(Q, support)
    kernel = nullspace(system, tol)
    dim = Q.rows * (Q.rows + 1) // 2
    certified = not kernel
    mll = _mll_row_independence(Q, target, tol)
    return LiberationResult(certified, target, dim - len(kernel),
                            mll_agrees=(mll == certified))


def _mll_row_independence(Q: Mat, target: SignPattern, tol: float) -> bool:
    qf = Q.to_float()
    p = orthogonal_completion(qf, tol)
    ts = tangent_space_matrix(qf, p, tol)
    pairs = vec_index_pairs(Q.rows, Q.cols)
    stay = [r for r, (i, j) in enumerate(pairs) if target[i, j] == 0]
    if not stay:
        return True
    sub = ts.data.take_rows(stay)
    return rank(sub, tol) == len(stay)


@dataclass(frozen=True)
class Obstruction:
    """A left-nullspace vector of the tangent verification matrix.

    Rows are labeled by the zero positions of ``Q`` (1-based, column-major
    order); zero entries of any liberated pattern must be orthogonal to the
    vector, so a sign request with single-signed products against it is
    unreachable.
    """

    vector: tuple
    labels: tuple


def liberation_obstructions(Q: Mat, tol: float = DEFAULT_TOL) -> list[Obstruction]:
    """Labeled basis of the left nullspace of the tangent verification matrix."""
    _require_row_orthogonal(Q, tol)
    p = orthogonal_completion(Q, tol)
    psi = tangent_verification_matrix(Q, p, tol)
    basis = left_nullspace(psi.data, tol)
    out = []
    for v in basis:
        lead = next((x for x in v if not is_zero(x, tol)), None)
        if lead is not None:
            v = tuple(x / lead for x in v)
        out.append(Obstruction(v, psi.row_labels))
    return out


# -- vertex extension ----------------------------------------------------------


@dataclass(frozen=True)
class AddVertexResult:
    certified: bool
    pattern: SignPattern | None
    dim_coordinate_space: int
    dim_image_space: int


def add_vertex_check(Q: Mat, k, tol: float = DEFAULT_TOL) -> AddVertexResult:
    """Border a nowhere-zero orthogonal ``Q`` by a new first row and column.

    With ``w = k^T Q``, let ``D`` be the coordinate subspace vanishing on the
    support of ``w`` and ``F`` the image under ``Q^T`` of the coordinate
    subspace vanishing on the support of ``k``.  If ``D ∩ F = {0}``, every
    super pattern of ``[[1, sgn(w)], [-sgn(k), sgn(Q)]]`` allows
    orthogonality.
    """
    if not Q.is_square:
        raise ShapeError("add_vertex_check requires a square Q")
    n = Q.rows
    if len(k) != n:
        raise ShapeError("k must have length n")
    if any(is_zero(Q[i, j], tol) for i in range(n) for j in range(n)):
        raise StructureError("Q must be nowhere zero")
    _require_row_orthogonal(Q, tol)
    conv = Fraction if Q.exact else float
    kv = tuple(conv(x) for x in k)
    w = tuple(dot(kv, Q.col(j)) for j in range(n))
    d_idx = [i for i in range(n) if is_zero(w[i], tol)]
    f_idx = [i for i in range(n) if is_zero(kv[i], tol)]
    zero = Fraction(0) if Q.exact else 0.0
    one = Fraction(1) if Q.exact else 1.0
    cols = [[one if r == i else zero for r in range(n)] for i in d_idx]
    cols += [[Q[i, r] for r in range(n)] for i in f_idx]
    certified = True
    if cols:
        stacked = Mat(n, len(cols), tuple(tuple(c[r] for c in cols) for r in range(n)),
                      Q.exact)
        certified = rank(stacked, tol) == len(cols)
    if not certified:
        return AddVertexResult(False, None, len(d_idx), len(f_idx))

    def sgn(x):
        if is_zero(x, tol):
            return 0
        return 1 if x > 0 else -1

    qs = sign_of(Q, tol)
    first = (1,) + tuple(sgn(x) for x in w)
    rows = [first] + [(-sgn(kv[i]),) + qs.entries[i] for i in range(n)]
    return AddVertexResult(True, SignPattern.from_rows(rows), len(d_idx), len(f_idx))


# -- block direct sums ----------------------------------------------------------


def waters_block_check(qs: list[Mat], b_blocks: list[list[Mat]],
                       tol: float = DEFAULT_TOL) -> LiberationResult:
    """Liberation over a direct sum ``Q = ⊕ Q_i`` along a block direction.

    The blocks must satisfy the skew compatibility
    ``B_ij = -Q_i B_ji^T Q_j`` (which makes ``B Q^T`` skew); the liberated
    pattern is then tested exactly as in :func:`liberate`.
    """
    k = len(qs)
    if len(b_blocks) != k or any(len(row) != k for row in b_blocks):
        raise ShapeError("block grid must be k x k")
    for qi in qs:
        if not qi.is_square:
            raise ShapeError("each diagonal block must be square")
        _require_row_orthogonal(qi, tol)
    for i in range(k):
        for j in range(k):
            bij, bji = b_blocks[i][j], b_blocks[j][i]
            if bij.shape != (qs[i].rows, qs[j].rows):
                raise ShapeError(f"block ({i},{j}) has the wrong shape")
            expect = (qs[i] @ bji.T @ qs[j]).scale(-1)
            diff = bij - expect
            scale = max(1.0, float(bij.max_abs()), float(expect.max_abs()))
            if any(abs(float(x)) > max(tol, 1e-9) * scale
                   for row in diff.entries for x in row):
                raise StructureError(
                    f"blocks ({i},{j}) and ({j},{i}) violate skew compatibility")
    q = qs[0]
    for qi in qs[1:]:
        q = direct_sum(q, qi)
    b = block(b_blocks)
    return liberate(q, TangentDirection(b), tol)
