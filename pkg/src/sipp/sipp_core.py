"""Deciding the strong inner product property (SIPP) with certificates.

An ``m x n`` matrix ``M`` (``m <= n``) has the SIPP when it has full rank and
``X = O`` is the only symmetric matrix with ``(X M) ∘ M = O``.  The decision
reduces to the rank of a linear system in the ``m(m+1)/2`` entries of ``X``,
one equation per support position of ``M``; over rational inputs the verdict
is exact and failures come with an explicit nonzero witness ``X``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotHollowError, NotOrthogonalError, ShapeError
from .linalg import (DEFAULT_TOL, Mat, hadamard, integerize, inverse, is_zero,
                     matrix_to_jsonable, nonzero_positions, nullspace, rank)


class Verdict(enum.Enum):
    HAS_SIPP = "HasSIPP"
    NOT_SIPP = "NotSIPP"
    NOT_FULL_RANK = "NotFullRank"


@dataclass(frozen=True)
class SippCertificate:
    """Verdict plus evidence.

    ``witness`` is a nonzero symmetric ``X`` with ``(X M) ∘ M = O`` when the
    verdict is ``NOT_SIPP``.  ``system_rank`` is the rank of the deciding
    linear system (``m(m+1)/2`` on a ``HAS_SIPP`` verdict from the symmetric
    route).  ``witness_y`` is the sparse pre-witness from the inverse route,
    supported on the zeros of ``M``, when that route produced the verdict.
    """

    verdict: Verdict
    witness: Mat | None
    system_rank: int | None
    full_rank_checked: bool
    witness_y: Mat | None = None

    @property
    def has_sipp(self) -> bool:
        return self.verdict is Verdict.HAS_SIPP

    def to_jsonable(self, include_witness: bool = True) -> dict:
        out = {
            "verdict": self.verdict.value,
            "system_rank": self.system_rank,
            "full_rank_checked": self.full_rank_checked,
        }
        if include_witness:
            out["witness"] = matrix_to_jsonable(self.witness) if self.witness else None
            out["witness_y"] = matrix_to_jsonable(self.witness_y) if self.witness_y else None
        return out


def sym_pairs(m: int) -> list[tuple[int, int]]:
    """Index pairs ``(k, l)``, ``k <= l``, of the symmetric basis, in lex order."""
    return [(k, l) for k in range(m) for l in range(k, m)]


def symmetric_system(M: Mat, positions) -> Mat:
    """Coefficient matrix of ``(X M)[i, j] = 0`` over the symmetric basis.

    Row order follows ``positions``; column ``(k, l)`` carries the
    coefficient of ``x_kl`` where ``X = sum x_kl (E_kl + E_lk)`` for ``k < l``
    and ``x_kk E_kk`` on the diagonal.
    """
    m = M.rows
    pairs = sym_pairs(m)
    zero = Fraction(0) if M.exact else 0.0
    rows = []
    for (i, j) in positions:
        row = []
        for (k, l) in pairs:
            if k == l:
                row.append(M[k, j] if k == i else zero)
            else:
                c = zero
                if k == i:
                    c = c + M[l, j]
                if l == i:
                    c = c + M[k, j]
                row.append(c)
        rows.append(tuple(row))
    return Mat(len(rows), len(pairs), tuple(rows), M.exact)


def _assemble_symmetric(v, m: int, exact: bool) -> Mat:
    pairs = sym_pairs(m)
    zero = Fraction(0) if exact else 0.0
    grid = [[zero] * m for _ in range(m)]
    for (k, l), x in zip(pairs, v):
        grid[k][l] = x
        grid[l][k] = x
    return Mat.from_rows(grid, exact=exact)


def _witness_vector(basis, exact: bool):
    # First nullspace basis vector = smallest free-column index pattern.
    v = basis[0]
    return integerize(v) if exact else v


def has_sipp(M: Mat, tol: float = DEFAULT_TOL) -> SippCertificate:
    """Decide the SIPP of ``M`` (requires ``m <= n``).

    Exact over rational inputs.  ``NOT_SIPP`` certificates carry a nonzero
    symmetric witness; rank-deficient inputs report ``NOT_FULL_RANK``.
    """
    m, n = M.shape
    if m > n:
        raise ShapeError("the SIPP is defined for m <= n; transpose the input")
    if rank(M, tol) < m:
        return SippCertificate(Verdict.NOT_FULL_RANK, None, None, True)
    support = nonzero_positions(M, tol)
    system = symmetric_system(M, support)
    kernel = nullspace(system, tol)
    dim = m * (m + 1) // 2
    if not kernel:
        return SippCertificate(Verdict.HAS_SIPP, None, dim, True)
    witness = _assemble_symmetric(_witness_vector(kernel, M.exact), m, M.exact)
    return SippCertificate(Verdict.NOT_SIPP, witness, dim - len(kernel), True)


def inverse_route_system(M: Mat, tol: float = DEFAULT_TOL):
    """Symmetry system of the inverse formulation for square nonsingular ``M``.

    Unknowns are the entries of ``Y`` on the zeros of ``M`` (row-major
    order); one equation per pair ``i < j`` forces ``(Y M^-1)`` symmetric.
    Returns ``(system, zero_positions, equation_pairs)``.
    """
    if not M.is_square:
        raise ShapeError("the inverse route requires a square matrix")
    n = M.rows
    minv = inverse(M, tol)
    zeros = [(i, j) for i in range(n) for j in range(n) if is_zero(M[i, j], tol)]
    zero = Fraction(0) if M.exact else 0.0
    eq_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rows = []
    for (i, j) in eq_pairs:
        row = []
        for (a, b) in zeros:
            c = zero
            if a == i:
                c = c + minv[b, j]
            if a == j:
                c = c - minv[b, i]
            row.append(c)
        rows.append(tuple(row))
    system = Mat(len(rows), len(zeros), tuple(rows), M.exact)
    return system, zeros, eq_pairs


def has_sipp_square_via_inverse(M: Mat, tol: float = DEFAULT_TOL) -> SippCertificate:
    """SIPP decision for square nonsingular ``M`` through the inverse route:
    ``M`` has the SIPP iff ``Y = O`` is the only matrix with ``Y ∘ M = O``
    and ``Y M^-1`` symmetric.  Agrees with :func:`has_sipp`."""
    system, zeros, _ = inverse_route_system(M, tol)
    n = M.rows
    if not zeros:
        return SippCertificate(Verdict.HAS_SIPP, None, 0, True)
    kernel = nullspace(system, tol)
    if not kernel:
        return SippCertificate(Verdict.HAS_SIPP, None, len(zeros), True)
    y = _witness_vector(kernel, M.exact)
    zero = Fraction(0) if M.exact else 0.0
    grid = [[zero] * n for _ in range(n)]
    for (i, j), val in zip(zeros, y):
        grid[i][j] = val
    witness_y = Mat.from_rows(grid, exact=M.exact)
    witness_x = witness_y @ inverse(M, tol)
    return SippCertificate(Verdict.NOT_SIPP, witness_x, len(zeros) - len(kernel),
                           True, witness_y=witness_y)


# -- structural quick rejects -------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str          # "disjoint-rows" | "zero-count" | "zero-block"
    detail: str
    rows: tuple = ()
    cols: tuple = ()


#: Zero-block search enumerates row subsets; beyond this many rows it is skipped.
ZERO_BLOCK_CAP = 12


def quick_rejects(M: Mat, tol: float = DEFAULT_TOL) -> list[Violation]:
    """Structural obstructions to the SIPP.

    Reports (a) row pairs with disjoint support, (b) a zero count exceeding
    ``nm - m(m+1)/2``, and (c) a ``p x q`` all-zero submatrix with
    ``p + q >= n`` (searched exhaustively for up to 12 rows).  An empty list
    means no structural obstruction was found.
    """
    m, n = M.shape
    if m > n:
        raise ShapeError("quick rejects expect m <= n")
    out: list[Violation] = []
    supports = [frozenset(j for j in range(n) if not is_zero(M[i, j], tol))
                for i in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            if not (supports[i] & supports[j]):
                out.append(Violation("disjoint-rows",
                                     f"rows {i} and {j} have disjoint support",
                                     rows=(i, j)))
    zero_count = m * n - sum(len(s) for s in supports)
    bound = m * n - m * (m + 1) // 2
    if zero_count > bound:
        out.append(Violation("zero-count",
                             f"{zero_count} zero entries exceed the bound {bound}"))
    if m <= ZERO_BLOCK_CAP:
        zero_sets = [frozenset(range(n)) - s for s in supports]
        best = None
        common: dict[int, frozenset] = {}
        for mask in range(1, 1 << m):
            low = mask & -mask
            i = low.bit_length() - 1
            rest = mask ^ low
            cz = zero_sets[i] if not rest else common[rest] & zero_sets[i]
            common[mask] = cz
            p, q = mask.bit_count(), len(cz)
            if q >= 1 and p + q >= n and (best is None or p + q > best[0]):
                best = (p + q, mask, cz)
        if best is not None:
            _, mask, cz = best
            rows = tuple(i for i in range(m) if mask >> i & 1)
            out.append(Violation(
                "zero-block",
                f"{len(rows)} x {len(cz)} zero submatrix gives p + q >= n",
                rows=rows, cols=tuple(sorted(cz))))
    return out


# -- hollow matrices -----------------------------------------------------------


@dataclass(frozen=True)
class HollowSignatureCertificate:
    """Outcome of the signature-equivalence test on a hollow orthogonal matrix.

    ``signatures`` holds diagonal sign vectors ``(d1, d2)`` making
    ``D1 Q D2`` symmetric when the verdict is ``NOT_SIPP``.
    """

    verdict: Verdict
    signatures: tuple[tuple[int, ...], tuple[int, ...]] | None


def _require_hollow(Q: Mat, tol: float) -> None:
    if not Q.is_square:
        raise ShapeError("hollow matrices are square")
    n = Q.rows
    for i in range(n):
        if not is_zero(Q[i, i], tol):
            raise NotHollowError(f"diagonal entry ({i},{i}) is nonzero")
        for j in range(n):
            if i != j and is_zero(Q[i, j], tol):
                raise NotHollowError(f"off-diagonal entry ({i},{j}) is zero")


def orthogonality_defect(Q: Mat) -> float:
    """``max |Q Q^T - I|`` as a float (0.0 for exactly row-orthogonal input)."""
    gram = Q @ Q.T
    n = Q.rows
    worst = 0.0
    for i in range(n):
        for j in range(n):
            target = 1 if i == j else 0
            worst = max(worst, abs(float(gram[i, j] - target)))
    return worst


def hollow_sipp_by_signature(Q: Mat, tol: float = DEFAULT_TOL) -> HollowSignatureCertificate:
    """SIPP test for hollow orthogonal ``Q`` via signature equivalence.

    Hollow is used in the strict sense: zero diagonal and nowhere-zero
    off-diagonal part (stricter than the common zero-diagonal-only usage).
    ``Q`` then has the SIPP iff no signature matrices ``D1, D2`` make
    ``D1 Q D2`` symmetric.  With all off-diagonal entries nonzero the
    existence question propagates in linear time: writing
    ``t_i = d1_i * d2_i``, symmetry forces ``|q_ij| = |q_ji|`` and
    ``t_i t_j = sign(q_ij q_ji)``, a 2-coloring that either closes
    consistently or proves nonexistence.
    """
    _require_hollow(Q, tol)
    if orthogonality_defect(Q) > max(tol, 1e-9):
        raise NotOrthogonalError("input is not orthogonal within tolerance")
    n = Q.rows
    for i in range(n):
        for j in range(i + 1, n):
            if abs(abs(float(Q[i, j])) - abs(float(Q[j, i]))) > tol:
                return HollowSignatureCertificate(Verdict.HAS_SIPP, None)
    sigma = [[1 if float(Q[i, j]) * float(Q[j, i]) > 0 else -1
              for j in range(n)] for i in range(n)]
    t = [1] + [sigma[0][j] for j in range(1, n)]
    for i in range(n):
        for j in range(i + 1, n):
            if t[i] * t[j] != sigma[i][j]:
                return HollowSignatureCertificate(Verdict.HAS_SIPP, None)
    return HollowSignatureCertificate(Verdict.NOT_SIPP, (tuple(t), (1,) * n))


# -- row removal / extension ---------------------------------------------------


@dataclass(frozen=True)
class RemoveRowReport:
    """Both directions of the row-removal principle on a concrete instance.

    Dropping the last row of a SIPP matrix preserves the SIPP; conversely a
    SIPP matrix extends by a new row when the stacked rows stay independent
    and the new row is nowhere zero.
    """

    certificate_sub: SippCertificate
    certificate_full: SippCertificate
    rows_independent: bool
    b_nowhere_zero: bool
    drop_implication_holds: bool
    extend_hypotheses_met: bool
    extend_implication_holds: bool


def check_remove_row(bhat: Mat, b, tol: float = DEFAULT_TOL) -> RemoveRowReport:
    m, n = bhat.shape
    if len(b) != n:
        raise ShapeError("new row length must match the column count")
    if not (1 <= m <= n - 1):
        raise ShapeError("requires 1 <= rows <= cols - 1")
    conv = Fraction if bhat.exact else float
    full = Mat(m + 1, n, bhat.entries + (tuple(conv(x) for x in b),), bhat.exact)
    cert_sub = has_sipp(bhat, tol)
    cert_full = has_sipp(full, tol)
    independent = rank(full, tol) == m + 1
    nowhere_zero = all(not is_zero(conv(x), tol) for x in b)
    hyp = cert_sub.has_sipp and independent and nowhere_zero
    return RemoveRowReport(
        certificate_sub=cert_sub,
        certificate_full=cert_full,
        rows_independent=independent,
        b_nowhere_zero=nowhere_zero,
        drop_implication_holds=(not cert_full.has_sipp) or cert_sub.has_sipp,
        extend_hypotheses_met=hyp,
        extend_implication_holds=(not hyp) or cert_full.has_sipp,
    )


def verify_witness(M: Mat, X: Mat, tol: float = DEFAULT_TOL) -> bool:
    """Check a claimed witness: ``X`` symmetric, nonzero, ``(X M) ∘ M = O``."""
    if X.shape != (M.rows, M.rows):
        return False
    sym = all(is_zero(X[i, j] - X[j, i], tol)
              for i in range(X.rows) for j in range(i + 1, X.cols))
    nonzero = any(not is_zero(x, tol) for row in X.entries for x in row)
    prod = hadamard(X @ M, M)
    vanishes = all(is_zero(x, max(tol, 1e-8)) for row in prod.entries for x in row)
    return sym and nonzero and vanishes
