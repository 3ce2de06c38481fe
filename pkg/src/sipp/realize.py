"""Numerical realization of certified sign patterns.

A SIPP (or liberated) seed ``Q`` guarantees that nearby orthogonal matrices
exist with any certified super pattern.  The engine makes that concrete:
solve for a unit tangent direction ``B`` whose entries on the zeros of ``Q``
match the requested signs, then retract ``Q + eps*B`` back onto the manifold
of row orthogonal matrices (polar factor), halving ``eps`` until the sign
pattern locks in.  Entries meant to stay zero drift only at order ``eps^2``
under the polar retraction, so a small enough ``eps`` always separates them
from the liberated entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (ObstructionError, RankDeficiencyError, ShapeError,
                     StructureError, TargetPatternError)
from .linalg import DEFAULT_TOL, Mat, vec_index_pairs
from .signpat import SignPattern, is_super_pattern, sign_of
from .sipp_core import Verdict, has_sipp
from .verification import (TangentDirection, liberate, liberation_obstructions,
                           orthogonal_completion, tangent_space_matrix)


def orthogonality_residual(Q: Mat) -> float:
    """``max |Q Q^T - I|`` as a float; exactly 0.0 for exact orthogonal input."""
    if Q.exact:
        from .sipp_core import orthogonality_defect

        return orthogonality_defect(Q)
    qf = Q.to_numpy()
    return float(np.abs(qf @ qf.T - np.eye(Q.rows)).max())


def retract_row_orthogonal(M: Mat, tol: float = DEFAULT_TOL) -> Mat:
    """Nearest row orthogonal matrix in Frobenius distance (polar factor)."""
    if M.rows > M.cols:
        raise ShapeError("retraction requires m <= n")
    a = M.to_numpy()
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    if s[-1] <= tol * max(s[0], 1.0):
        raise RankDeficiencyError("input does not have full row rank")
    return Mat.from_numpy(u @ vh)


@dataclass(frozen=True)
class RealizationResult:
    """Outcome of a realization attempt.

    On success ``achieved`` equals the requested pattern and ``residual``
    is at most the configured bound, both re-checked on the final matrix.
    Failures are first-class: ``success=False`` with a reason in ``detail``.
    """

    qstar: Mat
    epsilon: float
    residual: float
    achieved: SignPattern
    det_sign: int | None
    success: bool
    detail: str = ""


def _det_sign(Q: Mat) -> int | None:
    if not Q.is_square:
        return None
    d = float(np.linalg.det(Q.to_numpy()))
    return 1 if d > 0 else -1


def solve_tangent_direction(Q: Mat, target: SignPattern,
                            tol: float = DEFAULT_TOL) -> Mat:
    """A unit-Frobenius tangent direction matching ``target`` on the zeros of ``Q``.

    First tries the least-squares solve that puts magnitude one at every
    liberated position and exact zeros elsewhere; if the prescription is
    inconsistent, a linear program searches the sign orthant instead.
    Raises :class:`ObstructionError` when no tangent direction fits.
    """
    s = sign_of(Q, tol)
    if not is_super_pattern(target, s):
        raise TargetPatternError("target must be a super pattern of sgn(Q)")
    qf = Q.to_float()
    p = orthogonal_completion(qf, tol)
    ts = tangent_space_matrix(qf, p, tol)
    pairs = vec_index_pairs(Q.rows, Q.cols)
    zrows = [r for r, (i, j) in enumerate(pairs) if s[i, j] == 0]
    if not zrows:
        raise TargetPatternError("Q has no zero entries to liberate")
    tsn = ts.data.to_numpy()
    psi = tsn[zrows]
    z = np.array([float(target[pairs[r][0], pairs[r][1]]) for r in zrows])
    coeff, *_ = np.linalg.lstsq(psi, z, rcond=None)
    if np.abs(psi @ coeff - z).max() > 1e-9:
        coeff = _sign_feasible_coefficients(Q, psi, z, tol)
    bvec = tsn @ coeff
    b = np.array(bvec).reshape(Q.cols, Q.rows).T  # undo column stacking
    b /= np.linalg.norm(b)
    return Mat.from_numpy(b)


def _sign_feasible_coefficients(Q: Mat, psi: np.ndarray, z: np.ndarray,
                                tol: float) -> np.ndarray:
    from scipy.linalg import null_space
    from scipy.optimize import linprog

    stay = np.where(z == 0)[0]
    free = np.where(z != 0)[0]
    if stay.size:
        ns = null_space(psi[stay], rcond=1e-12)
        if ns.size == 0:
            raise ObstructionError("no tangent direction keeps the requested zeros",
                                   liberation_obstructions(Q, tol))
    else:
        ns = np.eye(psi.shape[1])
    g = np.diag(z[free]) @ (psi[free] @ ns)
    k = g.shape[1]
    # maximize t subject to g d >= t, |d| <= 1, 0 <= t <= 1
    c = np.zeros(k + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-g, np.ones((g.shape[0], 1))])
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(g.shape[0]),
                  bounds=[(-1, 1)] * k + [(0, 1)], method="highs")
    if not res.success or res.x[-1] <= 1e-9:
        raise ObstructionError("requested signs are blocked by a liberation obstruction",
                               liberation_obstructions(Q, tol))
    return ns @ res.x[:-1]


def realize_superpattern(Q: Mat, target: SignPattern, *, eps0: float = 0.25,
                         res: float = 1e-10, max_halvings: int = 60,
                         tol: float = DEFAULT_TOL) -> RealizationResult:
    """Realize ``target`` (a super pattern of ``sgn(Q)``) as an orthogonal matrix.

    ``Q`` should have the SIPP, or the liberation test should certify the
    target; in either case the halving loop below terminates at the first
    ``eps`` whose retraction achieves the target signs at residual ``res``.
    Hitting the halving cap is reported as an inconclusive failure, never as
    a claim that the pattern blocks orthogonality.
    """
    s = sign_of(Q, tol)
    if target.shape != s.shape:
        raise ShapeError("target shape must match Q")
    if not is_super_pattern(target, s):
        raise TargetPatternError("target must be a super pattern of sgn(Q)")
    qf = Q.to_float()
    if target == s:
        return RealizationResult(qf, 0.0, orthogonality_residual(qf), s,
                                 _det_sign(qf), True, "target equals the seed pattern")
    b = solve_tangent_direction(Q, target, tol)
    detail = ""
    if has_sipp(Q, tol).verdict is Verdict.HAS_SIPP:
        detail = "seed has the SIPP"
    else:
        lib = liberate(Q, TangentDirection(b), tol)
        detail = ("liberation certificate holds" if lib.certified
                  else "uncertified heuristic attempt")
    qn = qf.to_numpy()
    bn = b.to_numpy()
    eps = float(eps0)
    for _ in range(max_halvings + 1):
        u, sv, vh = np.linalg.svd(qn + eps * bn, full_matrices=False)
        qe = Mat.from_numpy(u @ vh)
        resid = orthogonality_residual(qe)
        if sign_of(qe, tol) == target and resid <= res:
            return RealizationResult(qe, eps, resid, target, _det_sign(qe),
                                     True, detail)
        eps *= 0.5
    last = Mat.from_numpy(u @ vh)
    return RealizationResult(last, eps * 2.0, orthogonality_residual(last),
                             sign_of(last, tol), _det_sign(last), False,
                             f"halving cap reached without locking the pattern ({detail})")


def realize_via_cayley(K, *, eps0: float = 0.25, res: float = 1e-10,
                       max_halvings: int = 60, tol: float = DEFAULT_TOL) -> RealizationResult:
    """Realize the pattern ``I - K`` from a skew ±1 seed by Cayley transforms.

    ``K`` may be a skew sign pattern or a skew matrix; rational inputs keep
    the whole computation exact, and the determinant is +1 at every step
    (unlike retraction-based realizations, which preserve the seed's
    determinant sign).
    """
    from fractions import Fraction

    from .constructions import cayley

    if isinstance(K, SignPattern):
        if K.T != K.negate():
            raise StructureError("the seed pattern must be skew-symmetric")
        kmat = K.to_mat(exact=True)
    else:
        kmat = K
    n = kmat.rows
    ksign = sign_of(kmat, tol)
    target = SignPattern.from_rows([[1 if i == j else -ksign[i, j]
                                     for j in range(n)] for i in range(n)])
    eps = Fraction(eps0).limit_denominator(1 << 30) if kmat.exact else float(eps0)
    p = None
    for _ in range(max_halvings + 1):
        p = cayley(kmat, eps)
        pf = p.to_float()
        resid = orthogonality_residual(pf)
        if sign_of(pf, tol) == target and resid <= res:
            return RealizationResult(pf, float(eps), resid, target, 1, True,
                                     "Cayley transform (determinant +1)")
        eps = eps / 2
    pf = p.to_float()
    return RealizationResult(pf, float(eps * 2), orthogonality_residual(pf),
                             sign_of(pf, tol), _det_sign(pf), False,
                             "halving cap reached without locking the pattern")
