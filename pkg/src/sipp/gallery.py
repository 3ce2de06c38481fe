"""Named example matrices used across the demos and the test suite."""

from __future__ import annotations

import math
from fractions import Fraction

from .linalg import Mat
from .signpat import SignPattern

_BIPLANE_S = (
    (1, 0, 1, 0, -1, 0, 1),
    (-1, 1, 0, 1, 0, 0, 1),
    (0, 1, 1, 0, 0, 1, -1),
    (1, 0, -1, 1, 0, 1, 0),
    (0, -1, 1, 1, 1, 0, 0),
    (-1, -1, 0, 0, -1, 1, 0),
    (0, 0, 0, -1, 1, 1, 1),
)

# Skew-symmetric ±1 direction K with I - K a super pattern of the biplane
# pattern.  The support of the biplane pattern is a tournament, which pins
# every off-diagonal entry of K to the negated support sign.
_BIPLANE_K = (
    (0, -1, -1, 1, 1, -1, -1),
    (1, 0, 1, -1, -1, -1, -1),
    (1, -1, 0, -1, 1, -1, 1),
    (-1, 1, 1, 0, 1, -1, -1),
    (-1, 1, -1, -1, 0, -1, 1),
    (1, 1, 1, 1, 1, 0, 1),
    (1, 1, -1, 1, -1, -1, 0),
)


def biplane_pattern() -> SignPattern:
    """7x7 sign pattern with 21 zeros that allows orthogonality sharply:
    the zero count meets the SIPP bound ``nm - m(m+1)/2`` with equality."""
    return SignPattern.from_rows(_BIPLANE_S)


def biplane_orthogonal() -> Mat:
    """The exact orthogonal realization: the pattern itself scaled by 1/2."""
    return Mat.exact_matrix([[Fraction(x, 2) for x in row] for row in _BIPLANE_S])


def biplane_skew() -> Mat:
    """Exact skew ±1 matrix ``K`` whose Cayley images realize pattern ``I - K``."""
    return Mat.exact_matrix(_BIPLANE_K)


def symmetric_hollow6() -> Mat:
    """Symmetric conference-style hollow orthogonal matrix of order 6.

    Being symmetric and hollow, it fails the SIPP even though small rotations
    of it with the same sign pattern have the SIPP.
    """
    rows = (
        (0, 1, 1, 1, 1, 1),
        (1, 0, 1, -1, -1, 1),
        (1, 1, 0, 1, -1, -1),
        (1, -1, 1, 0, 1, -1),
        (1, -1, -1, 1, 0, 1),
        (1, 1, -1, -1, 1, 0),
    )
    s = 1.0 / math.sqrt(5.0)
    return Mat.float_matrix([[s * x for x in row] for row in rows])


def obstructed_orthogonal(u=None, v=None) -> Mat:
    """Orthogonal matrix with eight zeros that lacks the SIPP.

    Built from unit vectors ``u ⊥ v`` (both nowhere zero, with
    ``I - u u^T - v v^T`` nowhere zero) as two coupled 2x2 reflection blocks
    bordered by ``u`` and ``v``.  Exactly one linear obstruction blocks
    liberating its zeros, so most but not all super patterns of its sign
    pattern allow orthogonality.
    """
    if u is None:
        u = [x / math.sqrt(14.0) for x in (1.0, 2.0, 3.0)]
    if v is None:
        v = [x / math.sqrt(21.0) for x in (4.0, 1.0, -2.0)]
    n = len(u)
    if len(v) != n:
        raise ValueError("u and v must share a length")
    w = 1.0 / math.sqrt(2.0)
    top = [
        [-0.5, 0.5, 0.0, 0.0] + [w * x for x in u],
        [0.5, -0.5, 0.0, 0.0] + [w * x for x in u],
        [0.0, 0.0, -0.5, 0.5] + [w * x for x in v],
        [0.0, 0.0, 0.5, -0.5] + [w * x for x in v],
    ]
    bottom = []
    for k in range(n):
        proj = [(1.0 if k == l else 0.0) - u[k] * u[l] - v[k] * v[l] for l in range(n)]
        bottom.append([w * u[k], w * u[k], w * v[k], w * v[k]] + proj)
    return Mat.float_matrix(top + bottom)


def vertex_extension_example() -> tuple[Mat, tuple]:
    """Nowhere-zero rational orthogonal ``Q`` (order 3) and vector ``k``
    whose coordinate/image spaces meet trivially, certifying a 4x4 pattern."""
    q = Mat.exact_matrix([[Fraction(x, 3) for x in row]
                          for row in ((1, 2, 2), (2, 1, -2), (2, -2, 1))])
    k = (Fraction(0), Fraction(2), Fraction(1))
    return q, k


def johnson_waters_pattern() -> SignPattern:
    """4x5 pattern allowing row orthogonality although none of its 4x4
    column-deleted subpatterns allows orthogonality."""
    return SignPattern.from_rows([
        (-1, 1, -1, 1, 1),
        (1, -1, 1, -1, 1),
        (1, 1, 1, 1, -1),
        (1, 1, 1, 1, 1),
    ])


def givens_unreachable_pattern() -> SignPattern:
    """5x5 super pattern of the orthogonal Hessenberg pattern that allows
    orthogonality yet cannot be reached from a Hessenberg matrix by plane
    rotations alone."""
    return SignPattern.from_rows([
        (1, -1, 0, 1, 1),
        (1, 1, -1, 0, 1),
        (1, 1, 1, -1, 1),
        (1, 1, 1, 1, -1),
        (1, 1, 1, 1, 1),
    ])
