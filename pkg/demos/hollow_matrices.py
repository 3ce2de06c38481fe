"""Hollow orthogonal matrices and why the SIPP is not a pattern property.

A hollow matrix is square with a zero diagonal and nowhere-zero off-diagonal
part.  A hollow orthogonal matrix has the SIPP exactly when no signature
scaling makes it symmetric, which reduces to a linear-time 2-coloring check.
Rotating a symmetric example inside its own sign pattern flips the verdict:
two matrices with identical sign patterns, one with the SIPP and one without.
"""

import math

from sipp import gallery
from sipp.constructions import (GivensSpec, hollow_orthogonal, post_apply,
                                pre_apply)
from sipp.realize import orthogonality_residual
from sipp.signpat import sign_of
from sipp.sipp_core import hollow_sipp_by_signature


def main():
    print("hollow orthogonal matrices that resist signature symmetrization:")
    for n in range(4, 13):
        q = hollow_orthogonal(n)
        cert = hollow_sipp_by_signature(q)
        print(f"  order {n:2d}: residual {orthogonality_residual(q):.1e}  "
              f"verdict {cert.verdict.value}")
    print("  (orders 1 and 3 admit no hollow orthogonal matrix at all;"
          " order 2 only symmetric ones)")
    print()

    a = gallery.symmetric_hollow6()
    ca = hollow_sipp_by_signature(a)
    print("symmetric conference-style matrix of order 6:",
          ca.verdict.value, "(signatures found)" if ca.signatures else "")

    spec = GivensSpec(6, 1, 2, math.pi / 6)
    b = post_apply(spec, pre_apply(spec, a))
    cb = hollow_sipp_by_signature(b)
    same = sign_of(b) == sign_of(a)
    print(f"conjugated by a 30-degree rotation: {cb.verdict.value} "
          f"(sign pattern unchanged: {same})")
    print()
    print("identical sign patterns, opposite verdicts: having the SIPP "
          "depends on the matrix, not just on its pattern.")


if __name__ == "__main__":
    main()
