"""The orthogonal Hessenberg family: exact SIPP certificates at every order.

The integer matrix with rows (1,-1,0,...), (1,1,-2,0,...), ..., (1,...,1)
has exactly orthogonal rows, and scaling rows to unit length does not affect
the SIPP.  Because the family has the SIPP, every super pattern of its sign
pattern allows orthogonality -- including ones that no sequence of plane
rotations applied to the family can reach.
"""

from sipp import gallery
from sipp.constructions import hessenberg_orthogonal
from sipp.realize import realize_superpattern
from sipp.signpat import SignPattern, sign_of, super_pattern
from sipp.sipp_core import has_sipp


def main():
    for n in range(2, 9):
        h = hessenberg_orthogonal(n)
        cert = has_sipp(h)
        print(f"order {n}: exact SIPP verdict = {cert.verdict.value}")
    print()

    q = hessenberg_orthogonal(5, normalized=True)
    base = sign_of(q)
    print("order-5 sign pattern:")
    print(base.to_text())
    print()

    ones = SignPattern.from_rows([[1] * 5] * 5)
    filled = realize_superpattern(q, super_pattern(base, ones))
    print(f"nowhere-zero super pattern realized: eps = {filled.epsilon:.3g}, "
          f"residual = {filled.residual:.2e}")

    target = gallery.givens_unreachable_pattern()
    print()
    print("rotation-unreachable super pattern (fills (1,4),(1,5) while "
          "keeping (1,3),(2,4) zero):")
    print(target.to_text())
    res = realize_superpattern(q, target)
    print(f"realized anyway: eps = {res.epsilon:.3g}, residual = {res.residual:.2e}")


if __name__ == "__main__":
    main()
