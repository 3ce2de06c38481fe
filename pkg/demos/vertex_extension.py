"""Bordering a nowhere-zero orthogonal matrix by a new row and column.

Direct sums [1] + Q never have the SIPP (the new row has disjoint support),
yet a tangent direction built from a vector k can still liberate the new
border: when the coordinate space cut out by k^T Q meets the image space
Q^T {y : k ∘ y = 0} only at zero, every super pattern of the bordered sign
pattern allows orthogonality.
"""

from sipp.gallery import vertex_extension_example
from sipp.linalg import Mat, direct_sum
from sipp.realize import realize_superpattern
from sipp.sipp_core import has_sipp
from sipp.verification import add_vertex_check


def main():
    q, k = vertex_extension_example()
    print("base orthogonal matrix (times 3):")
    for row in q.entries:
        print("  ", [str(x * 3) for x in row])
    print("k =", [str(x) for x in k])
    print()

    res = add_vertex_check(q, k)
    print(f"coordinate space dim = {res.dim_coordinate_space}, "
          f"image space dim = {res.dim_image_space}, "
          f"certified = {res.certified}")
    print("certified bordered pattern:")
    print(res.pattern.to_text())
    print()

    seed = direct_sum(Mat.identity(1), q)
    print("direct-sum seed verdict:", has_sipp(seed).verdict.value,
          "(bordering always breaks the SIPP)")
    realized = realize_superpattern(seed, res.pattern)
    print(f"pattern realized anyway: eps = {realized.epsilon:.3g}, "
          f"residual = {realized.residual:.2e}, det sign = {realized.det_sign:+d}")


if __name__ == "__main__":
    main()
