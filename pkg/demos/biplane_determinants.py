"""Two orthogonal matrices with one sign pattern and opposite determinants.

The 7x7 biplane pattern scaled by 1/2 is orthogonal with determinant -1 and
has the strong inner product property, so every super pattern of it allows
orthogonality.  Realizing the nowhere-zero super pattern I - K two ways gives
matrices with the same signs but oppositely signed determinants: retraction
stays near the seed (det -1), while the Cayley transform always lands in the
rotation component (det +1).
"""

from sipp import gallery
from sipp.linalg import determinant, rank
from sipp.realize import realize_superpattern, realize_via_cayley
from sipp.signpat import sign_of, super_pattern
from sipp.sipp_core import has_sipp, inverse_route_system


def main():
    q = gallery.biplane_orthogonal()
    print("seed pattern (21 zeros, the maximum a 7x7 SIPP matrix can carry):")
    print(sign_of(q).to_text())
    print()

    cert = has_sipp(q)
    system, _, _ = inverse_route_system(q)
    print(f"SIPP verdict: {cert.verdict.value} "
          f"(symmetric system rank {cert.system_rank})")
    print(f"inverse-route symmetry system: {system.shape[0]}x{system.shape[1]}, "
          f"rank {rank(system)}")
    print(f"det(seed) = {determinant(q)}")
    print()

    k = gallery.biplane_skew()
    target = super_pattern(sign_of(q), sign_of(k.scale(-1)))
    print("target: the nowhere-zero super pattern I - K")

    via_cayley = realize_via_cayley(k)
    print(f"  Cayley route:     eps = {via_cayley.epsilon:.6g}  "
          f"residual = {via_cayley.residual:.2e}  det sign = {via_cayley.det_sign:+d}")

    via_retraction = realize_superpattern(q, target)
    print(f"  retraction route: eps = {via_retraction.epsilon:.6g}  "
          f"residual = {via_retraction.residual:.2e}  det sign = {via_retraction.det_sign:+d}")

    assert via_cayley.achieved == via_retraction.achieved == target
    print()
    print("same sign pattern, determinants +1 and -1: the determinant is not "
          "a function of the sign pattern at order 7.")


if __name__ == "__main__":
    main()
