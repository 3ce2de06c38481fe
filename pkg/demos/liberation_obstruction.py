"""An orthogonal matrix with eight zeros whose liberation is obstructed.

The matrix below lacks the SIPP, so not every super pattern of its sign
pattern is automatically certified.  The tangent verification matrix has a
one-dimensional left nullspace; its single alternating vector tells exactly
which sign requests on the zero positions are unreachable: those whose
products against the vector are all of one sign.  Every other request is
certified and realized numerically.
"""

from sipp.errors import ObstructionError
from sipp.gallery import obstructed_orthogonal
from sipp.realize import realize_superpattern
from sipp.signpat import SignPattern, sign_of
from sipp.sipp_core import has_sipp
from sipp.verification import liberation_obstructions


def target_with(q, fills):
    rows = [list(r) for r in sign_of(q).entries]
    for (i, j), v in fills.items():
        rows[i - 1][j - 1] = v
    return SignPattern.from_rows(rows)


def main():
    q = obstructed_orthogonal()
    print("sign pattern (eight zeros):")
    print(sign_of(q).to_text())
    print()
    print("SIPP verdict:", has_sipp(q).verdict.value)

    obs = liberation_obstructions(q)[0]
    print("obstruction vector on the zero positions:")
    for label, value in zip(obs.labels, obs.vector):
        print(f"  position {label}: {value:+.0f}")
    print()

    aligned = {lab: int(v) for lab, v in zip(obs.labels, obs.vector)}
    print("request aligned with the obstruction (blocked):")
    try:
        realize_superpattern(q, target_with(q, aligned))
    except ObstructionError as exc:
        print(f"  rejected: {exc}")

    mixed = dict(aligned)
    mixed[(3, 1)] = -mixed[(3, 1)]
    print("same request with one sign flipped (mixed products, certified):")
    res = realize_superpattern(q, target_with(q, mixed))
    print(f"  realized with eps = {res.epsilon:.3g}, residual = {res.residual:.2e}")


if __name__ == "__main__":
    main()
