"""Sign patterns, signed permutations, and sign-equivalence canonical forms.

A sign pattern is a matrix over ``{+1, 0, -1}``.  Two patterns are sign
equivalent when one is obtained from the other by permuting rows/columns and
negating some of them (multiplication by signed permutation matrices on both
sides).  ``canonical_form`` picks a distinguished orbit representative so
that equivalence testing and catalog dedup reduce to equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionCapError, FormatError, ShapeError
from .linalg import DEFAULT_TOL, Mat, is_zero

#: Exhaustive equivalence machinery is factorial; sizes beyond this raise.
EQUIVALENCE_CAP = 7

_CHARS = {1: "+", 0: "0", -1: "-"}
_VALUES = {"+": 1, "0": 0, "-": -1}

# Entry precedence used for the lexicographic orbit minimum: +1 before -1
# before 0, so the least representative front-loads positive support.
_KEY = {1: 0, -1: 1, 0: 2}
_VAL_OF_KEY = {0: 1, 1: -1, 2: 0}


@dataclass(frozen=True)
class SignPattern:
    """An ``m x n`` grid over ``{+1, 0, -1}``."""

    rows: int
    cols: int
    entries: tuple

    @staticmethod
    def from_rows(rows: Iterable[Iterable[int]]) -> "SignPattern":
        data = tuple(tuple(int(x) for x in row) for row in rows)
        m = len(data)
        n = len(data[0]) if m else 0
        if any(len(r) != n for r in data):
            raise ShapeError("ragged rows")
        if any(x not in (-1, 0, 1) for r in data for x in r):
            raise FormatError("sign pattern entries must be -1, 0, or 1")
        return SignPattern(m, n, data)

    @staticmethod
    def from_text(text: str) -> "SignPattern":
        """Parse rows of ``+``, ``-``, ``0`` characters, one row per line."""
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        try:
            return SignPattern.from_rows([[_VALUES[ch] for ch in ln] for ln in lines])
        except KeyError as exc:
            raise FormatError(f"bad sign character {exc}") from exc

    def to_text(self) -> str:
        return "\n".join("".join(_CHARS[x] for x in row) for row in self.entries)

    def to_json_grid(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self.entries[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def T(self) -> "SignPattern":
        return SignPattern(self.cols, self.rows, tuple(zip(*self.entries)))

    def support(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i in range(self.rows) for j in range(self.cols)
                     if self.entries[i][j] != 0)

    def zero_positions(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i in range(self.rows) for j in range(self.cols)
                     if self.entries[i][j] == 0)

    def zero_count(self) -> int:
        return sum(row.count(0) for row in self.entries)

    def negate(self) -> "SignPattern":
        return SignPattern(self.rows, self.cols,
                           tuple(tuple(-x for x in row) for row in self.entries))

    def to_mat(self, exact: bool = True) -> Mat:
        return Mat.from_rows(self.entries, exact=exact)

    def sort_key(self) -> tuple:
        return tuple(_KEY[x] for row in self.entries for x in row)


def sign_of(M: Mat, tol: float = DEFAULT_TOL) -> SignPattern:
    """Entrywise sign of ``M`` with the kind-aware zero test."""
    def sgn(x):
        if is_zero(x, tol):
            return 0
        return 1 if x > 0 else -1

    return SignPattern(M.rows, M.cols,
                       tuple(tuple(sgn(x) for x in row) for row in M.entries))


def super_pattern(S: SignPattern, R: SignPattern) -> SignPattern:
    """The super pattern of ``S`` in the direction of ``R``.

    Keeps the sign of ``S`` wherever ``S`` is nonzero and takes the sign of
    ``R`` on the zeros of ``S``.
    """
    if S.shape != R.shape:
        raise ShapeError("patterns must share a shape")
    return SignPattern(S.rows, S.cols,
                       tuple(tuple(s if s != 0 else r for s, r in zip(rs, rr))
                             for rs, rr in zip(S.entries, R.entries)))


def is_super_pattern(T: SignPattern, S: SignPattern) -> bool:
    """True when ``T`` agrees with ``S`` on the support of ``S``."""
    if T.shape != S.shape:
        raise ShapeError("patterns must share a shape")
    return all(s == 0 or t == s
               for rt, rs in zip(T.entries, S.entries) for t, s in zip(rt, rs))


def _pair_compatible(u: Sequence[int], v: Sequence[int]) -> bool:
    # Sign-compatible with orthogonality: products contain both signs or none.
    pos = neg = False
    for a, b in zip(u, v):
        p = a * b
        if p > 0:
            pos = True
        elif p < 0:
            neg = True
    return (pos and neg) or (not pos and not neg)


def rows_potentially_orthogonal(S: SignPattern) -> bool:
    """Row-side necessary condition: nonzero rows, pairwise sign-compatible."""
    if any(all(x == 0 for x in row) for row in S.entries):
        return False
    return all(_pair_compatible(S.entries[i], S.entries[j])
               for i in range(S.rows) for j in range(i + 1, S.rows))


def potentially_orthogonal(S: SignPattern) -> bool:
    """Classical necessary condition: rows and columns are nonzero and every
    pair of rows (and of columns) is sign-compatible with orthogonality."""
    return rows_potentially_orthogonal(S) and rows_potentially_orthogonal(S.T)


# -- signed permutations -----------------------------------------------------


@dataclass(frozen=True)
class SignedPerm:
    """A signed permutation acting on rows (or columns).

    Acting on rows of ``S`` produces ``signs[i] * S[src[i], :]`` as row ``i``;
    acting on columns produces ``signs[j] * S[:, src[j]]`` as column ``j``.
    """

    src: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        n = len(self.src)
        if sorted(self.src) != list(range(n)) or len(self.signs) != n:
            raise FormatError("signed permutation must be a bijection with signs")
        if any(s not in (-1, 1) for s in self.signs):
            raise FormatError("signs must be +1 or -1")

    @property
    def n(self) -> int:
        return len(self.src)

    @staticmethod
    def identity(n: int) -> "SignedPerm":
        return SignedPerm(tuple(range(n)), (1,) * n)

    def inverse(self) -> "SignedPerm":
        inv = [0] * self.n
        sg = [1] * self.n
        for i, s in enumerate(self.src):
            inv[s] = i
            sg[s] = self.signs[i]
        return SignedPerm(tuple(inv), tuple(sg))

    def compose(self, other: "SignedPerm") -> "SignedPerm":
        """The action 'apply ``other``, then ``self``'."""
        if self.n != other.n:
            raise ShapeError("size mismatch")
        return SignedPerm(tuple(other.src[self.src[i]] for i in range(self.n)),
                          tuple(self.signs[i] * other.signs[self.src[i]]
                                for i in range(self.n)))

    def row_matrix(self, exact: bool = True) -> Mat:
        """The signed permutation matrix ``P`` with ``P @ S`` = this row action."""
        one = Fraction(1) if exact else 1.0
        zero = Fraction(0) if exact else 0.0
        n = self.n
        return Mat(n, n, tuple(tuple(self.signs[i] * one if j == self.src[i] else zero
                                     for j in range(n)) for i in range(n)), exact)

    def col_matrix(self, exact: bool = True) -> Mat:
        """The signed permutation matrix ``P`` with ``S @ P`` = this column action."""
        return self.row_matrix(exact).T


def apply_signed_perms(S: SignPattern, row_perm: SignedPerm, col_perm: SignedPerm) -> SignPattern:
    if row_perm.n != S.rows or col_perm.n != S.cols:
        raise ShapeError("signed permutation sizes must match the pattern")
    return SignPattern(S.rows, S.cols, tuple(
        tuple(row_perm.signs[i] * col_perm.signs[j] * S.entries[row_perm.src[i]][col_perm.src[j]]
              for j in range(S.cols))
        for i in range(S.rows)))


def apply_signed_perms_mat(M: Mat, row_perm: SignedPerm, col_perm: SignedPerm) -> Mat:
    conv = Fraction if M.exact else float
    return Mat(M.rows, M.cols, tuple(
        tuple(conv(row_perm.signs[i] * col_perm.signs[j]) * M.entries[row_perm.src[i]][col_perm.src[j]]
              for j in range(M.cols))
        for i in range(M.rows)), M.exact)


def iter_signed_perms(n: int):
    """All ``2^n * n!`` signed permutations of ``{0..n-1}``."""
    for src in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            yield SignedPerm(src, signs)


def random_signed_perm(rng, n: int) -> SignedPerm:
    src = list(range(n))
    rng.shuffle(src)
    signs = tuple(1 if rng.random() < 0.5 else -1 for _ in range(n))
    return SignedPerm(tuple(src), signs)


# -- canonical form under sign equivalence -----------------------------------
#
# Orderly depth-first search: output rows are chosen one at a time (source row
# plus row sign); columns live in ordered blocks that start as one free block
# and split as emitted rows distinguish them.  A column's sign is fixed the
# first time a chosen row is nonzero there (forced to +1, the least key), so
# earlier emitted rows are never disturbed.  Ties branch; the search keeps the
# lexicographically least completed matrix.


def _emit(row: Sequence[int], eps: int, state: tuple) -> tuple[tuple, tuple]:
    emitted: list[int] = []
    new_state: list[tuple] = []
    for blk in state:
        groups: dict[int, list] = {0: [], 1: [], 2: []}
        for (c, sgn) in blk:
            v = row[c]
            if sgn == 0:
                if v == 0:
                    groups[2].append((c, 0))
                else:
                    groups[0].append((c, eps * v))
            else:
                groups[_KEY[eps * v * sgn]].append((c, sgn))
        for k in (0, 1, 2):
            if groups[k]:
                new_state.append(tuple(groups[k]))
                emitted.extend([k] * len(groups[k]))
    return tuple(emitted), tuple(new_state)


def canonical_form_with_witness(S: SignPattern) -> tuple[SignPattern, SignedPerm, SignedPerm]:
    """Least orbit representative ``C`` plus witnesses with
    ``apply_signed_perms(S, P1, P2) == C``."""
    m, n = S.rows, S.cols
    if min(m, n) > EQUIVALENCE_CAP:
        raise DimensionCapError(
            f"canonical form is dimension-capped at {EQUIVALENCE_CAP}")
    rows = S.entries
    init_state = (tuple((c, 0) for c in range(n)),)
    best: dict = {"keys": None, "rowmap": None, "state": None}

    def dfs(used_mask: int, state: tuple, prefix: tuple, rowmap: tuple):
        d = len(prefix)
        if d == m:
            if best["keys"] is None or prefix < best["keys"]:
                best.update(keys=prefix, rowmap=rowmap, state=state)
            return
        cands: dict = {}
        for s in range(m):
            if used_mask >> s & 1:
                continue
            for eps in (1, -1):
                rk, ns = _emit(rows[s], eps, state)
                cands.setdefault(rk, {}).setdefault((ns, s), eps)
        min_rk = min(cands)
        new_prefix = prefix + (min_rk,)
        if best["keys"] is not None and new_prefix > best["keys"][: d + 1]:
            return
        seen = set()
        for (ns, s), eps in cands[min_rk].items():
            rem = tuple(sorted(rows[r] for r in range(m)
                               if not (used_mask >> r & 1) and r != s))
            if (ns, rem) in seen:
                continue
            seen.add((ns, rem))
            dfs(used_mask | 1 << s, ns, new_prefix, rowmap + ((s, eps),))

    if m == 0 or n == 0:
        return S, SignedPerm.identity(m), SignedPerm.identity(n)
    dfs(0, init_state, (), ())
    keys = best["keys"]
    canon = SignPattern(m, n, tuple(tuple(_VAL_OF_KEY[k] for k in rk) for rk in keys))
    row_perm = SignedPerm(tuple(s for s, _ in best["rowmap"]),
                          tuple(e for _, e in best["rowmap"]))
    col_order = [cs for blk in best["state"] for cs in blk]
    col_perm = SignedPerm(tuple(c for c, _ in col_order),
                          tuple(sgn if sgn != 0 else 1 for _, sgn in col_order))
    return canon, row_perm, col_perm


def canonical_form(S: SignPattern) -> SignPattern:
    """Lexicographically least pattern in the sign-equivalence orbit of ``S``."""
    return canonical_form_with_witness(S)[0]


class _SmallerFound(Exception):
    pass


def is_canonical_form(S: SignPattern) -> bool:
    """True iff ``S`` equals its own canonical form.

    Decides without materializing the canonical form: the orderly search is
    seeded with ``S`` itself and aborts the moment any branch proves a
    strictly smaller orbit element, so enumeration filters stay cheap.
    """
    m, n = S.rows, S.cols
    if min(m, n) > EQUIVALENCE_CAP:
        raise DimensionCapError(
            f"canonical form is dimension-capped at {EQUIVALENCE_CAP}")
    rows = S.entries
    target = tuple(tuple(_KEY[x] for x in row) for row in rows)
    init_state = (tuple((c, 0) for c in range(n)),)

    def dfs(used_mask: int, state: tuple, depth: int):
        cands: dict = {}
        for s in range(m):
            if used_mask >> s & 1:
                continue
            for eps in (1, -1):
                rk, ns = _emit(rows[s], eps, state)
                cands.setdefault(rk, {}).setdefault((ns, s), eps)
        min_rk = min(cands)
        if min_rk < target[depth]:
            raise _SmallerFound
        if min_rk > target[depth]:
            return
        if depth + 1 == m:
            return
        seen = set()
        for (ns, s), _eps in cands[min_rk].items():
            rem = tuple(sorted(rows[r] for r in range(m)
                               if not (used_mask >> r & 1) and r != s))
            if (ns, rem) in seen:
                continue
            seen.add((ns, rem))
            dfs(used_mask | 1 << s, ns, depth + 1)

    if m == 0 or n == 0:
        return True
    try:
        dfs(0, init_state, 0)
    except _SmallerFound:
        return False
    return True


def sign_equivalent(S: SignPattern, T: SignPattern):
    """Witnessing signed permutations with ``apply_signed_perms(S, P1, P2) == T``,
    or None when the patterns are not sign equivalent."""
    if S.shape != T.shape:
        return None
    cs, a1, a2 = canonical_form_with_witness(S)
    ct, b1, b2 = canonical_form_with_witness(T)
    if cs != ct:
        return None
    p1 = b1.inverse().compose(a1)
    p2 = b2.inverse().compose(a2)
    assert apply_signed_perms(S, p1, p2) == T
    return (p1, p2)
