"""Enumerate small sign patterns, classify them, and persist atlases.

Classification is conservative in both directions: ``CertifiedBlocked`` only
ever cites a stated necessary condition (sign-compatibility of rows/columns,
zero-submatrix bounds), and ``CertifiedAllows`` always carries a concrete
row orthogonal realization that re-verifies.  Failed searches yield
``Unknown`` -- a failed numerical hunt is never evidence of blocking.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import AtlasFormatError, DimensionCapError, ShapeError
from .linalg import (DEFAULT_TOL, Mat, matrix_from_jsonable, matrix_to_jsonable,
                     read_matrix, write_matrix)
from .realize import orthogonality_residual, realize_superpattern
from .signpat import (SignPattern, apply_signed_perms, apply_signed_perms_mat,
                      canonical_form_with_witness, is_canonical_form,
                      is_super_pattern, iter_signed_perms,
                      rows_potentially_orthogonal, sign_of)

ATLAS_SCHEMA = "sipp-atlas/1"

ALLOWS = "CertifiedAllows"
BLOCKED = "CertifiedBlocked"
UNKNOWN = "Unknown"

#: Skip the seed orbit search when the signed-permutation group is larger.
SEED_SEARCH_CAP = 300_000


@dataclass(frozen=True)
class Classification:
    """A pattern with its certificate.

    ``provenance`` names the certifying route (seed construction, direct
    sum, numeric projection, or the violated necessary condition).
    """

    pattern: SignPattern
    status: str
    provenance: str
    violated: str | None = None
    realization: Mat | None = None
    residual: float | None = None

    def to_jsonable(self) -> dict:
        return {
            "pattern": self.pattern.to_json_grid(),
            "status": self.status,
            "provenance": self.provenance,
            "violated": self.violated,
            "realization": matrix_to_jsonable(self.realization)
            if self.realization is not None else None,
            "residual": self.residual,
        }

    @staticmethod
    def from_jsonable(obj: dict) -> "Classification":
        return Classification(
            pattern=SignPattern.from_rows(obj["pattern"]),
            status=obj["status"],
            provenance=obj.get("provenance", ""),
            violated=obj.get("violated"),
            realization=matrix_from_jsonable(obj["realization"])
            if obj.get("realization") else None,
            residual=obj.get("residual"),
        )


# -- enumeration -----------------------------------------------------------------


def enumerate_patterns(m: int, n: int, max_zeros: int | None = None,
                       dedup: bool = True):
    """Yield all ``m x n`` patterns with at most ``max_zeros`` zeros.

    With ``dedup=True`` only canonical forms are emitted, one per
    sign-equivalence class.  A canonical pattern always opens with the row
    ``1^k 0^(n-k)`` where ``k`` is the largest row support, so generation
    fixes the first row and draws the rest from rows of support at most
    ``k`` before running the full canonical check.  Exhaustive enumeration
    is capped at ``n <= 5``.
    """
    if not (1 <= m <= n):
        raise ShapeError("requires 1 <= m <= n")
    if n > 5:
        raise DimensionCapError("exhaustive enumeration is capped at n <= 5")
    cap = m * n if max_zeros is None else max_zeros
    if not dedup:
        for flat in itertools.product((1, 0, -1), repeat=m * n):
            if flat.count(0) <= cap:
                yield SignPattern(m, n, tuple(flat[i * n:(i + 1) * n]
                                              for i in range(m)))
        return
    # Canonical patterns have non-decreasing rows under the +1 < -1 < 0
    # entry order, so draw the tail rows from a sorted pool.
    key = {1: 0, -1: 1, 0: 2}
    all_rows = sorted(itertools.product((1, 0, -1), repeat=n),
                      key=lambda r: tuple(key[x] for x in r))
    for k in range(n, -1, -1):
        first = tuple([1] * k + [0] * (n - k))
        pool = [r for r in all_rows if n - r.count(0) <= k]
        for rest in itertools.combinations_with_replacement(pool, m - 1):
            entries = (first,) + rest
            if sum(r.count(0) for r in entries) > cap:
                continue
            s = SignPattern(m, n, entries)
            if is_canonical_form(s):
                yield s


# -- necessary conditions ---------------------------------------------------------


def _zero_block_violation(S: SignPattern) -> str | None:
    """Zero submatrix tests: a ``p x q`` zero block forces ``p + q <= n``
    always, and ``p + q <= n - 1`` when the complementary lower-left block
    carries a nonzero entry."""
    m, n = S.shape
    if m > 12:
        return None
    zero_sets = [frozenset(j for j in range(n) if S[i, j] == 0) for i in range(m)]
    common: dict[int, frozenset] = {}
    best = None  # (p + q, strict, p, q)
    for mask in range(1, 1 << m):
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        cz = zero_sets[i] if not rest else common[rest] & zero_sets[i]
        common[mask] = cz
        p, q = mask.bit_count(), len(cz)
        if q == 0 or p + q < n:
            continue
        if p + q == n:
            other_rows = [r for r in range(m) if not mask >> r & 1]
            other_cols = [c for c in range(n) if c not in cz]
            if not any(S[r, c] != 0 for r in other_rows for c in other_cols):
                continue
        cand = (p + q, p + q > n, p, q)
        if best is None or cand[:2] > best[:2]:
            best = cand
    if best is None:
        return None
    total, strict, p, q = best
    if strict:
        return f"{p} x {q} zero submatrix with p + q > n"
    return f"{p} x {q} zero submatrix with p + q = n beside nonzero entries"


def necessary_violation(S: SignPattern) -> str | None:
    """First stated necessary condition that ``S`` violates, if any."""
    if S.rows > S.cols:
        return "more rows than columns"
    if not rows_potentially_orthogonal(S):
        return "rows are not potentially orthogonal"
    if S.rows == S.cols and not rows_potentially_orthogonal(S.T):
        return "columns are not potentially orthogonal"
    v = _zero_block_violation(S)
    if v:
        return v
    if S.rows == S.cols:
        v = _zero_block_violation(S.T)
        if v:
            return v + " (transposed)"
    return None


# -- sufficiency routes -----------------------------------------------------------


def _seed_pool(m: int, n: int) -> list[tuple[str, Mat]]:
    """Row orthogonal SIPP seeds for shape ``(m, n)``, cached on disk when
    ``SIPP_ATLAS_CACHE`` points at a directory."""
    from .constructions import hessenberg_orthogonal, hollow_orthogonal

    cache = os.environ.get("SIPP_ATLAS_CACHE")
    seeds: list[tuple[str, Mat]] = []

    def add(name: str, builder):
        path = os.path.join(cache, f"seed-{name}-{m}x{n}.json") if cache else None
        if path and os.path.exists(path):
            seeds.append((name, read_matrix(path)))
            return
        mat = builder()
        if path:
            os.makedirs(cache, exist_ok=True)
            write_matrix(path, mat)
        seeds.append((name, mat))

    if m == n and n >= 2:
        add("hessenberg", lambda: hessenberg_orthogonal(n, normalized=True))
        if n >= 4:
            add("hollow", lambda: hollow_orthogonal(n))
    elif m < n and m >= 2:
        add("hessenberg-rows",
            lambda: hessenberg_orthogonal(n, normalized=True).take_rows(range(m)))
    return seeds


def _seed_route(S: SignPattern, tol: float, res: float):
    m, n = S.shape
    group = (2 ** m) * math.factorial(m) * (2 ** n) * math.factorial(n)
    if group > SEED_SEARCH_CAP:
        return None
    for name, seed in _seed_pool(m, n):
        seed_sign = sign_of(seed, tol)
        for p1 in iter_signed_perms(m):
            for p2 in iter_signed_perms(n):
                moved = apply_signed_perms(seed_sign, p1, p2)
                if not is_super_pattern(S, moved):
                    continue
                qmoved = apply_signed_perms_mat(seed.to_float(), p1, p2)
                result = realize_superpattern(qmoved, S, res=res, tol=tol)
                if result.success:
                    return (f"seed:{name}", result.qstar, result.residual)
    return None


def _numeric_route(S: SignPattern, rng_seed: int, tol: float, res: float,
                   restarts: int = 8, iters: int = 600):
    """Alternating projection between the Stiefel manifold and the sign cone."""
    m, n = S.shape
    c = np.array(S.entries, dtype=float)
    rng = np.random.default_rng(rng_seed)
    for _ in range(restarts):
        x = c * (0.5 + 0.5 * rng.random((m, n)))
        for _ in range(iters):
            u, sv, vh = np.linalg.svd(x, full_matrices=False)
            if sv[-1] <= 1e-13 * max(sv[0], 1.0):
                break
            q = u @ vh
            resid = float(np.abs(q @ q.T - np.eye(m)).max())
            zeros_ok = float(np.abs(q[c == 0]).max()) if (c == 0).any() else 0.0
            signs_ok = bool(np.all(np.sign(np.where(np.abs(q) <= tol, 0.0, q)) == c))
            if resid <= res and zeros_ok <= tol and signs_ok:
                return Mat.from_numpy(q), resid
            x = np.where(c == 0, 0.0, np.where(np.sign(q) == c, q, c * 0.05))
            x = np.where((c != 0) & (np.abs(x) < 1e-4), c * 1e-4, x)
    return None


def _components(S: SignPattern):
    """Connected components of the bipartite support graph (rows vs. cols)."""
    m, n = S.shape
    parent = list(range(m + n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for i in range(m):
        for j in range(n):
            if S[i, j] != 0:
                union(i, m + j)
    comps: dict[int, tuple[list[int], list[int]]] = {}
    for i in range(m):
        comps.setdefault(find(i), ([], []))[0].append(i)
    for j in range(n):
        comps.setdefault(find(m + j), ([], []))[1].append(j)
    return list(comps.values())


def classify(S: SignPattern, *, numeric: bool = True, rng_seed: int = 7,
             tol: float = DEFAULT_TOL, res: float = 1e-10) -> Classification:
    """Classify ``S`` against the toolkit's certificates.

    The pattern is first reduced to its canonical representative (and, for
    square shapes, the lesser of the pattern and its transpose), so the
    status is constant on equivalence classes by construction; any found
    realization is transformed back to the original frame.
    """
    canon, p1, p2 = canonical_form_with_witness(S)
    transposed = False
    if S.rows == S.cols:
        canon_t, q1, q2 = canonical_form_with_witness(S.T)
        if canon_t.sort_key() < canon.sort_key():
            canon, p1, p2, transposed = canon_t, q1, q2, True
    result = _classify_canonical(canon, numeric=numeric, rng_seed=rng_seed,
                                 tol=tol, res=res)
    if result.realization is None:
        return Classification(S, result.status, result.provenance,
                              result.violated, None, result.residual)
    back = apply_signed_perms_mat(result.realization, p1.inverse(), p2.inverse())
    if transposed:
        back = back.T
    return Classification(S, result.status, result.provenance, result.violated,
                          back, result.residual)


def _classify_canonical(S: SignPattern, *, numeric: bool, rng_seed: int,
                        tol: float, res: float) -> Classification:
    m, n = S.shape
    violated = necessary_violation(S)
    if violated:
        return Classification(S, BLOCKED, "necessary-condition", violated)
    if m == 1:
        norm = math.sqrt(float(sum(x * x for x in S.entries[0])))
        row = [[x / norm for x in S.entries[0]]]
        return Classification(S, ALLOWS, "unit-row", None,
                              Mat.float_matrix(row), 0.0)
    if m == n:
        per_row = [sum(1 for x in row if x != 0) for row in S.entries]
        per_col = [sum(1 for row in S.entries if row[j] != 0) for j in range(n)]
        if all(c == 1 for c in per_row) and all(c == 1 for c in per_col):
            return Classification(S, ALLOWS, "signed-permutation", None,
                                  S.to_mat(exact=False), 0.0)
        comps = _components(S)
        if len(comps) > 1:
            return _direct_sum_route(S, comps, numeric=numeric,
                                     rng_seed=rng_seed, tol=tol, res=res)
    hit = _seed_route(S, tol, res)
    if hit:
        name, q, resid = hit
        return Classification(S, ALLOWS, name, None, q, resid)
    if numeric:
        found = _numeric_route(S, rng_seed, tol, res)
        if found:
            q, resid = found
            return Classification(S, ALLOWS, "numeric-projection", None, q, resid)
    return Classification(S, UNKNOWN, "no-certificate")


def _direct_sum_route(S: SignPattern, comps, *, numeric: bool, rng_seed: int,
                      tol: float, res: float) -> Classification:
    n = S.rows
    # Zero-block necessary checks already force square components here.
    parts = []
    for rows, cols in comps:
        sub = SignPattern.from_rows([[S[i, j] for j in cols] for i in rows])
        parts.append((rows, cols, classify(sub, numeric=numeric,
                                           rng_seed=rng_seed, tol=tol, res=res)))
    if any(p.status == BLOCKED for _, _, p in parts):
        bad = next(p for _, _, p in parts if p.status == BLOCKED)
        return Classification(S, BLOCKED, "direct-sum",
                              f"component blocked: {bad.violated}")
    if any(p.status == UNKNOWN for _, _, p in parts):
        return Classification(S, UNKNOWN, "direct-sum")
    grid = [[0.0] * n for _ in range(n)]
    worst = 0.0
    for rows, cols, part in parts:
        q = part.realization.to_float()
        worst = max(worst, part.residual or 0.0)
        for a, i in enumerate(rows):
            for b, j in enumerate(cols):
                grid[i][j] = q[a, b]
    return Classification(S, ALLOWS, "direct-sum", None,
                          Mat.float_matrix(grid), worst)


# -- atlas ------------------------------------------------------------------------


def build_atlas(m: int, n: int, *, max_zeros: int | None = None,
                numeric: bool = True, rng_seed: int = 7,
                tol: float = DEFAULT_TOL, res: float = 1e-10) -> list[Classification]:
    """Classify every equivalence class of ``m x n`` patterns.

    Square atlases dedup by the lesser of the canonical forms of ``S`` and
    ``S^T``, matching the coarser notion of equivalence that also allows
    transposition.
    """
    out = []
    for s in enumerate_patterns(m, n, max_zeros=max_zeros, dedup=True):
        if m == n:
            ct = canonical_form_with_witness(s.T)[0]
            if ct.sort_key() < s.sort_key():
                continue
        out.append(classify(s, numeric=numeric, rng_seed=rng_seed, tol=tol, res=res))
    return out


def audit_atlas(entries, tol: float = DEFAULT_TOL, res: float = 1e-10) -> list[str]:
    """Consistency audit; returns human-readable violation strings."""
    problems = []
    for idx, e in enumerate(entries):
        tag = f"entry {idx}"
        if e.status == ALLOWS:
            if necessary_violation(e.pattern):
                problems.append(f"{tag}: allows yet violates a necessary condition")
            if e.realization is None:
                problems.append(f"{tag}: allows without a realization")
                continue
            if orthogonality_residual(e.realization) > res:
                problems.append(f"{tag}: realization residual exceeds {res}")
            if sign_of(e.realization.to_float(), tol) != e.pattern:
                problems.append(f"{tag}: realization has the wrong sign pattern")
        elif e.status == BLOCKED:
            if not e.violated:
                problems.append(f"{tag}: blocked without naming a condition")
        elif e.status != UNKNOWN:
            problems.append(f"{tag}: unknown status {e.status!r}")
    return problems


def save_atlas(path, entries) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"schema": ATLAS_SCHEMA, "count": len(entries)}) + "\n")
        for e in entries:
            fh.write(json.dumps(e.to_jsonable()) + "\n")


def load_atlas(path) -> list[Classification]:
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise AtlasFormatError("empty atlas file", 1)
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise AtlasFormatError(f"bad header: {exc}", 1) from exc
    if not isinstance(header, dict) or header.get("schema") != ATLAS_SCHEMA:
        raise AtlasFormatError(f"unsupported schema (want {ATLAS_SCHEMA})", 1)
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            entries.append(Classification.from_jsonable(json.loads(line)))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise AtlasFormatError(str(exc), lineno) from exc
    return entries
