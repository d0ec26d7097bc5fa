"""Sphere combinatorics over F_p^n.

Center uniqueness with its determinant witness, two-square decomposition,
sphere/sphere intersection counts and their invariance under the choice of
offset, consistent-center counting, and the degree-2h Warning floor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BoundInapplicableError, ConsistencyError, DimensionError
from .ffield import (
    ENUM_GUARD,
    FpVector,
    encode,
    lengths,
    require_odd_prime,
    sphere_array,
    sphere_array_at,
    vector,
    vec_length,
    check_prime,
)


def two_square_decomposition(p: int, r: int) -> tuple[int, int]:
    """Smallest (x, y), lexicographically, with x != 0 and x^2 + y^2 = r mod p."""
    require_odd_prime(p)
    r %= p
    if r == 0:
        raise ValueError("radius must be nonzero")
    roots: dict[int, int] = {}
    for y in range(p):
        roots.setdefault(y * y % p, y)
    # x ranges over F_p^*, y over F_p: need r - x^2 in Q
    for x in range(1, p):
        y = roots.get((r - x * x) % p)
        if y is not None:
            return x, y
    raise ConsistencyError(f"no two-square decomposition of {r} mod {p}")


def det_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    """Determinant of a square integer matrix mod p by Gaussian elimination."""
    m = [[int(v) % p for v in row] for row in rows]
    size = len(m)
    det = 1
    for col in range(size):
        pivot = next((i for i in range(col, size) if m[i][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col] % p
        inv = pow(m[col][col], p - 2, p)
        for i in range(col + 1, size):
            f = m[i][col] * inv % p
            if f:
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[col])]
    return det % p


@dataclass(frozen=True)
class WitnessMatrix:
    entries: tuple[tuple[int, ...], ...]
    case: str  # "unit-radius", "case-I" or "case-II"
    det: int
    p: int
    x: int
    y: int

    @property
    def a(self) -> int:
        return self.entries[0][0]


def closed_form_det(p: int, n: int, case: str, x: int, y: int) -> int:
    a = pow(2, p - 2, p)
    if case in ("unit-radius", "case-I"):
        value = (-1) ** (n + 2) * 2 * a * x**n
    elif n >= 3:
        value = (-1) ** (n + 3) * 2 * a * x ** (n - 1) * y
    else:
        # rows (a, x, y), (a, x, -y), (a, -x, y)
        value = -4 * a * x * y
    return value % p


def witness_matrix(p: int, n: int, r: int) -> WitnessMatrix:
    """Full-rank (n+1)-square block of the uniqueness system for S_r.

    Each row is (1/2 mod p | point of S_r). The determinant is computed by
    elimination and checked against its closed form.
    """
    require_odd_prime(p)
    if n < 2:
        raise DimensionError(f"witness matrix needs n >= 2, got {n}")
    r %= p
    x, y = two_square_decomposition(p, r)
    a = pow(2, p - 2, p)

    def e(k):
        v = [0] * (n + 1)
        v[k - 1] = 1
        return v

    def row(*terms):
        out = [0] * (n + 1)
        for coef, k in terms:
            out = [o + coef * b for o, b in zip(out, e(k))]
        return [v % p for v in out]

    if y == 0:
        case = "unit-radius" if r == 1 and x == 1 else "case-I"
        rows = [row((a, 1), (x, k + 1)) for k in range(1, n + 1)]
        rows.append(row((a, 1), (-x, 2)))
    elif n >= 3:
        case = "case-II"
        rows = [row((a, 1), (x, k + 1), (y, n + 1)) for k in range(1, n)]
        rows.append(row((a, 1), (x, n), (y, 2)))
        rows.append(row((a, 1), (-x, 2), (y, n + 1)))
    else:
        case = "case-II"
        rows = [row((a, 1), (x, 2), (y, 3)), row((a, 1), (x, 2), (-y, 3)),
                row((a, 1), (-x, 2), (y, 3))]

    for rw in rows:
        if rw[0] != a or vec_length(rw[1:], p) != r:
            raise ConsistencyError(f"witness row {rw} is not (a | point of S_{r})")
    det = det_mod_p(rows, p)
    expected = closed_form_det(p, n, case, x, y)
    if det != expected or det == 0:
        raise ConsistencyError(f"det {det} != closed form {expected} (p={p}, n={n}, r={r})")
    return WitnessMatrix(tuple(tuple(rw) for rw in rows), case, det, p, x, y)


def spheres_distinct(p: int, n: int, r: int, t: Sequence[int], t2: Sequence[int],
                     guard: int = ENUM_GUARD) -> bool:
    check_prime(p)
    a = sphere_array_at(p, n, r, t, guard)
    b = sphere_array_at(p, n, r, t2, guard)
    distinct = a.shape != b.shape or not np.array_equal(a, b)
    if p != 2 and n >= 2 and r % p != 0 and vector(t, p) != vector(t2, p) and not distinct:
        raise ConsistencyError(f"distinct centers {t}, {t2} share a sphere (p={p}, n={n}, r={r})")
    return distinct


def _intersection_counts(p: int, n: int, r: int, r2: int, offsets: np.ndarray,
                         guard: int, chunk: int = 2**22) -> np.ndarray:
    """|S_r ∩ (S_{r2} + v)| for every row v of `offsets`."""
    sr = sphere_array(p, n, r, guard)
    offsets = np.atleast_2d(np.asarray(offsets, dtype=np.int64))
    out = np.empty(len(offsets), dtype=np.int64)
    step = max(1, chunk // max(1, len(sr) * n))
    for start in range(0, len(offsets), step):
        v = offsets[start:start + step]
        d = sr[None, :, :] - v[:, None, :]
        hit = lengths(d, p) == r2 % p
        if r2 % p == 0:
            hit &= d.any(axis=-1)
        out[start:start + step] = hit.sum(axis=1)
    return out


def intersection_count(p: int, n: int, r: int, r2: int, v: Sequence[int],
                       guard: int = ENUM_GUARD) -> int:
    """Number of x with l(x) = r and x - v in S_{r2} (S_0 excludes the origin)."""
    check_prime(p)
    v_arr = np.asarray(vector(v, p), dtype=np.int64)
    if len(v_arr) != n:
        raise DimensionError(f"offset has length {len(v_arr)}, expected {n}")
    return int(_intersection_counts(p, n, r, r2, v_arr[None, :], guard)[0])


@dataclass(frozen=True)
class WittResult:
    ok: bool
    counts: tuple[int, ...]  # distinct counts observed
    vacuous: bool = False
    witness: tuple[FpVector, FpVector] | None = None  # offsets with differing counts


def witt_invariance_check(p: int, n: int, r: int, r2: int, r3: int,
                          guard: int = ENUM_GUARD) -> WittResult:
    """Check that |S_r ∩ (S_{r2} + v)| does not depend on v in S_{r3}."""
    check_prime(p)
    offsets = sphere_array(p, n, r3, guard)
    if len(offsets) == 0:
        return WittResult(True, (), vacuous=True)
    counts = _intersection_counts(p, n, r, r2, offsets, guard)
    distinct = tuple(sorted(set(int(c) for c in counts)))
    if len(distinct) == 1:
        return WittResult(True, distinct)
    j = int(np.flatnonzero(counts != counts[0])[0])
    witness = (tuple(int(c) for c in offsets[0]), tuple(int(c) for c in offsets[j]))
    return WittResult(False, distinct, witness=witness)


@dataclass(frozen=True)
class ConsistencyCount:
    m: int
    centers: list[FpVector] = field(repr=False)
    samples: tuple[FpVector, ...]

    @property
    def h(self) -> int:
        return len(self.samples)


def consistent_center_codes(p: int, n: int, r: int, samples: np.ndarray,
                            guard: int = ENUM_GUARD) -> np.ndarray:
    """Sorted lexicographic codes of all centers y with every sample on S_r + y."""
    sr = sphere_array(p, n, r, guard)
    samples = np.atleast_2d(np.asarray(samples, dtype=np.int64)) % p
    # candidates for sample x are x - S_r = x + S_r
    codes = np.sort(encode((samples[0] + sr) % p, p))
    for x in samples[1:]:
        if len(codes) == 0:
            break
        codes = np.intersect1d(codes, encode((x + sr) % p, p), assume_unique=True)
    return codes


def _decode(codes: np.ndarray, p: int, n: int) -> list[FpVector]:
    out = []
    for c in codes.tolist():
        digits = []
        for _ in range(n):
            c, d = divmod(c, p)
            digits.append(d)
        out.append(tuple(reversed(digits)))
    return out


def consistent_centers(p: int, n: int, r: int, samples: Sequence[Sequence[int]],
                       guard: int = ENUM_GUARD) -> ConsistencyCount:
    """All centers y' such that every sample lies on S_r + y'.

    Returns m = 0 (not an error) when the samples share no sphere.
    """
    check_prime(p)
    if len(samples) < 1:
        raise ValueError("need at least one sample")
    pts = tuple(vector(s, p) for s in samples)
    if any(len(s) != n for s in pts):
        raise DimensionError(f"samples must have length {n}")
    codes = consistent_center_codes(p, n, r % p, np.array(pts), guard)
    return ConsistencyCount(len(codes), _decode(codes, p, n), pts)


def warning_floor(p: int, n: int, h: int) -> int:
    """p^(n - 2h): Warning's lower bound on the common zeros of h quadrics."""
    check_prime(p)
    if n <= 2 * h:
        raise BoundInapplicableError(f"Warning floor needs n > 2h (n={n}, h={h})")
    return p ** (n - 2 * h)
