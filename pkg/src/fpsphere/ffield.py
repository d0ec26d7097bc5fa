"""Arithmetic over F_p and F_p^n: quadratic character, vector length, spheres.

Points of F_p^n are plain tuples of ints reduced mod p. Bulk work is done on
numpy integer arrays whose rows are points, always in lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from .errors import (
    DimensionError,
    GuardExceededError,
    InvalidFieldError,
    SamplingError,
    UnsupportedFieldError,
)

FpVector = Tuple[int, ...]

ENUM_GUARD = 10**7
REJECTION_CAP = 10**6


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> None:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise InvalidFieldError(f"{p} is not prime")


def require_odd_prime(p: int) -> None:
    check_prime(p)
    if p == 2:
        raise UnsupportedFieldError("operation requires an odd prime, got p = 2")


@dataclass(frozen=True)
class FieldSpec:
    p: int

    def __post_init__(self):
        check_prime(self.p)

    @property
    def odd(self) -> bool:
        return self.p != 2

    def require_odd(self) -> None:
        if not self.odd:
            raise UnsupportedFieldError("operation requires an odd prime, got p = 2")


def vector(coords: Sequence[int], p: int) -> FpVector:
    """Reduce `coords` mod p into a point of F_p^n."""
    if len(coords) < 1:
        raise DimensionError("vectors need at least one coordinate")
    return tuple(int(c) % p for c in coords)


@dataclass(frozen=True)
class ProblemInstance:
    """One sphere-center-finding task: hidden center `t`, radius `r`.

    The default constructor enforces r != 0. Use :meth:`relaxed` when a
    radius-zero sphere (punctured at its center) is needed as a basis class.
    """

    field: FieldSpec
    n: int
    r: int
    t: FpVector
    allow_zero_radius: bool = False

    def __post_init__(self):
        p = self.field.p
        if self.n < 1:
            raise DimensionError(f"dimension must be >= 1, got {self.n}")
        if not 0 <= self.r < p:
            raise ValueError(f"radius {self.r} is not a residue mod {p}")
        if self.r == 0 and not self.allow_zero_radius:
            raise ValueError("radius must be nonzero")
        if len(self.t) != self.n:
            raise DimensionError(f"center has length {len(self.t)}, expected {self.n}")
        object.__setattr__(self, "t", vector(self.t, p))

    @classmethod
    def create(cls, p: int, n: int, r: int, t: Sequence[int] | None = None) -> "ProblemInstance":
        t = tuple(t) if t is not None else (0,) * n
        return cls(FieldSpec(p), n, r % p, t)

    @classmethod
    def relaxed(cls, p: int, n: int, r: int, t: Sequence[int] | None = None) -> "ProblemInstance":
        t = tuple(t) if t is not None else (0,) * n
        return cls(FieldSpec(p), n, r % p, t, allow_zero_radius=True)

    @property
    def p(self) -> int:
        return self.field.p


def chi(a: int, p: int) -> int:
    """Quadratic character of `a` mod p via Euler's criterion."""
    check_prime(p)
    if not 0 <= a < p:
        raise ValueError(f"{a} is not a residue mod {p}")
    if a == 0:
        return 0
    if p == 2:
        return 1
    e = pow(a, (p - 1) // 2, p)
    return 1 if e == 1 else -1


def vec_length(x: Sequence[int], p: int) -> int:
    return sum(int(c) * int(c) for c in x) % p


def sphere_size_formula(p: int, n: int, r: int) -> int:
    """Closed-form |S_r| in F_p^n (for r = 0 the origin is excluded)."""
    require_odd_prime(p)
    if n < 1:
        raise DimensionError(f"dimension must be >= 1, got {n}")
    r %= p
    if n % 2 == 1:
        if r != 0:
            sign = (-1) ** ((n - 1) // 2)
            return p ** (n - 1) + chi((sign * r) % p, p) * p ** ((n - 1) // 2)
        return p ** (n - 1) - 1
    c = chi((-1) ** (n // 2) % p, p)
    if r != 0:
        return p ** (n - 1) - c * p ** ((n - 2) // 2)
    return p ** (n - 1) + c * (p - 1) * p ** ((n - 2) // 2) - 1


def _check_guard(p: int, n: int, guard: int) -> None:
    if p**n > guard:
        raise GuardExceededError("enumeration guard", guard, p**n)


@lru_cache(maxsize=32)
def _all_points(p: int, n: int) -> np.ndarray:
    idx = np.arange(p**n, dtype=np.int64)
    pts = np.empty((p**n, n), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        pts[:, j] = idx % p
        idx //= p
    pts.flags.writeable = False
    return pts


def all_points(p: int, n: int, guard: int = ENUM_GUARD) -> np.ndarray:
    """All of F_p^n as a read-only (p^n, n) array in lexicographic order."""
    check_prime(p)
    _check_guard(p, n, guard)
    return _all_points(p, n)


def encode(points: np.ndarray, p: int) -> np.ndarray:
    """Row index of each point in the lexicographic order of F_p^n."""
    points = np.asarray(points, dtype=np.int64)
    code = np.zeros(points.shape[:-1], dtype=np.int64)
    for j in range(points.shape[-1]):
        code = code * p + points[..., j]
    return code


def lengths(points: np.ndarray, p: int) -> np.ndarray:
    points = np.asarray(points, dtype=np.int64)
    return (points * points).sum(axis=-1) % p


@lru_cache(maxsize=256)
def _sphere(p: int, n: int, r: int) -> np.ndarray:
    pts = _all_points(p, n)
    mask = lengths(pts, p) == r
    if r == 0:
        mask[0] = False
    out = pts[mask]
    out.flags.writeable = False
    return out


def sphere_array(p: int, n: int, r: int, guard: int = ENUM_GUARD) -> np.ndarray:
    """S_r centered at the origin as a read-only array, lexicographic rows."""
    check_prime(p)
    _check_guard(p, n, guard)
    return _sphere(p, n, r % p)


def sphere_array_at(p: int, n: int, r: int, t: Sequence[int], guard: int = ENUM_GUARD) -> np.ndarray:
    """S_r + t as an array in lexicographic order."""
    pts = all_points(p, n, guard)
    t_arr = np.asarray(vector(t, p), dtype=np.int64)
    if len(t_arr) != n:
        raise DimensionError(f"center has length {len(t_arr)}, expected {n}")
    mask = lengths(pts - t_arr, p) == r % p
    if r % p == 0:
        mask[encode(t_arr, p)] = False
    return pts[mask]


def enumerate_sphere(p: int, n: int, r: int, t: Sequence[int] | None = None,
                     guard: int = ENUM_GUARD) -> list[FpVector]:
    t = (0,) * n if t is None else t
    return [tuple(int(c) for c in row) for row in sphere_array_at(p, n, r, t, guard)]


def sample_sphere_point(instance: ProblemInstance, rng: np.random.Generator, *,
                        method: str = "auto", guard: int = ENUM_GUARD,
                        rejection_cap: int = REJECTION_CAP) -> FpVector:
    """Draw one point uniformly from S_r + t.

    With ``method="auto"`` the cached enumeration is indexed directly when
    p^n is within `guard`, and rejection sampling is used otherwise.
    """
    p, n, r = instance.p, instance.n, instance.r
    t = np.asarray(instance.t, dtype=np.int64)
    if method == "auto":
        method = "enumeration" if p**n <= guard else "rejection"
    if method == "enumeration":
        sph = sphere_array(p, n, r, guard)
        if len(sph) == 0:
            raise SamplingError(f"sphere S_{r} in F_{p}^{n} is empty")
        row = sph[rng.integers(len(sph))]
        return tuple(int(c) for c in (row + t) % p)
    if method != "rejection":
        raise ValueError(f"unknown sampling method {method!r}")
    for _ in range(rejection_cap):
        x = rng.integers(0, p, size=n)
        d = x - t
        if int(d @ d) % p == r and (r != 0 or d.any()):
            return tuple(int(c) for c in x)
    raise SamplingError(f"no sphere point after {rejection_cap} rejection draws")
