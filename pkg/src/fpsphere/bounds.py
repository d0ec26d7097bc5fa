"""Closed-form success bounds for the classical and quantum center finders."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .errors import GuardExceededError
from .ffield import ENUM_GUARD, all_points, check_prime, encode, sphere_array
from .walk import log_of

STEP_GUARD = 10**8


class Bound(NamedTuple):
    value: float
    vacuous: bool


def classical_success_upper(p: int, n: int, h: int) -> Bound:
    """Worst-case success of any classical strategy seeing h samples: p^-(n-2h).

    Flagged vacuous when n <= 2h, where the value is >= 1.
    """
    check_prime(p)
    return Bound(float(p) ** (-(n - 2 * h)), n <= 2 * h)


def classical_optimal_success_exact(p: int, n: int, r: int, h: int,
                                    guard: int = STEP_GUARD) -> Fraction:
    """Exact Bayes-optimal average success under a uniform center prior.

    Counts the distinct feasible sample tuples |S| = |∪_y (S_r + y)^h| and
    returns |S| / (p^n s_r^h).
    """
    check_prime(p)
    sr = sphere_array(p, n, r, ENUM_GUARD)
    s = len(sr)
    total = p**n * s**h
    if total > guard:
        raise GuardExceededError("step guard", guard, total)
    if s == 0:
        return Fraction(0)
    base = p**n
    centers = all_points(p, n)
    # tuple code = sum_i code(x_i) * base^i
    wide = base**h >= 2**63
    seen = set()
    for y in centers:
        codes = encode((sr + y) % p, p)
        if wide:
            codes = codes.astype(object)
        combo = np.array([0], dtype=np.int64)
        for i in range(h):
            combo = (combo[:, None] + (codes * base**i)[None, :]).ravel()
        seen.update(combo.tolist())
    return Fraction(len(seen), total)


def g_function(x: float) -> float:
    """x e^(2/x) - x - 2, decreasing on x > 0."""
    if x <= 0:
        raise ValueError("g is defined for x > 0")
    return x * math.exp(2.0 / x) - x - 2.0


def amplitude_floor_h(p: int, n: int, base=2) -> Bound:
    """h(p, n) = 1 - 1/p - 4/p^((n-1)/4) - g(sqrt(log p)).

    Center amplitude after the deflated walk is at least h / sqrt(log p).
    """
    value = 1.0 - 1.0 / p - 4.0 / p ** ((n - 1) / 4) - g_function(math.sqrt(log_of(p, base)))
    return Bound(value, value <= 0)


@dataclass(frozen=True)
class SeparationParams:
    p: int
    n: int
    r: int
    P_t: float
    P_x: float
    T: int

    def __post_init__(self):
        if not 0 < self.P_t < 1:
            raise ValueError(f"P_t must lie in (0, 1), got {self.P_t}")
        if not 0 <= self.P_x <= 1:
            raise ValueError(f"P_x must lie in [0, 1], got {self.P_x}")
        if int(self.T) != self.T or self.T <= 2:
            raise ValueError(f"T must be an integer greater than 2, got {self.T}")

    @property
    def c(self) -> float:
        return self.T * self.P_t


def quantum_success_lower(params: SeparationParams) -> Bound:
    """Plurality-vote success lower bound after T walk repetitions."""
    c, pt, px = params.c, params.P_t, params.P_x
    value = (1 - math.exp(-c) - c * px / (1 - pt) * math.exp(-c)
             - params.p**params.n * c**2 * px**2 / (2 * pt**2))
    if value <= 0:
        return Bound(0.0, True)
    return Bound(value, False)


def off_center_px(p: int, n: int, P_t: float) -> float:
    """Largest per-point probability off the center: (1 - P_t)/(p^(n-1) - p^((n-1)/2))."""
    return (1 - P_t) / (p ** (n - 1) - p ** ((n - 1) / 2))


@dataclass(frozen=True)
class SeparationReport:
    params: SeparationParams
    ps_lower: float
    ps_vacuous: bool
    pc_upper: float
    pc_vacuous: bool
    mc_estimate: Optional[dict] = field(default=None)

    @property
    def ratio(self) -> float:
        return self.ps_lower / self.pc_upper

    def to_dict(self) -> dict:
        pr = self.params
        return {
            "p": pr.p, "n": pr.n, "r": pr.r, "P_t": pr.P_t, "P_x": pr.P_x,
            "T": pr.T, "c": pr.c,
            "ps_lower": self.ps_lower, "ps_vacuous": self.ps_vacuous,
            "pc_upper": self.pc_upper, "pc_vacuous": self.pc_vacuous,
            "ratio": self.ratio,
            "mc": self.mc_estimate,
        }


def separation_report(p: int, n: int, r: int, P_t: float, T: int, mc=None) -> SeparationReport:
    """Quantum lower bound vs classical upper bound with T samples each.

    `mc`, if given, is a dict as produced by ``McSummary.to_dict`` and is
    attached verbatim.
    """
    params = SeparationParams(p, n, r, P_t, off_center_px(p, n, P_t), T)
    ps = quantum_success_lower(params)
    pc = classical_success_upper(p, n, T)
    return SeparationReport(params, ps.value, ps.vacuous, pc.value, pc.vacuous, mc)
