"""Desk-scale invariant sweeps behind ``fpsphere verify``.

Each suite returns a list of :class:`Check` rows; a failing row carries the
witness that broke it.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bounds, ffield, geometry, walk

SUITES = ("ffield", "geometry", "walk", "bounds")

# symbolic entries of the reduced operator at p=3, n=5, r=1
REFERENCE_M_A = np.array([
    [0, 0, 3 * math.sqrt(10), 0],
    [0, 27, 24 * math.sqrt(2), 9 * math.sqrt(10)],
    [3 * math.sqrt(10), 24 * math.sqrt(2), 33, 12 * math.sqrt(5)],
    [0, 9 * math.sqrt(10), 12 * math.sqrt(5), 30],
])


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def suite_ffield(fault=None) -> list[Check]:
    out = []
    bad = None
    for p, n in itertools.product((3, 5, 7), (2, 3, 4)):
        sizes = [ffield.sphere_size_formula(p, n, r) for r in range(p)]
        counted = [len(ffield.sphere_array(p, n, r)) for r in range(p)]
        if sizes != counted:
            bad = bad or f"p={p} n={n} formula={sizes} enumerated={counted}"
        if 1 + sum(sizes) != p**n:
            bad = bad or f"partition fails at p={p} n={n}"
    out.append(Check("ffield", "sphere sizes: formula = enumeration, partition", bad is None, bad or ""))

    bad = None
    for p in (3, 5, 7, 11):
        for a, b in itertools.product(range(1, p), repeat=2):
            if ffield.chi(a * b % p, p) != ffield.chi(a, p) * ffield.chi(b, p):
                bad = bad or f"chi({a}*{b}) mod {p}"
        squares = {x * x % p for x in range(1, p)}
        for a in range(1, p):
            if (ffield.chi(a, p) == 1) != (a in squares):
                bad = bad or f"chi({a}, {p}) disagrees with squaring"
    out.append(Check("ffield", "chi multiplicative and matches squares", bad is None, bad or ""))

    bad = None
    rng = np.random.default_rng(0)
    for p, n in ((3, 3), (5, 2), (5, 3)):
        for r in range(p):
            t = tuple(int(c) for c in rng.integers(0, p, size=n))
            if len(ffield.enumerate_sphere(p, n, r, t)) != len(ffield.sphere_array(p, n, r)):
                bad = bad or f"p={p} n={n} r={r} t={t}"
    out.append(Check("ffield", "translation invariance of sphere size", bad is None, bad or ""))
    return out


def suite_geometry(fault=None) -> list[Check]:
    out = []
    bad = None
    for p, n in itertools.product((3, 5), (2, 3)):
        pts = [tuple(int(c) for c in row) for row in ffield.all_points(p, n)]
        for r in range(1, p):
            spheres = {t: ffield.sphere_array_at(p, n, r, t).tobytes() for t in pts}
            if len(set(spheres.values())) != len(pts):
                bad = bad or f"two centers share a sphere at p={p} n={n} r={r}"
    out.append(Check("geometry", "uniqueness sweep p in {3,5}, n in {2,3}", bad is None, bad or ""))

    same = not geometry.spheres_distinct(2, 2, 1, (0, 0), (1, 1))
    out.append(Check("geometry", "p=2 counterexample S_1+(0,0) = S_1+(1,1)", same,
                     "" if same else "spheres differ"))

    bad = None
    for p, n in itertools.product((3, 5, 7), range(2, 6)):
        for r in range(1, p):
            try:
                w = geometry.witness_matrix(p, n, r)
            except Exception as exc:  # ConsistencyError carries the witness
                bad = bad or str(exc)
                continue
            if w.det == 0:
                bad = bad or f"singular witness p={p} n={n} r={r}"
    out.append(Check("geometry", "witness determinants match closed forms", bad is None, bad or ""))

    bad = None
    for p, n in itertools.product((3, 5), (2, 3, 4)):
        for r, r2, r3 in itertools.product(range(p), repeat=3):
            res = geometry.witt_invariance_check(p, n, r, r2, r3)
            if not res.ok:
                bad = bad or f"p={p} n={n} radii={(r, r2, r3)} witness={res.witness}"
    out.append(Check("geometry", "intersection counts independent of offset", bad is None, bad or ""))

    bad = None
    for n in (3, 4):
        p, r, h = 3, 1, 1
        floor = geometry.warning_floor(p, n, h)
        for x in ffield.sphere_array(p, n, r):
            m = geometry.consistent_centers(p, n, r, [x]).m
            if m < floor:
                bad = bad or f"m={m} < {floor} at n={n} sample={tuple(x)}"
    out.append(Check("geometry", "m_x >= p^(n-2h) (p=3, n in {3,4}, h=1)", bad is None, bad or ""))
    return out


def suite_walk(fault=None) -> list[Check]:
    out = []
    m = walk.build_reduced_adjacency(3, 5, 1).entries.copy()
    if fault == "walk":
        m[1, 2] += 1.0
        m[2, 1] += 1.0
    dev = float(np.abs(m - REFERENCE_M_A).max())
    out.append(Check("walk", "reduced operator (3,5,1) equals M_A", dev < 1e-9, f"max deviation {dev:.3e}"))

    bad = None
    for case in ((3, 3, 1), (3, 4, 2), (5, 2, 1), (5, 3, 3)):
        res = walk.full_space_column_check(*case)
        if not res.passed:
            bad = bad or f"{case}: deviation {res.max_deviation:.3e}, residual {res.residual}"
    out.append(Check("walk", "full-space oracle: columns and zero leakage", bad is None, bad or ""))

    bad = None
    for p, n in itertools.product((3, 5), (3, 4, 5)):
        for r in range(1, p):
            op = walk.build_reduced_adjacency(p, n, r)
            w = op.uniform_vector
            if np.abs(op.entries @ w - op.top_eigenvalue * w).max() > 1e-8 * op.top_eigenvalue:
                bad = bad or f"eigen-identity fails at {(p, n, r)}"
            ev, _ = walk.eig_sym(walk.deflate(op).entries)
            radius = float(np.abs(ev).max())
            if radius >= 2 * math.sqrt(p ** (n - 1)):
                bad = bad or f"spectral radius {radius} at {(p, n, r)}"
    out.append(Check("walk", "uniform eigenvector and deflated spectral radius", bad is None, bad or ""))
    return out


def suite_bounds(fault=None) -> list[Check]:
    out = []
    rep = bounds.separation_report(3, 12, 1, 0.4, 3)
    ok = abs(rep.ps_lower - 0.698) <= 0.001 and rep.pc_upper <= 0.0014 and rep.ratio >= 509
    out.append(Check("bounds", "separation example (3,12,1,P_t=0.4,T=3)", ok,
                     f"ps={rep.ps_lower:.6f} pc={rep.pc_upper:.6g} ratio={rep.ratio:.2f}"))

    h = bounds.amplitude_floor_h(127, 8).value
    mono = all(
        bounds.amplitude_floor_h(p, n + 1).value >= bounds.amplitude_floor_h(p, n).value
        and bounds.amplitude_floor_h(p2, n).value >= bounds.amplitude_floor_h(p, n).value
        for p, p2 in ((127, 131), (131, 137)) for n in range(8, 12)
    )
    ok = 0.0016 <= h <= 0.01 and mono
    out.append(Check("bounds", "h(127,8) anchor and monotonicity", ok, f"h(127,8)={h:.6f} monotone={mono}"))

    bad = None
    for n, h_ in ((3, 1), (4, 1), (5, 1), (5, 2)):
        exact = bounds.classical_optimal_success_exact(3, n, 1, h_)
        upper = bounds.classical_success_upper(3, n, h_)
        if not upper.vacuous and exact > upper.value:
            bad = bad or f"n={n} h={h_}: exact {exact} > {upper.value}"
    out.append(Check("bounds", "exact classical optimum below Warning bound", bad is None, bad or ""))
    return out


_RUNNERS = {
    "ffield": suite_ffield,
    "geometry": suite_geometry,
    "walk": suite_walk,
    "bounds": suite_bounds,
}


def run_suites(names, fault=None, threads: int = 1) -> list[Check]:
    names = list(SUITES) if "all" in names else list(names)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(lambda s: _RUNNERS[s](fault), names))
    return [c for group in results for c in group]
