"""Continuous-time quantum walk on the Euclidean graph, reduced to p+1 dims.

The adjacency operator A of the graph x ~ y iff l(x - y) = r leaves the span
of {|t>, |S_0+t>, ..., |S_{p-1}+t>} invariant. Everything here works on that
(p+1)-dimensional block: build it, optionally deflate the top eigenvalue,
diagonalise with cyclic Jacobi, and evolve the sphere state |S_r+t>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    ConsistencyError,
    ConvergenceError,
    DeflationStateError,
    EmptySphereError,
    GuardExceededError,
)
from .ffield import ENUM_GUARD, all_points, encode, lengths, require_odd_prime, sphere_array
from .geometry import _intersection_counts

FULL_SPACE_GUARD = 6561
HAMILTONIANS = ("plain", "deflated")


def basis_labels(p: int) -> list[str]:
    return ["center"] + [f"S{k}" for k in range(p)]


@dataclass(frozen=True, eq=False)
class ReducedWalkOperator:
    p: int
    n: int
    r: int
    entries: np.ndarray
    sizes: tuple[int, ...]  # s_0, ..., s_{p-1}
    deflated: bool = False
    asymmetry: float = 0.0

    @property
    def dim(self) -> int:
        return self.p + 1

    @property
    def basis(self) -> list[str]:
        return basis_labels(self.p)

    @property
    def top_eigenvalue(self) -> int:
        return self.sizes[self.r]

    @property
    def uniform_vector(self) -> np.ndarray:
        """Reduced image of the uniform superposition over F_p^n."""
        w = np.concatenate(([1.0], np.sqrt(np.asarray(self.sizes, dtype=float))))
        return w / math.sqrt(self.p**self.n)

    @cached_property
    def spectrum(self) -> tuple[np.ndarray, np.ndarray]:
        return eig_sym(self.entries)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "basis": self.basis,
            "entries": self.entries.tolist(),
            "instance": {"p": self.p, "n": self.n, "r": self.r},
            "deflated": self.deflated,
            "sizes": list(self.sizes),
            "asymmetry": self.asymmetry,
        }


def build_reduced_adjacency(p: int, n: int, r: int, guard: int = ENUM_GUARD) -> ReducedWalkOperator:
    """Matrix of A on the invariant basis, rows/columns [center, S_0, ..., S_{p-1}].

    Column S_{r'} holds sqrt(s_{r''}/s_{r'}) * |S_r ∩ (S_{r'} + v'')| in row
    S_{r''}, with v'' the first enumerated point of S_{r''}.
    """
    require_odd_prime(p)
    r %= p
    if r == 0:
        raise ValueError("radius must be nonzero")
    spheres = [sphere_array(p, n, k, guard) for k in range(p)]
    sizes = tuple(len(s) for s in spheres)
    empty = [k for k, s in enumerate(sizes) if s == 0]
    if empty:
        raise EmptySphereError(f"sphere classes {empty} are empty for p={p}, n={n}")

    m = np.zeros((p + 1, p + 1))
    m[0, 1 + r] = math.sqrt(sizes[r])
    for r2 in range(p):
        v = spheres[r2][:1]
        for r1 in range(p):
            count = int(_intersection_counts(p, n, r, r1, v, guard)[0])
            m[1 + r2, 1 + r1] = math.sqrt(sizes[r2] / sizes[r1]) * count
    m[1 + r, 0] = math.sqrt(sizes[r])

    asym = float(np.max(np.abs(m - m.T)))
    if asym >= 1e-9 * np.linalg.norm(m):
        raise ConsistencyError(f"reduced operator asymmetry {asym:.3e} too large")
    sym = (m + m.T) / 2
    return ReducedWalkOperator(p, n, r, sym, sizes, deflated=False, asymmetry=asym)


def deflate(op: ReducedWalkOperator) -> ReducedWalkOperator:
    """Shift the top eigenvalue s_r (uniform eigenvector) to zero."""
    if op.deflated:
        raise DeflationStateError("operator is already deflated")
    w = op.uniform_vector
    entries = op.entries - op.top_eigenvalue * np.outer(w, w)
    entries = (entries + entries.T) / 2
    return ReducedWalkOperator(op.p, op.n, op.r, entries, op.sizes, True, op.asymmetry)


def eig_sym(m: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Returns eigenvalues ascending and the orthonormal eigenvector matrix
    (columns), so that ``m ≈ V @ diag(w) @ V.T``.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    size = a.shape[0]
    if size > 4096:
        raise ValueError("eig_sym supports dimension <= 4096")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max(initial=0))):
        raise ValueError("matrix is not symmetric")
    v = np.eye(size)
    norm = np.linalg.norm(a)
    threshold = tol * norm

    def off_max():
        if size < 2:
            return 0.0
        return np.abs(a[np.triu_indices(size, 1)]).max()

    for _ in range(max_sweeps):
        if off_max() < threshold or norm == 0:
            break
        for i in range(size - 1):
            for j in range(i + 1, size):
                aij = a[i, j]
                if abs(aij) < 1e-300:
                    continue
                theta = (a[j, j] - a[i, i]) / (2.0 * aij)
                if abs(theta) > 1e150:
                    t = 0.5 / theta  # theta^2 would overflow
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ai, aj = a[:, i].copy(), a[:, j].copy()
                a[:, i] = c * ai - s * aj
                a[:, j] = s * ai + c * aj
                ai, aj = a[i, :].copy(), a[j, :].copy()
                a[i, :] = c * ai - s * aj
                a[j, :] = s * ai + c * aj
                a[i, j] = a[j, i] = 0.0
                vi, vj = v[:, i].copy(), v[:, j].copy()
                v[:, i] = c * vi - s * vj
                v[:, j] = s * vi + c * vj
    else:
        if off_max() >= threshold:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def log_of(p: float, base) -> float:
    if base in ("e", None) or base == math.e:
        return math.log(p)
    return math.log(p, float(base))


def default_walk_time(p: int, n: int, base="e") -> float:
    """T_0 = 1 / sqrt(p^(n-1) log p)."""
    return 1.0 / math.sqrt(p ** (n - 1) * log_of(p, base))


@dataclass(frozen=True)
class AmplitudeVector:
    amplitudes: np.ndarray
    time: float
    labels: tuple[str, ...]

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def center_probability(self) -> float:
        return float(abs(self.amplitudes[0]) ** 2)


def evolve(op: ReducedWalkOperator, T: float) -> AmplitudeVector:
    """Apply exp(i M T) to the reduced image of |S_r + t>."""
    start = np.zeros(op.dim, dtype=complex)
    start[1 + op.r] = 1.0
    labels = tuple(op.basis)
    if T == 0:
        return AmplitudeVector(start, 0.0, labels)
    w, v = op.spectrum
    amps = v @ (np.exp(1j * w * T) * v[1 + op.r, :])
    return AmplitudeVector(amps, float(T), labels)


def evolve_center_amplitudes(op: ReducedWalkOperator, times: np.ndarray) -> np.ndarray:
    """<center| exp(i M T) |S_r> for every T in `times` (shared eigensystem)."""
    w, v = op.spectrum
    times = np.asarray(times, dtype=float)
    coeff = v[0, :] * v[1 + op.r, :]
    amps = np.exp(1j * np.outer(times, w)) @ coeff
    amps[times == 0] = 0.0
    return amps


def walk_operator(p: int, n: int, r: int, hamiltonian: str = "plain",
                  guard: int = ENUM_GUARD) -> ReducedWalkOperator:
    if hamiltonian not in HAMILTONIANS:
        raise ValueError(f"hamiltonian must be one of {HAMILTONIANS}, got {hamiltonian!r}")
    op = build_reduced_adjacency(p, n, r, guard)
    return deflate(op) if hamiltonian == "deflated" else op


@dataclass(frozen=True)
class ProbabilityCurve:
    t1: np.ndarray
    probability: np.ndarray
    p: int
    n: int
    r: int
    hamiltonian: str
    t0: float

    @property
    def schedule(self) -> list[tuple[float, float]]:
        return list(zip(self.t1.tolist(), self.probability.tolist()))

    def argmax(self) -> tuple[float, float]:
        i = int(np.argmax(self.probability))
        return float(self.t1[i]), float(self.probability[i])

    def local_maxima(self) -> list[int]:
        y = self.probability
        return [i for i in range(1, len(y) - 1) if y[i] > y[i - 1] and y[i] >= y[i + 1]]


def success_curve(p: int, n: int, r: int, hamiltonian: str = "plain",
                  grid: Sequence[float] = (), *, op: ReducedWalkOperator | None = None,
                  log_base="e", guard: int = ENUM_GUARD) -> ProbabilityCurve:
    """p(T1) = |<t| exp(i H T1 T0) |S_r+t>|^2 on the given grid of T1 values."""
    grid = np.asarray(grid, dtype=float)
    if np.any(grid < 0):
        raise ValueError("grid values must be non-negative")
    if op is None:
        op = walk_operator(p, n, r, hamiltonian, guard)
    t0 = default_walk_time(p, n, log_base)
    probs = np.abs(evolve_center_amplitudes(op, grid * t0)) ** 2
    return ProbabilityCurve(grid, probs, p, n, r, hamiltonian, t0)


def uniform_grid(start: float, stop: float, step: float) -> np.ndarray:
    if step <= 0:
        raise ValueError("step must be positive")
    if stop < start:
        raise ValueError("empty range")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 12)


def optimal_time(p: int, n: int, r: int, hamiltonian: str = "plain",
                 range_: tuple[float, float] = (0.0, 3.0), step: float = 0.01, *,
                 op: ReducedWalkOperator | None = None, log_base="e",
                 guard: int = ENUM_GUARD) -> tuple[float, float]:
    """Grid argmax of p(T1) (earliest on ties), refined once at half the step."""
    lo, hi = range_
    if op is None:
        op = walk_operator(p, n, r, hamiltonian, guard)
    coarse = success_curve(p, n, r, hamiltonian, uniform_grid(lo, hi, step), op=op, log_base=log_base)
    t_best, _ = coarse.argmax()
    fine_grid = uniform_grid(max(lo, t_best - step), min(hi, t_best + step), step / 2)
    fine = success_curve(p, n, r, hamiltonian, fine_grid, op=op, log_base=log_base)
    return fine.argmax()


@dataclass(frozen=True)
class FullSpaceCheck:
    passed: bool
    max_deviation: float
    residual: int  # integer leakage outside span(B_0)


def full_space_column_check(p: int, n: int, r: int, guard: int = FULL_SPACE_GUARD) -> FullSpaceCheck:
    """Compare the reduced operator against the exact integer adjacency on F_p^n.

    With t = 0, A applied to each (unnormalised) class indicator must be
    constant on every class; the class values give the reduced column.
    """
    require_odd_prime(p)
    if p**n > guard:
        raise GuardExceededError("full-space guard", guard, p**n)
    op = build_reduced_adjacency(p, n, r)
    pts = all_points(p, n)
    # basis position of each point: 0 for the center (origin), 1 + l(x) otherwise
    cls = 1 + lengths(pts, p)
    cls[0] = 0
    indicators = (cls[:, None] == np.arange(p + 1)[None, :]).astype(np.int64)
    image = np.zeros_like(indicators)
    for s in sphere_array(p, n, r):
        image += indicators[encode((pts + s) % p, p)]

    sizes = np.asarray((1,) + op.sizes, dtype=float)
    max_dev = 0.0
    residual = 0
    for col in range(p + 1):
        g = image[:, col]
        expanded = np.zeros(p + 1)
        for row in range(p + 1):
            vals = g[cls == row]
            residual += int(np.abs(vals - vals[0]).sum())
            expanded[row] = vals[0] * sizes[row] / math.sqrt(sizes[row] * sizes[col])
        max_dev = max(max_dev, float(np.abs(expanded - op.entries[:, col]).max()))
    return FullSpaceCheck(max_dev < 1e-9 and residual == 0, max_dev, residual)
