"""Monte-Carlo runs of the quantum center finder and a classical baseline.

Trial i of a run draws from ``numpy.random.default_rng([seed, i])``, so a
run is reproducible from its seed regardless of how trials are scheduled.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import NumericIntegrityError
from .ffield import ENUM_GUARD, FpVector, encode, ProblemInstance, sample_sphere_point, sphere_array, vector
from .geometry import consistent_center_codes
from .walk import (
    AmplitudeVector,
    default_walk_time,
    evolve,
    optimal_time,
    walk_operator,
)


@dataclass(frozen=True)
class TrialOutcome:
    measured: tuple[FpVector, ...]
    winner: FpVector
    tie: bool
    success: bool


@dataclass(frozen=True)
class McSummary:
    trials: int
    successes: int
    seed: int
    ties: int = 0
    params: dict = field(default_factory=dict)
    transcripts: Optional[list] = field(default=None, repr=False, compare=False)

    @property
    def estimate(self) -> float:
        return self.successes / self.trials

    @property
    def half_width(self) -> float:
        e = self.estimate
        return 1.96 * math.sqrt(e * (1 - e) / self.trials)

    def to_dict(self) -> dict:
        out = {
            "params": self.params,
            "trials": self.trials,
            "successes": self.successes,
            "ties": self.ties,
            "estimate": self.estimate,
            "half_width": self.half_width,
            "seed": self.seed,
        }
        if self.transcripts is not None:
            out["transcripts"] = [
                {"measured": [list(x) for x in o.measured], "winner": list(o.winner),
                 "tie": o.tie, "success": o.success}
                for o in self.transcripts
            ]
        return out


def trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def class_probabilities(amps: AmplitudeVector) -> np.ndarray:
    probs = amps.probabilities
    total = probs.sum()
    if abs(total - 1.0) > 1e-8:
        raise NumericIntegrityError(f"class probabilities sum to {total!r}")
    return probs / total


def sample_measurement(amps: AmplitudeVector, instance: ProblemInstance,
                       rng: np.random.Generator, guard: int = ENUM_GUARD) -> FpVector:
    """Computational-basis measurement of a state in the invariant subspace.

    A basis class is drawn with probability |amplitude|^2; within a sphere
    class S_k + t every point is equally likely, so a uniform point of it is
    returned.
    """
    probs = class_probabilities(amps)
    k = int(rng.choice(len(probs), p=probs))
    if k == 0:
        return instance.t
    sphere = ProblemInstance.relaxed(instance.p, instance.n, k - 1, instance.t)
    return sample_sphere_point(sphere, rng, guard=guard)


def plurality(points: Sequence[FpVector], rng: np.random.Generator) -> tuple[FpVector, bool]:
    """Most frequent point; ties are broken uniformly at random."""
    counts = Counter(points)
    top = max(counts.values())
    tied = sorted(x for x, c in counts.items() if c == top)
    if len(tied) == 1:
        return tied[0], False
    return tied[int(rng.integers(len(tied)))], True


def resolve_walk_time(p: int, n: int, r: int, hamiltonian: str = "plain",
                      walk_time: float | str | None = None, log_base="e",
                      guard: int = ENUM_GUARD) -> float:
    """Absolute walk time. ``None``/"optimal" uses T_max T_0, "default" uses T_0."""
    if walk_time is None or walk_time == "optimal":
        t_max, _ = optimal_time(p, n, r, hamiltonian, log_base=log_base, guard=guard)
        return t_max * default_walk_time(p, n, log_base)
    if walk_time == "default":
        return default_walk_time(p, n, log_base)
    return float(walk_time)


def run_quantum_trials(p: int, n: int, r: int, t: Sequence[int] | None = None, reps: int = 3,
                       walk_time: float | str | None = None, hamiltonian: str = "plain",
                       trials: int = 10_000, seed: int = 0, *, log_base="e",
                       keep_transcripts: bool = False, guard: int = ENUM_GUARD) -> McSummary:
    """Repeat (prepare sphere state, walk, measure) `reps` times and vote."""
    if reps < 1 or trials < 1:
        raise ValueError("reps and trials must be >= 1")
    t = vector(t if t is not None else (0,) * n, p)
    instance = ProblemInstance.create(p, n, r, t)
    op = walk_operator(p, n, r, hamiltonian, guard)
    time = resolve_walk_time(p, n, r, hamiltonian, walk_time, log_base, guard)
    amps = evolve(op, time)
    probs = class_probabilities(amps)
    spheres = [sphere_array(p, n, k, guard) for k in range(p)]
    t_arr = np.asarray(t, dtype=np.int64)

    successes = ties = 0
    transcripts = [] if keep_transcripts else None
    for i in range(trials):
        rng = trial_rng(seed, i)
        classes = rng.choice(p + 1, size=reps, p=probs)
        measured = []
        for k in classes:
            if k == 0:
                measured.append(t)
            else:
                sph = spheres[k - 1]
                row = sph[rng.integers(len(sph))]
                measured.append(tuple(int(c) for c in (row + t_arr) % p))
        winner, tie = plurality(measured, rng)
        ok = winner == t
        successes += ok
        ties += tie
        if transcripts is not None:
            transcripts.append(TrialOutcome(tuple(measured), winner, tie, ok))
    params = {"p": p, "n": n, "r": r, "t": list(t), "reps": reps, "walk_time": time,
              "hamiltonian": hamiltonian, "kind": "quantum"}
    return McSummary(trials, successes, seed, ties, params, transcripts)


def run_classical_baseline(p: int, n: int, r: int, t: Sequence[int] | None = None, h: int = 1,
                           strategy: str = "uniform-consistent", trials: int = 10_000,
                           seed: int = 0, guard: int = ENUM_GUARD) -> McSummary:
    """Draw h sphere samples, guess uniformly among the consistent centers."""
    if strategy != "uniform-consistent":
        raise ValueError(f"unknown strategy {strategy!r}")
    if h < 1 or trials < 1:
        raise ValueError("h and trials must be >= 1")
    t = vector(t if t is not None else (0,) * n, p)
    sph = sphere_array(p, n, r, guard)
    t_arr = np.asarray(t, dtype=np.int64)
    t_code = int(encode(t_arr, p))
    successes = ties = 0
    for i in range(trials):
        rng = trial_rng(seed, i)
        samples = (sph[rng.integers(len(sph), size=h)] + t_arr) % p
        codes = consistent_center_codes(p, n, r, samples, guard)
        successes += int(codes[rng.integers(len(codes))]) == t_code
        ties += len(codes) > 1
    params = {"p": p, "n": n, "r": r, "t": list(t), "h": h, "strategy": strategy,
              "kind": "classical"}
    return McSummary(trials, successes, seed, ties, params)
