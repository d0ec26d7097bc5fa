"""Sphere-center finding over F_p^n: geometry, quantum walk, and success bounds."""

from .bounds import (
    SeparationParams,
    SeparationReport,
    amplitude_floor_h,
    classical_optimal_success_exact,
    classical_success_upper,
    g_function,
    quantum_success_lower,
    separation_report,
)
from .experiment import McSummary, run_classical_baseline, run_quantum_trials, sample_measurement
from .ffield import (
    FieldSpec,
    ProblemInstance,
    chi,
    enumerate_sphere,
    sample_sphere_point,
    sphere_size_formula,
    vec_length,
)
from .geometry import (
    consistent_centers,
    intersection_count,
    spheres_distinct,
    two_square_decomposition,
    warning_floor,
    witness_matrix,
    witt_invariance_check,
)
from .walk import (
    ReducedWalkOperator,
    build_reduced_adjacency,
    default_walk_time,
    deflate,
    eig_sym,
    evolve,
    full_space_column_check,
    optimal_time,
    success_curve,
)

__version__ = "0.1.0"
