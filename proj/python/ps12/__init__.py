"""C1 quadratic simplex splines on the Powell-Sabin 12-split."""

from ._ps12 import (  # noqa: F401
    Frame,
    Mesh,
    SBasis,
    SplineFn,
    basis_labels,
    basis_multiplicities,
    eval_q,
    h2_convergence,
    marsden_max_error,
    mesh_dimension,
    quasi_interpolant,
    run_suite,
    univariate_bspline,
)

__all__ = [
    "Frame",
    "Mesh",
    "SBasis",
    "SplineFn",
    "basis_labels",
    "basis_multiplicities",
    "eval_q",
    "h2_convergence",
    "marsden_max_error",
    "mesh_dimension",
    "quasi_interpolant",
    "run_suite",
    "univariate_bspline",
]
