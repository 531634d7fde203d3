"""Steady Prandtl system in Von Mises variables.

Thin wrapper over the compiled extension: Blasius profile solver, the
degenerate parabolic march for w = u^2, decay-rate diagnostics, and the
barrier certification helpers.
"""

try:
    from ._prandtl import *  # noqa: F401,F403
    from ._prandtl import __doc__ as _core_doc
except ImportError:  # in-build-tree layout used by the ctest smoke tests
    from _prandtl import *  # noqa: F401,F403
    from _prandtl import __doc__ as _core_doc

__all__ = [
    "solve_blasius",
    "BlasiusProfile",
    "PsiGrid",
    "WField",
    "wbar",
    "y_of_psi",
    "similarity_coords",
    "InitialData",
    "blasius_shift_data",
    "gaussian_concave_data",
    "validate_initial_data",
    "w0_from_u0",
    "Scheme",
    "MarchConfig",
    "Trajectory",
    "march",
    "step",
    "wbar_field",
    "sup_error_vs_wbar",
    "phi",
    "damping_A",
    "sup_norm_decay",
    "gaussian_tail",
    "comparison_ratio",
    "certify_barrier",
    "run_pipeline",
]
