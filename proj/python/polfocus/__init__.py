"""Effective polarization density matrices of focused single-photon states.

Thin wrapper around the compiled ``_polfocus`` extension.  Matrices are plain
nested lists of complex numbers so no third-party array package is required.
"""

try:
    from ._polfocus import *  # noqa: F401,F403  (installed wheel layout)
    from ._polfocus import __doc__ as _core_doc
except ImportError:  # pragma: no cover - development tree layout
    from _polfocus import *  # noqa: F401,F403
    from _polfocus import __doc__ as _core_doc

__all__ = [
    "helicity_basis",
    "error_probability",
    "trace_distance_term",
    "eigenvalues",
    "lens_density",
    "lens_series_density",
    "error_probability_lens",
    "lens_rho_zz_closed_form",
    "lens_rho_xy_closed_form",
    "gaussian_density",
    "naive_reduced_2x2",
    "paraxial_series_density",
    "paraxial_series_error_probability",
    "omega_from_density",
    "completeness_defect",
    "direction_state_completeness",
    "povm_expectation",
    "detector_p_z_closed_form",
    "detection_discrepancy",
    "photocurrents_spherical",
]
