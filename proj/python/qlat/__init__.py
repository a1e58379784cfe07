"""Cavity polaritons in a quasi-lattice of qubits."""

from ._core import (
    CavitySpec,
    DecayResult,
    LatticeSpec,
    PvResult,
    chi,
    chi_closed_form,
    closed_form_coefficients,
    decay_rate,
    deformation_factor,
    diagonalize_sector,
    first_excited_transition,
    fit_decay,
    integrate_normalized_bath,
    pv_integral_check,
    quasi_period,
    s_factor,
    validate,
)

__all__ = [
    "CavitySpec",
    "DecayResult",
    "LatticeSpec",
    "PvResult",
    "chi",
    "chi_closed_form",
    "closed_form_coefficients",
    "decay_rate",
    "deformation_factor",
    "diagonalize_sector",
    "first_excited_transition",
    "fit_decay",
    "integrate_normalized_bath",
    "pv_integral_check",
    "quasi_period",
    "s_factor",
    "validate",
]
