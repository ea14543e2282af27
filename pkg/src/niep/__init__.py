"""Realizability toolkit for real spectra of nonnegative matrices.

The package decides and certifies whether a non-increasing tuple of
reals is the spectrum of an entrywise nonnegative matrix (optionally a
symmetric one), estimates the threshold of the leading slot over a
fixed tail with certified two-sided bounds, and audits families of
estimates for the continuity and closedness behaviour those thresholds
are known to have.

Submodules are imported on first attribute access so that the exact
arithmetic stack stays importable without pulling in the optimizer.
"""

from __future__ import annotations

import importlib
from typing import Any

__version__ = "0.1.0"

_EXPORTS = {
    # spectra
    "Spectrum": ".spectra",
    "Tail": ".spectra",
    "make_spectrum": ".spectra",
    "make_tail": ".spectra",
    "as_square_matrix": ".spectra",
    "elementary_coeffs": ".spectra",
    "char_coeffs": ".spectra",
    "char_coeffs_vjp": ".spectra",
    "char_coeff_jacobian": ".spectra",
    "eigenvalues": ".spectra",
    "spectral_radius": ".spectra",
    "power_sums": ".spectra",
    "l1_distance": ".spectra",
    # conditions
    "VerdictTag": ".conditions",
    "Verdict": ".conditions",
    "ConditionResult": ".conditions",
    "NonRealizabilityProof": ".conditions",
    "DeductionStep": ".conditions",
    "RealizationCertificate": ".conditions",
    "BudgetExceededError": ".conditions",
    "DeductionError": ".conditions",
    "check_necessary": ".conditions",
    "first_violation": ".conditions",
    "partition_prover": ".conditions",
    "decide_exact": ".conditions",
    "companion_matrix": ".conditions",
    "companion_realizer": ".conditions",
    "verify_certificate": ".conditions",
    "verify_proof": ".conditions",
    "zero_certificate": ".conditions",
    "matrix_certificate": ".conditions",
    "corollary1_step": ".conditions",
    "perron_raise": ".conditions",
    "reachable": ".conditions",
    "certificate_to_dict": ".conditions",
    "certificate_from_dict": ".conditions",
    "proof_to_dict": ".conditions",
    "proof_from_dict": ".conditions",
    "verdict_to_dict": ".conditions",
    # search
    "SearchConfig": ".search",
    "SearchResult": ".search",
    "CurveLiftResult": ".search",
    "coefficient_objective": ".search",
    "negativity_objective": ".search",
    "objective_gradient": ".search",
    "orthogonal_from_angles": ".search",
    "angles_from_orthogonal": ".search",
    "find_realization": ".search",
    "find_symmetric_realization": ".search",
    "curve_lift": ".search",
    # guo
    "ProbeRecord": ".guo",
    "GuoEstimate": ".guo",
    "LipschitzReport": ".guo",
    "ClosednessReport": ".guo",
    "certified_bounds": ".guo",
    "estimate_g": ".guo",
    "estimate_gs": ".guo",
    "lipschitz_audit": ".guo",
    "closedness_audit": ".guo",
    "estimate_to_dict": ".guo",
    "estimate_from_dict": ".guo",
}

__all__ = ["__version__", *sorted(_EXPORTS)]


def __getattr__(name: str) -> Any:
    module_name = _EXPORTS.get(name)
    if module_name is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    value = getattr(importlib.import_module(module_name, __name__), name)
    globals()[name] = value
    return value


def __dir__() -> list[str]:
    return sorted(set(globals()) | set(__all__))
