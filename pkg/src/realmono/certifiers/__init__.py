"""Sampling-based certification and refutation of real monotonicity and its consequences."""

from .block import BlockReport, LipschitzReport, block_concavity_construction, block_unitary, lipschitz_probe
from .choi import (
    ChoiMatrix,
    ChoiReport,
    amplified,
    amplified_min_eig,
    analyse_map,
    apply_kraus,
    choi_of_linear_map,
    conjugation_map,
    identity_map,
    is_cp,
    kraus_map,
    kraus_operators,
    kraus_reconstruction_residual,
    transpose_map,
)
from .derivative import (
    amplification_residual,
    derivative_criterion,
    frechet_derivative,
    integral_reconstruction,
    sample_direction,
)
from .monotone import (
    certify_concave,
    certify_monotone,
    concave_margin,
    minimize_monotone_witness,
    monotone_margin,
    replay_monotone_witness,
)
from .report import (
    HYPOTHESIS_NOT_MET,
    NO_VIOLATION,
    VIOLATED,
    CertificateReport,
    run_trials,
    scaled_leq,
    trial_seed,
)
from .rigidity import AffineFit, affine_fit, induced_hermitian_map, re_dependence_margin, re_independence_test

__all__ = [
    "AffineFit", "BlockReport", "CertificateReport", "ChoiMatrix", "ChoiReport", "HYPOTHESIS_NOT_MET",
    "LipschitzReport", "NO_VIOLATION", "VIOLATED", "affine_fit", "amplification_residual", "amplified",
    "amplified_min_eig", "analyse_map", "apply_kraus", "block_concavity_construction", "block_unitary",
    "certify_concave", "certify_monotone", "choi_of_linear_map", "concave_margin", "conjugation_map",
    "derivative_criterion", "frechet_derivative", "identity_map", "induced_hermitian_map",
    "integral_reconstruction", "is_cp", "kraus_map", "kraus_operators", "kraus_reconstruction_residual",
    "lipschitz_probe", "minimize_monotone_witness", "monotone_margin", "re_dependence_margin",
    "re_independence_test", "replay_monotone_witness", "run_trials", "sample_direction", "scaled_leq",
    "transpose_map", "trial_seed",
]
