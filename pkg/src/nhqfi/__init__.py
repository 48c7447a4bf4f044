"""Quantum Fisher information of a damped qubit with renormalized non-Hermitian evolution.

The package computes and cross-validates the estimation precision (QFI) of
the amplitude and phase of a qubit superposition that passes through a
phase gate, an amplitude-damping channel, and an optional trace-renormalized
non-Hermitian evolution applied before or after the channel.
"""

from .errors import (
    DenominatorVanishes,
    ExceptionalPoint,
    IncompleteKraus,
    NearBoundaryIllConditioned,
    NhqfiError,
    NoInteriorOptimum,
    NotAState,
    NotHermitian,
    NotPure,
    PtRegimeError,
    RankDeficientDerivative,
    VanishingNorm,
    ZeroInformation,
)
from .qmat import (
    ID2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    eig2_hermitian,
    expm2,
    from_bloch,
    to_bloch,
    validate_state,
)
from .channels import (
    amplitude_damping,
    apply_channel,
    delta_factor,
    phase_gate,
    prepare_input,
)
from .nonhermitian import (
    EvolvedState,
    GeneralParams,
    PtParams,
    evolve_renormalized,
    general_evolution,
    general_hamiltonian,
    pt_evolution,
    pt_hamiltonian,
)
from .qfi import ParamCurve, QfiValue, cramer_rao_bound, qfi_bloch, qfi_pure, qfi_spectral
from .schemes import (
    ORDERS,
    SchemeConfig,
    SchemeOutput,
    baseline_qfi,
    bloch_post,
    bloch_prior,
    delta_f,
    gamma_factor,
    qfi_closed_exact,
    qfi_post_full,
    qfi_post_optimal,
    qfi_prior_optimal,
    run_pipeline,
    success_prob_post,
    success_prob_prior,
)
from .sweep import (
    Axis,
    OptimumReport,
    StationarityReport,
    SweepSpec,
    optimize_nh,
    run_sweep,
    verify_stationarity,
)
from .figures import FIGURE_IDS, figure_table

__version__ = "0.1.0"
