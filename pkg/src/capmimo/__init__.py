"""Continuous-aperture multi-user pattern design toolkit.

Current patterns on a planar aperture are optimized directly in a truncated
wavenumber basis; discrete patch precoding, conjugate match filtering, and an
interference-free relaxation provide the reference points. The experiments
module turns all of it into reproducible sweep tables.
"""

from .baselines import (
    DigitalSolveResult,
    PatchLayout,
    digital_patch_setup,
    interference_free_bound,
    interference_free_solve,
    mf_design,
    patch_channels,
    patch_layout,
    solve_digital_mimo,
)
from .closedform import (
    gram_matrix,
    rate_from_snr,
    single_user_coeff_optimum,
    single_user_optimum,
    top_eigenpair,
    truncated_snr,
)
from .emfield import (
    Aperture,
    QuadratureGrid,
    WaveParams,
    build_grid,
    channel_samples,
    green_far_field,
    green_free_space,
    integrate,
)
from .errors import (
    ConfigurationError,
    DegenerateChannelError,
    GridResolutionError,
    NumericalFailure,
    SingularityError,
)
from .experiments import (
    ResultRow,
    Scenario,
    circle_users,
    default_scenario,
    dump_patterns,
    emit_results,
    load_config,
    parse_results,
    pattern_rows,
    random_scenario,
    scenario_from_config,
    solver_from_config,
    sweep_aperture,
    sweep_geometry,
    sweep_power,
    wavenumber_gain_study,
)
from .metrics import (
    LinkBudget,
    mse,
    mse_from_fields,
    sinr_from_fields,
    snr_loss_bound,
    sum_rate,
    sum_rate_from_fields,
    surrogate_rate,
    transmit_power,
)
from .solver import (
    SolveResult,
    SolverConfig,
    find_zeta,
    run_pdm,
    update_psi,
    update_rho,
    update_w,
)
from .wavenumber import (
    FourierBasis,
    TruncationOrder,
    channel_spectrum,
    energy_ratio_eta,
    in_band_mask,
    pattern_coeffs,
    spectral_energy,
    synthesize_pattern,
    truncation_order,
)

__version__ = "0.1.0"
