"""Generalized coherent-state families with temporal-stability phases, their
dual families, and a verification harness, all on truncated Fock spaces.

The package is organized around five layers:

    spectra       level sequences e_n, duals eps_n = n^2/e_n, and the
                  log-domain factorial moments rho(n), mu(n)
    numerics      log-gamma, modified Bessel I, Gauss-Legendre quadrature,
                  dense complex matrix exponential
    states        coherent states, dual states, parity and conjugate-pair
                  superpositions, time-labeled families
    operators     deformed ladder operators, Hamiltonians, phase evolution,
                  conjugate pairs, displacement exponentials, the diagonal
                  gk-to-dual interpolation map
    verify        criteria checks and machine-readable reports

plus a `gkdual` command-line frontend (see `gkdual --help`).
"""

from .errors import (
    DegenerateStateError,
    GkdualError,
    IndexRangeError,
    ParameterError,
    QuadratureError,
    RadiusError,
    ShapeMismatchError,
    SpectrumValidationError,
    TruncationError,
)
from .spectra import (
    MomentTable,
    SpectrumModel,
    SpectrumValidation,
    custom_from_json,
    custom_spectrum,
    dual_eigenvalue,
    dual_eigenvalues,
    dual_nonlinearity,
    eigenvalue,
    eigenvalues,
    estimate_radius,
    harmonic,
    hydrogen,
    infinite_well,
    moment_table,
    morse,
    nonlinearity,
    parse_model_spec,
    penson_solomon,
    poschl_teller,
    su11_bg,
    su11_gp,
    validate_spectrum,
)
from .numerics import (
    NumericsConfig,
    QuadratureRule,
    WeightFunction,
    bessel_i,
    gauss_rule,
    integrate,
    log_gamma,
    matrix_exp,
)
from .states import (
    FockVector,
    StateLabel,
    TruncConfig,
    cat,
    cat_distribution,
    dgkcs,
    even_odd,
    generalized_gkcs,
    gkcs,
    normalization,
    overlap,
    photon_distribution,
    state,
    temporally_stable_nonlinear,
)
from .operators import (
    AppliedVector,
    TruncatedOperator,
    apply,
    check_a,
    commutator,
    conjugate_b,
    displacement,
    dual_basis_reconstruction,
    evolution,
    expectation,
    hamiltonian,
    interpolator,
    ladder,
    number_operator,
)
from .verify import (
    CheckEntry,
    CriteriaReport,
    VerifyConfig,
    check_action_identity,
    check_closed_forms,
    check_eigenstate,
    check_resolution_identity,
    check_self_duality,
    check_temporal_stability,
    run_suite,
    z_grid,
)

__version__ = "0.1.0"
