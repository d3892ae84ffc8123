"""s-parametrized spherical phase-space functions for spin-J states.

Glauber P (s = 1), Wigner (s = 0), Husimi Q (s = -1) and every intermediate
representation of finite-dimensional spin states, their inter-conversion by
spherical convolution, simulated Stern-Gerlach tomography with band-limited
reconstruction, spherical Radon transforms, and density-matrix recovery.
"""

from .convolution import convolve, deconvolution_condition, transform_s
from .ensemble import EnsembleErrorReport, ExperimentConfig, run_ensemble_experiment
from .errors import (
    ConditioningError,
    ContractError,
    DomainError,
    FormatError,
    IntegrityError,
    SpinPhaseError,
)
from .halfint import HalfInteger, RotationAngles, half_integer
from .parity import (
    GammaCoefficients,
    ParityOperator,
    gamma,
    parity_operator,
    radon_parity,
    sphere_radius,
    tensor_op,
)
from .phasespace import (
    PhasePoint,
    SphericalFunction,
    evaluate_direct,
    evaluate_series,
    integrate_sphere,
    kernel_function,
    phase_point,
    planar_limit_error,
    planar_reference,
    spherical_dot,
    spherical_function,
    to_spherical_coeffs,
)
from .radon import great_circle_average, radon_forward, radon_inverse
from .specialfn import (
    clebsch_gordan,
    legendre_p,
    log_factorial,
    rotation_matrix,
    spherical_harmonic,
    wigner_small_d,
)
from .states import (
    DensityMatrix,
    PureState,
    angular_momentum,
    make_named_state,
    maximally_mixed,
    random_hs,
    random_pure,
    validate_density,
    validate_pure,
)
from .tomography import (
    GridSpec,
    GridSamples,
    SternGerlachRecord,
    dh_weights,
    full_tomography,
    pointwise_reconstruct,
    probabilities,
    reconstruct_density,
    reconstruct_density_from_probs,
    reconstruction_conditioning,
    sample_counts,
)

__version__ = "0.1.0"
