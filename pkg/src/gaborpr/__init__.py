"""Gabor phase retrieval on sparse sampling sets.

Closed-form Gabor/Bargmann transforms of chirped-Gaussian signals, sampling
geometries with density estimates, entire-function tooling, explicit
counterexample pairs and a verification harness.
"""

__version__ = "0.1.0"

from .signals import PHI, MultiSignal, PolyGaussAtom, Signal, combine, gaussian, hermite_basis, hermite_function
from .transforms import Measurements, bargmann, ff_extension, gabor, gauss_integral, hat_h, inner_product, magnitude_samples, norm
from .sampling import (
    GammaStar,
    LineConfig,
    SamplingSet,
    counting_function,
    density_estimate,
    gamma_star,
    grid_set,
    intersecting_lines_set,
    irregular_line_set,
    parallel_lines_set,
    product_set,
    ratio_rationality,
    single_line_set,
    sqrt_lattice,
)
from .entire import (
    PowerSeries,
    ZeroSet,
    canonical_product,
    carlson_gap,
    convergence_exponent,
    elementary_factor,
    g_series,
    genus,
    indicator_estimate,
    order_type_estimate,
    quartic_line_product,
    residue_component,
)
from .counterexamples import (
    ChirpExp,
    CanonicalQ,
    CounterexamplePair,
    LineExp,
    RationalAngleSum,
    lattice_pair,
    low_density_Q,
    nonequivalence_distance,
    pair_from_chirp,
    pair_from_exponential_Q,
    q_eval,
    q_realness_check,
    separable_pair,
    signal_with_hat,
)
from .lab import certify_counterexample, compare_profiles, equivalence_up_to_phase, reconstruction_probe
