"""fracspec: fractal strings, their zeta functions, and the spectral
(multiplicative shift) operator, computable at desk scale.

Scalars are plain Python complex numbers; the pole of zeta at s = 1 is a
distinguished non-finite marker (``zeta.POLE``), never a large float.
"""

from .errors import (
    AccuracyNotReached,
    FracspecError,
    InsufficientAtoms,
    NotPrime,
    PoleAtComplexDimension,
    PoleAtNonpositiveInteger,
    PoleAtOne,
    PoleLine,
    PoleOnSegment,
    UnboundedTail,
)
from .primes import is_prime, mobius, primes_up_to
from .zeta import (
    DEFAULT_CONFIG,
    POLE,
    EvalConfig,
    ZeroBracket,
    completed_xi,
    find_critical_zeros,
    gamma,
    line_modulus_extrema,
    zeta,
    zeta_line,
)
from .strings import (
    CANTOR,
    ComplexDimension,
    GeneralizedFractalString,
    SelfSimilarSpec,
    StringStats,
    closed_form_zeta,
    complex_dimensions,
    counting_function,
    dimension_estimate,
    from_atoms,
    geometric_zeta,
    make_cantor_string,
    make_power_string,
    make_unit_string,
    minkowski_content_estimate,
    power_minkowski_content,
    power_minkowski_estimate,
    series_tail_bound,
    string_from_json,
    string_spec_to_json,
    string_stats,
    tube_volume,
    tube_volume_cantor_series,
    tube_volume_direct,
)
from .spectral import (
    ExplicitFormulaResult,
    SpectralMeasure,
    WeylData,
    density_integral,
    explicit_formula_counting,
    explicit_formula_density,
    power_weyl_data,
    spectral_counting,
    spectral_density,
    spectral_measure,
    spectral_zeta_check,
    spectral_zeta_combined_bound,
    spectral_zeta_tail_bound,
    weyl_remainder_profile,
)
from .operator import (
    PhaseReport,
    SampledFunction,
    SpectrumCurve,
    almost_invertibility_verdict,
    apply_euler_factor,
    apply_inverse,
    apply_spectral_operator,
    counting_pullback,
    euler_product_apply,
    from_callable,
    indicator,
    norm_bound_check,
    phase_transition_scan,
    quasi_invertibility_verdict,
    shift,
    truncated_spectrum,
    unit_step,
    weighted_norm,
)

__version__ = "0.1.0"
