"""Cesàro kernels, doubling weights and growth spaces of harmonic functions."""

from .diagnostics import (
    BOUNDED,
    UNBOUNDED,
    EquivalenceReport,
    GrowthReport,
    MixedNorm,
    dyadic_degrees,
    dyadic_radii,
    equivalence_report,
    equivalence_suite,
    estimate_with_A_check,
    gap_membership,
    growth_ratio_cesaro,
    growth_ratio_radial,
    growth_ratio_vp,
    mixed_norm,
    regular_growth_ratio,
    solid_core_norm,
    solid_hull_norm,
    trend_verdict,
)
from .expansions import (
    HarmonicExpansion,
    SphereGrid,
    cesaro_mean,
    convolve,
    dyadic_gap_series,
    evaluate,
    gap_series,
    parseval_norm,
    radial_lp_profile,
    sphere_grid,
    vp_sum,
)
from .kernels import (
    ZonalPoly,
    band_inverse_kernel,
    band_weight_kernel,
    cesaro_kernel,
    cutoff_profile,
    l1_norm,
    lp_norm,
    poisson_series,
    vp_kernel,
    zonal_value,
)
from .multipliers import (
    MultiplierSeq,
    apply_hf,
    apply_hf_inv,
    apply_iq,
    apply_multiplier,
    fn_bound_check,
    multiplier_criterion,
    regular_growth_mapping_check,
    theorem_mult_check,
)
from .seqcalc import (
    RealSequence,
    cesaro_means,
    cesaro_number,
    forward_difference,
    summation_by_parts_check,
    weighted_difference_sum,
)
from .weights import (
    LogPowerWeight,
    NotAWeightError,
    PowerWeight,
    QuadratureError,
    RegularizedWeight,
    Weight,
    blocks,
    doubling_constant,
    parse_weight,
    regularize,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
