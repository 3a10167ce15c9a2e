"""Mean failure rates, aging intensities, stochastic orders and kernel estimates.

Quick tour::

    >>> from agingmeans import Weibull, profile
    >>> p = profile(Weibull(0.5, 1.5), [0.5, 1.0, 2.0])
    >>> p.ai.round(6).tolist()
    [1.5, 1.5, 1.5]
"""

from .classification import BoundsReport, ClassVerdict, check_bounds, classify, classify_profile
from .errors import (
    AgingError,
    AllCensored,
    BandwidthTooSmall,
    DivergentFunctional,
    EmptyData,
    EmptyList,
    MixedSupports,
    NonPositiveEntry,
    NonPositiveRate,
    OutOfSupport,
    ParseError,
    QuadratureFailure,
)
from .estimation import HazardEstimate, SurvivalSample, estimated_profile, ingest, kernel_hazard
from .functionals import (
    AgingProfile,
    afr,
    ai,
    discrete_mean,
    gai,
    gfr,
    hai,
    hfr,
    interval_am,
    interval_gm,
    interval_hm,
    profile,
    residual,
    specific_aging_factor,
)
from .models import (
    Composite,
    ErlangLike,
    Exponential,
    HazardModel,
    Pareto,
    Rayleigh,
    Residual,
    Tabulated,
    TruncatedLogWeibull,
    Uniform,
    Weibull,
    closed_form_oracle,
    hazard,
    parse_model,
    random_model,
)
from .orders import check_order, check_orders, verify_implications
from .quadrature import integrate
from .simstudy import SimConfig, SimReport, run_study, sample_weibull
from .systems import SeriesSystem, series, verify_series_bounds

__all__ = [
    "BoundsReport",
    "ClassVerdict",
    "check_bounds",
    "classify",
    "classify_profile",
    "AgingError",
    "AllCensored",
    "BandwidthTooSmall",
    "DivergentFunctional",
    "EmptyData",
    "EmptyList",
    "MixedSupports",
    "NonPositiveEntry",
    "NonPositiveRate",
    "OutOfSupport",
    "ParseError",
    "QuadratureFailure",
    "HazardEstimate",
    "SurvivalSample",
    "estimated_profile",
    "ingest",
    "kernel_hazard",
    "AgingProfile",
    "afr",
    "ai",
    "discrete_mean",
    "gai",
    "gfr",
    "hai",
    "hfr",
    "interval_am",
    "interval_gm",
    "interval_hm",
    "profile",
    "residual",
    "specific_aging_factor",
    "Composite",
    "ErlangLike",
    "Exponential",
    "HazardModel",
    "Pareto",
    "Rayleigh",
    "Residual",
    "Tabulated",
    "TruncatedLogWeibull",
    "Uniform",
    "Weibull",
    "closed_form_oracle",
    "hazard",
    "parse_model",
    "random_model",
    "check_order",
    "check_orders",
    "verify_implications",
    "integrate",
    "SimConfig",
    "SimReport",
    "run_study",
    "sample_weibull",
    "SeriesSystem",
    "series",
    "verify_series_bounds",
]

__version__ = "0.1.0"
