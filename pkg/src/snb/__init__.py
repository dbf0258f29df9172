"""Stopped negative binomial toolkit.

The number of Bernoulli draws needed to see either s successes or t
failures, whichever comes first: exact distribution functions, brute-force
oracles, reproducible simulation, a conjugate Bayesian layer, a CLI, and a
small monitoring service.
"""

from .bayes import (
    BetaPrior,
    PosteriorMixture,
    posterior,
    posterior_given_endpoint,
    predicted_success_probability,
    predictive_pmf,
    predictive_pmf_hypergeometric,
    prior_times_likelihood,
)
from .dist import (
    Endpoint,
    EndpointMass,
    Moments,
    SnbParams,
    cdf,
    conditional_remaining,
    endpoint_split,
    mgf,
    moments,
    pmf,
    quantile,
    success_probability,
    support,
)
from .errors import (
    AccuracyError,
    DegenerateDistributionError,
    DomainError,
    EnumerationLimitError,
    SnbError,
    TrialStoppedError,
)
from .oracle import (
    ENUMERATION_MAX,
    EnumeratedLaw,
    enumerate_conditional_law,
    enumerate_law,
    quadrature,
)
from .sampler import (
    ALGORITHMS,
    SeededGenerator,
    TrajectorySample,
    empirical_pmf,
    sample_n,
    sample_path,
)
from .special import log_beta, log_choose, reg_inc_beta
from .tables import (
    FORMATS,
    OutputTable,
    design_table,
    format_cell,
    moments_table,
    parse_grid,
    pmf_table,
    posterior_table,
    predictive_table,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "AccuracyError",
    "BetaPrior",
    "DegenerateDistributionError",
    "DomainError",
    "ENUMERATION_MAX",
    "Endpoint",
    "EndpointMass",
    "EnumeratedLaw",
    "EnumerationLimitError",
    "FORMATS",
    "Moments",
    "OutputTable",
    "PosteriorMixture",
    "SeededGenerator",
    "SnbError",
    "SnbParams",
    "TrajectorySample",
    "TrialStoppedError",
    "cdf",
    "conditional_remaining",
    "design_table",
    "empirical_pmf",
    "endpoint_split",
    "enumerate_conditional_law",
    "enumerate_law",
    "format_cell",
    "log_beta",
    "log_choose",
    "mgf",
    "moments",
    "moments_table",
    "parse_grid",
    "pmf",
    "pmf_table",
    "posterior",
    "posterior_given_endpoint",
    "posterior_table",
    "predicted_success_probability",
    "predictive_pmf",
    "predictive_pmf_hypergeometric",
    "predictive_table",
    "prior_times_likelihood",
    "quadrature",
    "quantile",
    "reg_inc_beta",
    "sample_n",
    "sample_path",
    "success_probability",
    "support",
    "__version__",
]
