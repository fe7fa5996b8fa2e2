"""ndflab: a numerical laboratory for continuous negative definite functions.

Verifies, exactly on finite discrete laws and statistically by Monte
Carlo, the moment inequality E psi(X-Y) <= E psi(X+Y), the positive
definiteness of the kernel psi(xi+eta) - psi(xi-eta), its variance
identity, the bifractional-Brownian-motion connection, and the failure
of the inequality for |x|^alpha with alpha > 2.
"""

from .core import (
    BernsteinSpec,
    BernsteinTriplet,
    ConicSum,
    DimensionMismatch,
    EuclideanPower,
    FromTriplet,
    LevyTriplet,
    Log1p,
    NdfSpec,
    Power,
    SpecError,
    Subordinated,
    eval_bernstein,
    eval_psi,
    eval_psi_many,
    kernel_kpsi,
    metric_dpsi,
    ndf_from_json,
    ndf_to_json,
    subordinate,
)
from .distributions import (
    CounterexampleParams,
    DiscreteDistribution,
    EnumerationLimitError,
    RawAbsPower,
    SignPattern,
    counterexample_distribution,
    counterexample_gap_closed_form,
    counterexample_search,
    ess_bounds_check,
    exact_expectation,
    exact_gap,
    exact_signed_sum_gap,
    tail_identity_check,
)
from .kernels import GramResult, gram_matrix, psd_check, sine_decomposition_check, variance_identity
from .bbm import (
    BbmParams,
    GridPath,
    bbm_cov_matrix,
    bbm_covariance,
    bbm_sample_paths,
    empirical_covariance,
    kernel_bbm_identity_gap,
)
from .mc import (
    CounterexampleSampler,
    DiscreteSampler,
    GaussianIso,
    InequalityVerdict,
    McEstimate,
    SamplerSpec,
    UniformBox,
    mc_inequality_verdict,
    mc_pair_estimates,
    mc_signed_sum,
    sample,
)

__version__ = "0.1.0"
