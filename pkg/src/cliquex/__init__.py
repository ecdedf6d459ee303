"""Maximal-clique statistics of Erdos-Renyi random graphs and hypergraphs."""

from ._accel import JIT_ENABLED
from .asymptotics import (
    AsymptoticParams,
    EnvelopeEval,
    envelope,
    f_continuous,
    h_stationary_point,
    markov_threshold_log,
    theorem_residual,
)
from .exact_engine import (
    ExpectationProfile,
    ModelParams,
    clique_term_log,
    exact_rational_expectation,
    expectation_profile,
    sandwich_bounds,
)
from .hypergraph import (
    HyperModelParams,
    conjecture_exponent,
    conjecture_lower_term_log,
    hyper_expectation_log,
    hyper_term_log,
)
from .numerics import (
    NEG_INF,
    ConvergenceError,
    DomainError,
    ResourceCapError,
    lambert_w0,
    log1m_exp,
    log_binomial,
    log_sum_exp,
)
from .oracle import RationalExpectation, exhaustive_expected_cliques, exhaustive_expected_hypercliques
from .sampling import (
    CliqueCensus,
    Graph,
    Hypergraph,
    MCEstimate,
    maximal_cliques,
    maximal_cliques_naive,
    maximal_hypercliques,
    maximal_hypercliques_naive,
    mc_estimate,
    sample_gnp,
    sample_hypergraph,
)

__version__ = "0.1.0"
