"""Multi-information-source Bayesian optimization with an augmented Gaussian process."""

from ._misoagp import (
    ConfigError,
    Error,
    GaussianProcess,
    InvalidArgument,
    SourceEvaluationError,
    benchmark_names,
    beta,
    evaluate_benchmark,
    expected_improvement,
    latin_hypercube,
    probability_of_improvement,
    read_trace,
    run_experiment,
    validate_config,
)

__all__ = [
    "ConfigError",
    "Error",
    "GaussianProcess",
    "InvalidArgument",
    "SourceEvaluationError",
    "benchmark_names",
    "beta",
    "evaluate_benchmark",
    "expected_improvement",
    "latin_hypercube",
    "probability_of_improvement",
    "read_trace",
    "run_experiment",
    "validate_config",
]
