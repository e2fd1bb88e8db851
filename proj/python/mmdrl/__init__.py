"""Distributional reinforcement learning with maximum mean discrepancy.

Thin Python layer over the C++ core in ``mmdrl._core``.
"""

import json as _json

from ._core import (
    ConsistencyError,
    DiscreteMeasure,
    DivergenceError,
    DomainError,
    Kernel,
    chain_expected_return,
    counterexample_reward_probs,
    discretized_gaussian,
    evaluate_chain,
    gaussian_moment_series,
    greedy_herd,
    mixture,
    mmd,
    mmd_b_grad,
    mmd_b_squared,
    mmd_squared,
    pushforward_affine,
)
from ._core import run_experiment as _run_experiment

__all__ = [
    "ConsistencyError",
    "DiscreteMeasure",
    "DivergenceError",
    "DomainError",
    "Kernel",
    "chain_expected_return",
    "counterexample_reward_probs",
    "discretized_gaussian",
    "evaluate_chain",
    "gaussian_moment_series",
    "greedy_herd",
    "mixture",
    "mmd",
    "mmd_b_grad",
    "mmd_b_squared",
    "mmd_squared",
    "pushforward_affine",
    "run_experiment",
]


def run_experiment(kind, config=None, **overrides):
    """Run an experiment kind with a config dict; keyword overrides win.

    Returns (passed, summary_text).
    """
    doc = dict(config or {})
    doc.update(overrides)
    return _run_experiment(kind, _json.dumps(doc))
