"""pypegasus - policy search on fixed scenarios.

A stochastic (PO)MDP is written as a deterministic simulative model
``g(s, a, p)`` driven by explicit uniform numbers ``p``. Drawing the numbers
once (a scenario set) turns every policy's estimated value into a plain
deterministic function, which any optimizer can then search.

Example:
    >>> from pypegasus import draw_scenarios, estimate_value, exhaustive_search
    >>> from pypegasus.envs import GridBatchEstimator, build_gridworld, gridworld_policy_class
    >>> model = build_gridworld()
    >>> scenarios = draw_scenarios(model, m=30, h=100, seed=1)
    >>> report = exhaustive_search(
    ...     GridBatchEstimator(model, scenarios, 100), gridworld_policy_class()
    ... )
    >>> report.best_index, report.best_estimate

    >>> # Access metrics of an estimate
    >>> est = estimate_value(model, report.best_policy, scenarios, h=100)
    >>> print(est.value)                # Works like a (value, per_scenario) tuple
    >>> print(est.metrics.duration_ms)  # Access metrics

    >>> # Custom logger and parallelism
    >>> import logging
    >>> from pypegasus import set_default_workers, set_logger
    >>> set_logger(logging.getLogger("experiments"))
    >>> set_default_workers(8)
"""

from __future__ import annotations

from pypegasus._internal._logging import (
    set_logger,
    set_run_id,
)
from pypegasus._internal._metrics import EvaluationMetrics, SearchMetrics, ValueEstimate
from pypegasus.config import (
    RunConfig,
    clear_default_workers,
    dump_config,
    get_default_workers,
    parse_config,
    set_default_workers,
)
from pypegasus.fidelity import FidelityReport, fidelity_check
from pypegasus.model import DiscountMode, SimModel, StateKind, inverse_cdf_model
from pypegasus.policies import (
    ConstantPolicy,
    FinitePolicyClass,
    IndexedPolicyClass,
    ParamPolicy,
    TabularPolicy,
)
from pypegasus.rollout import (
    Trajectory,
    estimate_value,
    hoeffding_halfwidth,
    horizon_time,
    rollout,
    step_reward_means,
)
from pypegasus.scenarios import Scenario, draw_scenarios, dump_scenarios, load_scenarios
from pypegasus.search import (
    SearchReport,
    exhaustive_search,
    gradient_ascent,
    hill_climb,
    numerical_gradient,
    param_objective,
    policy_estimator,
)
from pypegasus.tabular import TabularMDP, exact_value_tabular, exact_values_batch

__version__ = "0.1.0"

__all__ = [
    # Models
    "DiscountMode",
    "SimModel",
    "StateKind",
    "TabularMDP",
    "inverse_cdf_model",
    # Scenarios and estimation
    "Scenario",
    "Trajectory",
    "draw_scenarios",
    "dump_scenarios",
    "estimate_value",
    "exact_value_tabular",
    "exact_values_batch",
    "fidelity_check",
    "FidelityReport",
    "hoeffding_halfwidth",
    "horizon_time",
    "load_scenarios",
    "rollout",
    "step_reward_means",
    # Policies and search
    "ConstantPolicy",
    "FinitePolicyClass",
    "IndexedPolicyClass",
    "ParamPolicy",
    "SearchReport",
    "TabularPolicy",
    "exhaustive_search",
    "gradient_ascent",
    "hill_climb",
    "numerical_gradient",
    "param_objective",
    "policy_estimator",
    # Metrics (public classes for type hints)
    "EvaluationMetrics",
    "SearchMetrics",
    "ValueEstimate",
    # Logging
    "set_logger",
    "set_run_id",
    # Run config
    "RunConfig",
    "parse_config",
    "dump_config",
    "set_default_workers",
    "get_default_workers",
    "clear_default_workers",
    # Version
    "__version__",
]
