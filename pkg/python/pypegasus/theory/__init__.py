"""Exact interval unions, the non-convergence counterexample and sample-size bounds."""

from pypegasus.theory.bounds import (
    BoundInputs,
    capacity_log_bound,
    covering_bound,
    log_covering_bound,
    sample_size_bound,
)
from pypegasus.theory.counterexample import (
    CounterexampleMDP,
    counterexample_demo,
    max_constant_policy_deviation,
    simple_counterexample_model,
)
from pypegasus.theory.intervals import (
    IntervalUnion,
    find_evading_union,
    index_of_union,
    measure,
    union_contains,
    union_from_index,
)

__all__ = [
    "BoundInputs",
    "CounterexampleMDP",
    "IntervalUnion",
    "capacity_log_bound",
    "counterexample_demo",
    "covering_bound",
    "find_evading_union",
    "index_of_union",
    "log_covering_bound",
    "max_constant_policy_deviation",
    "measure",
    "sample_size_bound",
    "simple_counterexample_model",
    "union_contains",
    "union_from_index",
]
