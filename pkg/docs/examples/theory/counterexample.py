from pypegasus.theory import (
    counterexample_demo,
    max_constant_policy_deviation,
    simple_counterexample_model,
)

# With infinitely many actions, some policy is always estimated badly
report = counterexample_demo(m=100, seed=1)
print(report.v_hat, report.v_true, report.gap)  # 1.0 0.0 1.0

# The same MDP with one fixed union behaves
deviation = max_constant_policy_deviation(simple_counterexample_model(), m=100, seed=1)
print(deviation)  # shrinks like 1/sqrt(m)
