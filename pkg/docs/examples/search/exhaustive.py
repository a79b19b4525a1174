from pypegasus import draw_scenarios, exhaustive_search
from pypegasus.envs import GridBatchEstimator, build_gridworld, gridworld_policy_class

model = build_gridworld()
scenarios = draw_scenarios(model, m=30, h=100, seed=1)

# Scores all 65536 policies in one vectorized pass
estimator = GridBatchEstimator(model, scenarios, 100)
report = exhaustive_search(estimator, gridworld_policy_class())

print(report.best_index, report.best_estimate)
print(report.metrics.duration_ms)
