from pypegasus import draw_scenarios, exhaustive_search
from pypegasus.envs import GridBatchEstimator, build_gridworld, gridworld_policy_class, wrap_complex

# Same dynamics, but the step sees (k(s, a) * p) mod 1 instead of p
model = wrap_complex(build_gridworld(), seed=0)
scenarios = draw_scenarios(model, m=30, h=100, seed=1)

report = exhaustive_search(GridBatchEstimator(model, scenarios, 100), gridworld_policy_class())
print(report.best_index, report.best_estimate)
