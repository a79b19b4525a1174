from pypegasus import draw_scenarios, estimate_value
from pypegasus.envs import build_gridworld
from pypegasus.envs.gridworld import policy_from_index

model = build_gridworld()
scenarios = draw_scenarios(model, m=30, h=100, seed=1)

est = estimate_value(model, policy_from_index(21845), scenarios, 100)

value, per_scenario = est  # works like a plain pair
print(est.value)
print(est.metrics.duration_ms)
print(est.metrics.scenarios, est.metrics.steps)  # steps the simulator actually ran
