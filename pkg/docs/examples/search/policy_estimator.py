from pypegasus import FinitePolicyClass, draw_scenarios, exhaustive_search, policy_estimator
from pypegasus.envs import build_gridworld
from pypegasus.envs.gridworld import policy_from_index

model = build_gridworld()
scenarios = draw_scenarios(model, m=10, h=100, seed=3)

# Any model works through the generic rollout estimator
candidates = FinitePolicyClass([policy_from_index(i) for i in (0, 21845, 43690, 65535)])
report = exhaustive_search(policy_estimator(model, scenarios, 100), candidates)

# Ties go to the lowest index
print(report.best_index, report.trace)
