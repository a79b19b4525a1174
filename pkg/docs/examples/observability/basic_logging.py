import logging

from pypegasus import draw_scenarios, exhaustive_search
from pypegasus.envs import GridBatchEstimator, build_gridworld, gridworld_policy_class

# Enable INFO level logs for pypegasus
logging.basicConfig(level=logging.INFO)

model = build_gridworld()
scenarios = draw_scenarios(model, m=10, h=100, seed=1)
exhaustive_search(GridBatchEstimator(model, scenarios, 100), gridworld_policy_class())
# INFO:pypegasus:exhaustive_search target=gridworld duration_ms=412.3 evaluations=65536 best=-9.87
