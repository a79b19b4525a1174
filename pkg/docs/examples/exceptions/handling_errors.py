from pypegasus import draw_scenarios, estimate_value, horizon_time
from pypegasus.envs import build_gridworld
from pypegasus.envs.gridworld import policy_from_index
from pypegasus.exceptions import (
    DimensionMismatchError,
    DomainError,
    EmptyScenarioSetError,
    PegasusError,
)

try:
    horizon_time(0.01, gamma=1.0, r_max=1.0)
except DomainError as e:
    print(f"Bad input: {e}")

model = build_gridworld()
try:
    estimate_value(model, policy_from_index(0), [], 100)
except EmptyScenarioSetError:
    print("Draw some scenarios first")

short = draw_scenarios(model, m=5, h=10, seed=1)
try:
    estimate_value(model, policy_from_index(0), short, 100)
except DimensionMismatchError as e:
    print(f"{e.what}: expected {e.expected}, got {e.actual}")

# Or catch everything from pypegasus
try:
    policy_from_index(70_000)
except PegasusError as e:
    print(f"pypegasus error: {e}")
