import numpy as np
from pypegasus.envs.gridworld import exact_policy_values, policy_from_index

# Exact V(pi) of all 65536 policies from one batched linear solve
values = exact_policy_values()
best = int(np.argmax(values))

print(best, values[best])
print(policy_from_index(best).table)  # one action per wall observation
