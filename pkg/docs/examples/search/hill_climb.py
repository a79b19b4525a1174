import numpy as np
from pypegasus import hill_climb


# Any deterministic objective theta -> float
def objective(theta):
    return -float(np.sum((theta - 3.0) ** 2))


report = hill_climb(objective, np.zeros(4), perturb_scale=0.5, iters=500, seed=1)

print(report.best_policy)  # close to [3, 3, 3, 3]
print(report.best_estimate, report.evaluations)
