import numpy as np
from pypegasus import hill_climb


def objective(theta):
    return -float(np.sum(theta**2))


report = hill_climb(objective, np.ones(3), perturb_scale=0.3, iters=200, seed=1)

print(report.metrics.duration_ms)
print(report.metrics.evaluations, report.metrics.iterations)
print(report.trace[:5])  # (iteration, estimate) pairs
