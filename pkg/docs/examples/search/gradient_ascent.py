import numpy as np
from pypegasus import gradient_ascent, numerical_gradient


def objective(theta):
    return -float(np.sum((theta - 3.0) ** 2))


print(numerical_gradient(objective, np.zeros(2), step=1e-3))  # [6, 6]

# Each move is capped at length `clamp`
report = gradient_ascent(
    objective, np.zeros(2), step_size=0.25, clamp=1.0, iters=100, grad_step=1e-3
)

print(report.best_policy, report.converged)
