import numpy as np
from pypegasus import numerical_gradient
from pypegasus.exceptions import NonFiniteValueError


def objective(theta):
    return float(np.log(theta[0]))  # NaN below zero


try:
    numerical_gradient(objective, np.array([0.0]), step=1e-3)
except NonFiniteValueError as e:
    print(e.point, e.value)
