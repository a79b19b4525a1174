import numpy as np
from pypegasus import draw_scenarios, numerical_gradient
from pypegasus.config import BicycleConfig
from pypegasus.envs import BicycleBatchEstimator, build_bicycle_model

config = BicycleConfig(horizon=300)
model = build_bicycle_model(config)
scenarios = draw_scenarios(model, m=20, h=300, seed=4)

# Vectorized over scenarios, agrees with estimate_value to about 1e-9
estimator = BicycleBatchEstimator(config, scenarios, 300)

theta = np.zeros(30)
print(estimator(theta))
print(numerical_gradient(estimator, theta, step=1e-3))
