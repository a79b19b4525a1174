from pypegasus.config import BicycleTrainParams
from pypegasus.envs.bicycle import train_bicycle

params = BicycleTrainParams(optimizer="hill_climb", iters=100, horizon=500, m_scenarios=30)
result = train_bicycle(params, seed=1)

print(result.search.best_estimate)  # objective on the pinned training scenarios
print(result.evaluation.upright_fraction)  # fresh rides
print(result.theta)  # 30 weights, w1 then w2
