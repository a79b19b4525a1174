from pypegasus import DiscountMode
from pypegasus.config import BicycleConfig
from pypegasus.envs.bicycle import evaluate_rides

# Goal 1000 m away; entering it pays gamma**tau for the fraction of the step spent outside
config = BicycleConfig(training_mode=False, horizon=2000)
weights = [0.0] * 30

report = evaluate_rides(config, weights, rides=20, seed=5, mode=DiscountMode.CONTINUOUS_GOAL)

print(report.upright_fraction, report.goal_fraction)
for ride in report.rides[:3]:
    print(ride.fell_at, ride.goal_at, ride.path_length)
