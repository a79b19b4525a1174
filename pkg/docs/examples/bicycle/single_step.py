from pypegasus.config import BicycleConfig
from pypegasus.envs import BikeAction, BikeState, bike_step

config = BicycleConfig()
state = BikeState(omega=0.05)

# One step of the dynamics with explicit noise p in [0, 1]
nxt = bike_step(state, BikeAction(tau=0.5, nu=0.0), 0.5, dt=config.dt)
print(nxt.omega, nxt.theta, nxt.fallen)
