from pypegasus import clear_default_workers, set_default_workers
from pypegasus.envs import gridworld_experiment

# Threads change wall time only; the numbers stay the same
set_default_workers(8)
fast = gridworld_experiment([5, 30], trials=20, seed=3)

clear_default_workers()
slow = gridworld_experiment([5, 30], trials=20, seed=3)

assert fast.rows == slow.rows
