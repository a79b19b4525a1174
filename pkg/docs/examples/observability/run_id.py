import logging

from pypegasus import set_run_id
from pypegasus.envs import gridworld_experiment

logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s %(run_id)s")

# Every record gets run_id as an extra field
set_run_id("sweep-7")
gridworld_experiment([5], trials=10, seed=7)
