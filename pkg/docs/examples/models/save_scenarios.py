from pathlib import Path

from pypegasus import draw_scenarios, dump_scenarios, load_scenarios
from pypegasus.envs import build_gridworld

model = build_gridworld()
scenarios = draw_scenarios(model, m=30, h=100, seed=1)

# Plain text, 17 significant digits, so floats come back bit for bit
Path("scenarios.txt").write_text(dump_scenarios(scenarios))
again = load_scenarios(Path("scenarios.txt").read_text())

assert again == scenarios
