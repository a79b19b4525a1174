from pypegasus import fidelity_check
from pypegasus.envs import build_gridworld
from pypegasus.envs.gridworld import RIGHT, analytic_distribution

model = build_gridworld()

# Does g(s, a, p) with uniform p reproduce the intended next-state distribution?
reference = analytic_distribution(6, RIGHT)
report = fidelity_check(model, 6, RIGHT, reference, n=100_000, seed=1)

print(report.passed, report.diagnostic())
print(report.counts)
