from pypegasus.envs import gridworld_experiment

# 50 trials; each m searches the first m scenarios of the trial and scores the winner exactly
result = gridworld_experiment([1, 5, 30], trials=50, seed=1, variants=["normal", "complex"])

print(f"opt={result.opt:.4f}")
for row in result.rows:
    print(row.variant, row.m, round(row.mean_value, 4), round(row.stderr, 4))
