from pypegasus.cli import main

# Same as: pypegasus --config docs/examples/cli/bounds.json --seed 3
exit_code = main(["--config", "docs/examples/cli/bounds.json", "--seed", "3"])
print(exit_code)  # 0 ok, 1 runtime failure, 2 bad config or usage
