# Benchmark suite for pypegasus estimators
