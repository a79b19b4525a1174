from pypegasus.theory import BoundInputs, capacity_log_bound, covering_bound, sample_size_bound

print(covering_bound(0.1, m_big=1.0, d=1))

inputs = BoundInputs(epsilon=0.5, delta=0.1, d=1, d_S=2, d_P=1, B=2.0, B_R=1.0, gamma=0.9)
print(inputs.horizon)  # derived from epsilon and gamma
print(capacity_log_bound(inputs))  # natural log, so huge capacities stay finite
print(sample_size_bound(inputs))  # scenarios needed for uniform epsilon-accuracy
