import numpy as np
from pypegasus import ConstantPolicy, TabularMDP, exact_value_tabular

# Same coin as a transition table: states 0, 1, 2 and one action
P = np.zeros((3, 1, 3))
P[0, 0] = [0.0, 0.3, 0.7]
P[1, 0, 1] = 1.0
P[2, 0, 2] = 1.0

mdp = TabularMDP(
    transitions=P,
    rewards=np.array([0.0, 1.0, 0.0]),
    initial=np.array([1.0, 0.0, 0.0]),
    absorbing=np.array([False, True, True]),
)

print(exact_value_tabular(mdp, ConstantPolicy(0), gamma=0.9))  # 0.27
