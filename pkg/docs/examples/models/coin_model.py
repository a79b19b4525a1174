from pypegasus import SimModel, inverse_cdf_model

# One (s, a) pair: p <= 0.3 goes to 1, anything larger goes to 2
step = inverse_cdf_model({1: 0.3, 2: 0.7})

model = SimModel(
    transition=lambda s, a, p: step(p[0]) if s == 0 else s,
    reward=lambda s: 1.0 if s == 1 else 0.0,
    initial=lambda src: 0,
    gamma=0.9,
    r_max=1.0,
    d_P=1,
    absorbing=lambda s: s != 0,
    name="coin",
)
