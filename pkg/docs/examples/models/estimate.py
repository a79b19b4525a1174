from pypegasus import (
    ConstantPolicy,
    SimModel,
    draw_scenarios,
    estimate_value,
    horizon_time,
    inverse_cdf_model,
)

step = inverse_cdf_model({1: 0.3, 2: 0.7})
model = SimModel(
    transition=lambda s, a, p: step(p[0]) if s == 0 else s,
    reward=lambda s: 1.0 if s == 1 else 0.0,
    initial=lambda src: 0,
    gamma=0.9,
    r_max=1.0,
    d_P=1,
    absorbing=lambda s: s != 0,
)

# How many steps before the tail is worth less than 0.01
h = horizon_time(0.01, gamma=model.gamma, r_max=model.r_max)

# Draw the noise once. Same seed, same scenarios, same estimate.
scenarios = draw_scenarios(model, m=1000, h=h, seed=7)

value, per_scenario = estimate_value(model, ConstantPolicy(0), scenarios, h)
print(f"h={h} value={value:.4f}")  # close to 0.27
