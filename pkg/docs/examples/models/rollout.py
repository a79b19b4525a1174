from pypegasus import ConstantPolicy, SimModel, draw_scenarios, inverse_cdf_model, rollout

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

scenario = draw_scenarios(model, m=1, h=5, seed=1)[0]
tr = rollout(model, ConstantPolicy(0), scenario, h=5)

print(tr.states)  # [0, 1, 1, 1, 1, 1] or [0, 2, 2, 2, 2, 2]
print(tr.rewards)  # absorbing states pay on entry, then 0
print(tr.absorbed_at)  # 1
print(tr.discounted_return(model.gamma))
