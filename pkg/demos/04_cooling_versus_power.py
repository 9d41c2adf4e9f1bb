"""
Cooling on resonance versus input power
=======================================

On resonance the optical damping is linear in the input power, so the
effective Q falls as Q_m / (1 + P / P_1).  Cold damping lowers the mode
temperature to T_bath * Q_eff / Q_m.
"""
from msiopto import effective_temperature, load_config, run

cfg = load_config(kind="power", overrides=["sweep.count=8"])
t = run(cfg)
print(f"position {cfg.position}, Delta = 0, Q_m = {cfg.mech.q_m:.3g}")
for p, q in zip(t.grid, t.columns["Q_eff"]):
    print(f"  P_in = {p * 1e3:7.2f} mW   Q_eff = {q:10.4g}   "
          f"T_eff = {effective_temperature(q, cfg.mech):8.3f} K")

print(f"\nQ_eff = 250 at 293 K corresponds to "
      f"{effective_temperature(250.0, cfg.mech) * 1e3:.0f} mK")
