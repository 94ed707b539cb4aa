"""
Transmission versus deployed fiber
==================================

Moving splitting from the field into the central office shortens the lossy
part of every Alice-to-Bob path, but each extra central-office port needs
its own feeder fiber. This script walks through both extremes and the
plans in between for a 64-user PON with a 15 km feeder and 5 km drops.
"""
from ponqkd import SystemParams, TopologyPlan, key_metrics, link_budget, splitter_loss_equivalent_km

params = SystemParams()  # mu=0.4, eta=0.1, d_B=1e-5, V=0.98, 0.25 dB/km

print(f"{'N1':>4} {'N2':>4} {'loss dB':>8} {'fiber km':>9} {'QBER':>7} {'secure frac':>11} {'FOM 1/km':>10}")
for i in range(7):
    plan = TopologyPlan.from_split(64, 2 ** i, 15.0, 5.0)
    b = link_budget(params, plan)
    m = key_metrics(params, plan)
    print(f"{plan.n1:>4} {plan.n2:>4} {b.loss_db:8.2f} {b.fiber_total_km:9.0f} "
          f"{m.qber:7.4f} {m.secure_fraction:11.4f} {m.fom:10.3e}")

# A 1xN splitter costs as much as this much extra fiber would:
for ratio in (16, 32, 128):
    print(f"1x{ratio}: {splitter_loss_equivalent_km(ratio, 0.25):5.1f} km at 0.25 dB/km, "
          f"{splitter_loss_equivalent_km(ratio, 0.2):5.1f} km at 0.2 dB/km")
