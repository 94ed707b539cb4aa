"""
Choosing the central-office splitter
====================================

``select_discrete`` scores every 1x2^k central-office splitter and keeps the
one with the best secure fraction per kilometre of fiber. The real-valued
optimum from the first-order condition is reported alongside; the winning
power of 2 always sits next to it.
"""
from ponqkd import Scenario, SystemParams, select_discrete

params = SystemParams()
for n_users in (16, 32, 64, 128):
    r = select_discrete(Scenario(params, n_users, 15.0, 5.0))
    where = "interior" if r.continuous.interior else "boundary"
    print(f"N={n_users:4d}: N1={r.n1_discrete:3d}, N2={r.n2_discrete:3d}, "
          f"FOM={r.metrics.fom:.4e} 1/km, continuous N1={r.continuous.n1:.3f} ({where})")

# The full candidate table for the 64-user network
r = select_discrete(Scenario(params, 64, 15.0, 5.0))
for c in r.candidates:
    mark = "<-" if c.n1 == r.n1_discrete else ""
    print(f"  N1={c.n1:3d}  Q={c.qber:.4f}  FOM={c.fom:.4e} {mark}")

# Without dark counts the QBER no longer depends on N1 and the least fiber wins.
dark_free = select_discrete(Scenario(SystemParams(dark_rate=0.0), 64, 15.0, 5.0))
print("dark-count free optimum:", dark_free.n1_discrete)
