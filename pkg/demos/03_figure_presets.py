"""
Reproducing the published figure sweeps
=======================================

Each preset is a list of sweep specs; ``run_sweep`` turns one into plot-ready
records. Here we print the optimum log2(N1) against feeder length (fig4)
and the Q/secure-fraction envelope for two dark-count rates (fig5).
"""
from ponqkd import figure_preset, run_sweep
from ponqkd.sweep import records_to_csv

print("optimum log2(N1) vs L1 (km)")
for spec in figure_preset("fig4"):
    recs = run_sweep(spec)
    print(f"{spec.label:>6}: " + " ".join(f"{int(r.log2_n1_opt)}" for r in recs))

print("\nfig5: optimum-plan QBER and secure fraction, N = 64")
for spec in figure_preset("fig5"):
    recs = run_sweep(spec)
    q_max = max(r.qber for r in recs)
    sf_min = min(r.secure_fraction for r in recs)
    print(f"{spec.label}: max Q = {q_max:.4f}, min secure fraction = {sf_min:.3f}")

# CSV is what an external plotting tool would consume
spec = figure_preset("fig6")[0]
print("\n" + records_to_csv(run_sweep(spec))[:400])
