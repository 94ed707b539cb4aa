"""Splitting-ratio planning for BB84 decoy-state QKD over two-stage tree PONs."""
from .model import (
    DEFAULT_PARAMS,
    KeyMetrics,
    LinkBudget,
    SystemParams,
    TopologyPlan,
    binary_entropy,
    dark_count_qber,
    fiber_transmission,
    key_metrics,
    link_budget,
    optimal_mu,
    qber,
    secure_fraction,
    splitter_loss_equivalent_km,
    visibility_qber,
)
from .montecarlo import SimConfig, SimResult, expected_qber_full, simulate_qber
from .optimizer import (
    Candidate,
    ContinuousOptimum,
    OptimizationResult,
    Scenario,
    eq6_residual,
    select_discrete,
    solve_continuous,
)
from .sweep import SweepRecord, SweepSpec, figure_preset, run_sweep

__version__ = "0.1.0"
