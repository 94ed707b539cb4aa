"""Monte Carlo detection-event simulator for the QBER model.

Per pulse, a signal click occurs with probability p_sig = mu * eta * T
(T the full-path transmission) and an independent dark click with
probability d_B. Any click counts as a detection. A detection containing a
signal photon is wrong with probability (1 - V) / 2; a dark-only detection
carries a random bit and is wrong half the time.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence``. Each
partition draws from its own child stream ``SeedSequence(seed).spawn(k)[i]``,
so a result is reproducible for a fixed (seed, mode, pulses, partitions).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import SystemParams, TopologyPlan, link_budget

MODES = ("aggregate", "per-pulse")
CHUNK = 1 << 20


@dataclass(frozen=True)
class SimConfig:
    pulses: int = 100_000_000
    seed: int = 0
    mode: str = "aggregate"
    partitions: int = 1

    def __post_init__(self):
        if self.pulses < 1:
            raise ValueError("pulses must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.partitions < 1:
            raise ValueError("partitions must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class SimResult:
    pulses: int
    clicks: int
    errors: int
    q_est: float
    q_stderr: float
    sift_fraction: float
    q_expected_full: float


def signal_click_probability(params: SystemParams, plan: TopologyPlan) -> float:
    p_sig = params.mu * params.eta * link_budget(params, plan).t_total
    if p_sig > 1:
        raise ValueError(f"signal click probability {p_sig} exceeds 1")
    return p_sig


def expected_qber_full(params: SystemParams, plan: TopologyPlan) -> float:
    """Exact error rate per detection of the simulated click model.

    The analytic QBER formula is its limit for d_B << p_sig; it overestimates
    by roughly d_B / p_sig because it leaves dark counts out of the
    detection total.
    """
    p_sig = signal_click_probability(params, plan)
    d = params.dark_rate
    num = p_sig * (1 - params.visibility) / 2 + (1 - p_sig) * d / 2
    den = p_sig + (1 - p_sig) * d
    if den == 0:
        raise ValueError("no detections possible (p_sig = d_B = 0)")
    return num / den


def _outcome_probabilities(params: SystemParams, p_sig: float) -> np.ndarray:
    # signal-error, signal-ok, dark-only-error, dark-only-ok, no click
    e_sig = (1 - params.visibility) / 2
    p_dark = (1 - p_sig) * params.dark_rate
    probs = np.array([
        p_sig * e_sig,
        p_sig * (1 - e_sig),
        p_dark / 2,
        p_dark / 2,
        0.0,
    ])
    probs[4] = max(0.0, 1.0 - probs[:4].sum())
    return probs


def _aggregate(rng: np.random.Generator, pulses: int, probs: np.ndarray) -> tuple[int, int]:
    counts = rng.multinomial(pulses, probs)
    return int(counts[:4].sum()), int(counts[0] + counts[2])


def _per_pulse(rng: np.random.Generator, pulses: int, params: SystemParams,
               p_sig: float) -> tuple[int, int]:
    e_sig = (1 - params.visibility) / 2
    clicks = errors = 0
    remaining = pulses
    while remaining:
        n = min(remaining, CHUNK)
        signal = rng.random(n) < p_sig
        dark = rng.random(n) < params.dark_rate
        flip = rng.random(n)
        wrong = np.where(signal, flip < e_sig, flip < 0.5)
        click = signal | dark
        clicks += int(click.sum())
        errors += int((click & wrong).sum())
        remaining -= n
    return clicks, errors


def simulate_qber(params: SystemParams, plan: TopologyPlan, cfg: SimConfig = SimConfig()) -> SimResult:
    p_sig = signal_click_probability(params, plan)
    probs = _outcome_probabilities(params, p_sig)
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.partitions)
    base, extra = divmod(cfg.pulses, cfg.partitions)
    clicks = errors = 0
    for i, child in enumerate(children):
        n = base + (1 if i < extra else 0)
        if n == 0:
            continue
        rng = np.random.Generator(np.random.PCG64(child))
        if cfg.mode == "aggregate":
            c, e = _aggregate(rng, n, probs)
        else:
            c, e = _per_pulse(rng, n, params, p_sig)
        clicks += c
        errors += e
    if clicks == 0:
        raise ValueError("no detections simulated; QBER estimate undefined")
    q = errors / clicks
    return SimResult(
        pulses=cfg.pulses,
        clicks=clicks,
        errors=errors,
        q_est=q,
        q_stderr=math.sqrt(q * (1 - q) / clicks),
        sift_fraction=clicks / cfg.pulses,
        q_expected_full=expected_qber_full(params, plan),
    )
