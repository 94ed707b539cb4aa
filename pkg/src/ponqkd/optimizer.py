"""Choice of the central-office splitting ratio N1.

Two routes are provided. ``solve_continuous`` finds the stationary point of
the figure of merit in real-valued N1, using the closed first-order
condition built on the small-Q entropy expansion
h(Q) ~ (Q - Q ln Q) / ln 2. ``select_discrete`` scores every power-of-2
splitter with the exact entropy and keeps the best one, which is the answer
a network planner actually deploys.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.optimize import brentq

from .model import (
    LN2,
    KeyMetrics,
    SystemParams,
    TopologyPlan,
    fiber_transmission_db,
    key_metrics,
    qber_at,
    secure_fraction,
    total_fiber_km,
)

ROOT_RTOL = 1e-10
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Scenario:
    params: SystemParams
    n_users: int
    l1_km: float
    l2_km: float

    def __post_init__(self):
        if isinstance(self.n_users, bool) or not isinstance(self.n_users, int) or self.n_users < 2:
            raise ValueError(f"n_users must be an integer >= 2, got {self.n_users!r}")
        if self.l1_km < 0 or self.l2_km < 0:
            raise ValueError("fiber lengths must be non-negative")
        if not self.l1_km + self.l2_km > 0:
            raise ValueError("l1_km + l2_km must be positive")

    @property
    def t_fiber(self) -> float:
        return fiber_transmission_db(self.params.alpha_db_per_km, self.l1_km + self.l2_km)

    def plan(self, n1: int) -> TopologyPlan:
        return TopologyPlan.from_split(self.n_users, n1, self.l1_km, self.l2_km)


@dataclass(frozen=True)
class ContinuousOptimum:
    """Real-valued N1 optimum; ``interior`` is False when it sits on 1 or N."""

    n1: float
    interior: bool


@dataclass(frozen=True)
class Candidate:
    n1: int
    n2: int
    qber: float
    secure_fraction: float
    fom: float

    @property
    def feasible(self) -> bool:
        return self.secure_fraction > 0


@dataclass(frozen=True)
class OptimizationResult:
    scenario: Scenario
    n1_discrete: int
    n2_discrete: int
    metrics: KeyMetrics
    feasible: bool
    continuous: ContinuousOptimum
    candidates: list[Candidate] = field(default_factory=list)

    @property
    def n1_continuous(self) -> float | None:
        return self.continuous.n1 if self.continuous.interior else None


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def power_of_two_grid(n_users: int) -> list[int]:
    """1, 2, 4, ... up to n_users, with n_users itself appended if it is not a power of 2."""
    grid = [1]
    while grid[-1] * 2 <= n_users:
        grid.append(grid[-1] * 2)
    if grid[-1] != n_users:
        grid.append(n_users)
    return grid


def eq6_residual(scenario: Scenario, n1: float) -> float:
    """Left-hand side of the first-order condition for the optimal N1.

    Zero at a stationary point of the approximate-entropy figure of merit.
    Negative where that FOM is still rising with n1, positive past the peak.
    """
    if not n1 > 0:
        raise ValueError(f"n1 must be positive, got {n1}")
    p = scenario.params
    n = scenario.n_users
    t_fiber = scenario.t_fiber
    q = qber_at(p, t_fiber, n, n1)
    if not 0 < q < 1:
        raise ValueError(f"residual needs Q in (0, 1), got Q={q}")
    e = math.exp(-p.mu)
    fiber = total_fiber_km(n, n1, scenario.l1_km, scenario.l2_km)
    ln_q = math.log(q)
    dark_term = n * p.dark_rate * fiber * (1 + e) / (2 * p.mu * p.eta * t_fiber) * ln_q
    return dark_term + n1 * n1 * scenario.l1_km * (e * LN2 + (1 + e) * (q * ln_q - q))


def binary_entropy_small_q(q: float) -> float:
    """First-order expansion of h(q) around q = 0, in bits."""
    return (q - q * math.log(q)) / LN2


def fom_at(scenario: Scenario, n1: float) -> float:
    """Exact-entropy figure of merit at a real-valued n1."""
    p = scenario.params
    q = qber_at(p, scenario.t_fiber, scenario.n_users, n1)
    fiber = total_fiber_km(scenario.n_users, n1, scenario.l1_km, scenario.l2_km)
    return secure_fraction(p.mu, q) / fiber


def approx_fom_at(scenario: Scenario, n1: float) -> float:
    """Figure of merit built with ``binary_entropy_small_q``; its stationary
    points are exactly the roots of ``eq6_residual``."""
    p = scenario.params
    q = qber_at(p, scenario.t_fiber, scenario.n_users, n1)
    h = binary_entropy_small_q(q)
    fiber = total_fiber_km(scenario.n_users, n1, scenario.l1_km, scenario.l2_km)
    return (math.exp(-p.mu) * (1 - h) - h) / fiber


def golden_section_maximize(f, a: float, b: float, tol: float = 1e-10) -> float:
    """Maximizer of a unimodal ``f`` on [a, b], located to within ``tol``."""
    a, b = min(a, b), max(a, b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    # the bracket may have collapsed onto an endpoint
    best = max((a, b, (a + b) / 2), key=f)
    return best


def _boundary(scenario: Scenario) -> ContinuousOptimum:
    def score(n1):
        try:
            return fom_at(scenario, n1)
        except ValueError:
            return -math.inf

    lo, hi = 1.0, float(scenario.n_users)
    n1 = lo if score(lo) >= score(hi) else hi
    return ContinuousOptimum(n1, interior=False)


def solve_continuous(scenario: Scenario) -> ContinuousOptimum:
    """Root of ``eq6_residual`` on [1, N], or the better boundary if the
    residual never crosses from negative to positive."""
    p = scenario.params
    if p.dark_rate == 0:
        # Q is constant in n1, so the FOM is monotone in the fiber length
        return _boundary(scenario)
    grid = power_of_two_grid(scenario.n_users)
    try:
        values = [eq6_residual(scenario, float(n1)) for n1 in grid]
    except ValueError:
        return _boundary(scenario)
    for (x0, r0), (x1, r1) in zip(zip(grid, values), zip(grid[1:], values[1:])):
        if r0 == 0:
            return ContinuousOptimum(float(x0), interior=x0 not in (1, scenario.n_users))
        if r0 < 0 < r1:
            root = brentq(
                lambda x: eq6_residual(scenario, x), x0, x1, rtol=ROOT_RTOL, xtol=1e-14
            )
            return ContinuousOptimum(root, interior=True)
    return _boundary(scenario)


def evaluate_candidate(scenario: Scenario, n1: int) -> Candidate:
    plan = scenario.plan(n1)
    try:
        m = key_metrics(scenario.params, plan)
    except ValueError:
        # QBER at or above 1/2: no key at all
        q = qber_at(scenario.params, scenario.t_fiber, scenario.n_users, n1)
        return Candidate(n1, plan.n2, q, math.nan, math.nan)
    return Candidate(n1, plan.n2, m.qber, m.secure_fraction, m.fom)


def _rank(c: Candidate) -> tuple[bool, float, int]:
    # feasible first, then higher FOM, then the smaller n1 (less fiber)
    fom = c.fom if not math.isnan(c.fom) else -math.inf
    return (c.feasible, fom, -c.n1)


def select_discrete(scenario: Scenario) -> OptimizationResult:
    """Best power-of-2 central-office splitter by exhaustive evaluation.

    Infeasible candidates stay in ``candidates`` but only win when nothing
    is feasible, in which case ``feasible`` is False.
    """
    if not is_power_of_two(scenario.n_users):
        raise ValueError(f"n_users must be a power of 2, got {scenario.n_users}")
    candidates = [evaluate_candidate(scenario, n1) for n1 in power_of_two_grid(scenario.n_users)]
    best = max(candidates, key=_rank)
    if math.isnan(best.fom):
        metrics = KeyMetrics(best.qber, math.nan, math.nan, math.nan, math.nan,
                             total_fiber_km(scenario.n_users, best.n1,
                                            scenario.l1_km, scenario.l2_km))
    else:
        metrics = key_metrics(scenario.params, scenario.plan(best.n1))
    return OptimizationResult(
        scenario=scenario,
        n1_discrete=best.n1,
        n2_discrete=best.n2,
        metrics=metrics,
        feasible=best.feasible,
        continuous=solve_continuous(scenario),
        candidates=candidates,
    )


def neighbors_of(n1: float, n_users: int) -> list[int]:
    """Powers of 2 on either side of a real-valued n1, clipped to [1, n_users]."""
    grid = power_of_two_grid(n_users)
    lower = max(g for g in grid if g <= n1)
    upper = min((g for g in grid if g >= n1), default=grid[-1])
    return sorted({lower, upper})
