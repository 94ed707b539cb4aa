"""Closed-form link budget and key-rate model for a two-stage tree PON.

Alice sits in the central office behind a 1xN1 splitter (no path loss).
Each of its N1 outputs feeds a fiber of length L1 to a 1xN2 field splitter,
and each field splitter output reaches one user over a drop fiber of
length L2, so N = N1 * N2.

All quantities are dimensionless probabilities except where a unit is in
the name (``_km``, ``_db``, ``_rate``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

LN2 = math.log(2.0)


@dataclass(frozen=True)
class SystemParams:
    """Physical-layer constants of the QKD link.

    ``dark_rate`` is the detector click probability per pulse with no photon
    present and ``alpha_db_per_km`` the fiber attenuation. ``pulse_rate``
    only scales absolute bit rates; it never enters the optimization.
    """

    mu: float = 0.40
    eta: float = 0.1
    dark_rate: float = 1e-5
    visibility: float = 0.98
    alpha_db_per_km: float = 0.25
    pulse_rate: float = 1e9

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"mu must be > 0, got {self.mu}")
        if not 0 < self.eta <= 1:
            raise ValueError(f"eta must be in (0, 1], got {self.eta}")
        if not 0 <= self.dark_rate <= 1:
            raise ValueError(f"dark_rate must be in [0, 1], got {self.dark_rate}")
        if not 0 < self.visibility <= 1:
            raise ValueError(f"visibility must be in (0, 1], got {self.visibility}")
        if not self.alpha_db_per_km >= 0:
            raise ValueError(f"alpha_db_per_km must be >= 0, got {self.alpha_db_per_km}")
        if not self.pulse_rate > 0:
            raise ValueError(f"pulse_rate must be > 0, got {self.pulse_rate}")


DEFAULT_PARAMS = SystemParams()


@dataclass(frozen=True)
class TopologyPlan:
    """Network geometry together with one concrete split N = n1 * n2."""

    n_users: int
    n1: int
    n2: int
    l1_km: float
    l2_km: float

    def __post_init__(self):
        for name in ("n_users", "n1", "n2"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.n1 * self.n2 != self.n_users:
            raise ValueError(
                f"n1 * n2 must equal n_users ({self.n1} * {self.n2} != {self.n_users})"
            )
        if not self.l1_km >= 0 or not self.l2_km >= 0:
            raise ValueError("fiber lengths must be non-negative")

    @classmethod
    def from_split(cls, n_users: int, n1: int, l1_km: float, l2_km: float) -> TopologyPlan:
        """Build a plan from the central-office ratio; n1 must divide n_users."""
        if n1 < 1 or n_users % n1:
            raise ValueError(f"n1={n1} does not divide n_users={n_users}")
        return cls(n_users, n1, n_users // n1, l1_km, l2_km)

    @property
    def length_km(self) -> float:
        return self.l1_km + self.l2_km


@dataclass(frozen=True)
class LinkBudget:
    t_fiber: float
    t_total: float
    loss_db: float
    fiber_total_km: float


@dataclass(frozen=True)
class KeyMetrics:
    qber: float
    secure_fraction: float
    sifted_rate: float
    secure_rate: float
    fom: float
    fiber_total_km: float

    @property
    def feasible(self) -> bool:
        """True while a positive secure key survives post-processing."""
        return self.secure_fraction > 0


def binary_entropy(x: float) -> float:
    """Shannon entropy of a Bernoulli(x) variable in bits, with h(0) = h(1) = 0."""
    if not 0 <= x <= 1:
        raise ValueError(f"binary_entropy needs x in [0, 1], got {x}")
    if x == 0 or x == 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def optimal_mu(qber_baseline: float) -> float:
    """Best mean photon number for decoy-state BB84 at a given baseline QBER.

    Returns 0.5 * (1 - 2h(q)) / (1 - h(q)); this is 0.5 at q = 0 and drops
    to zero where 2h(q) reaches 1.
    """
    h = binary_entropy(qber_baseline)
    if 1 - 2 * h <= 0:
        raise ValueError(f"no positive optimal mu for qber={qber_baseline} (1 - 2h(q) <= 0)")
    return 0.5 * (1 - 2 * h) / (1 - h)


def fiber_transmission_db(alpha_db_per_km: float, length_km: float) -> float:
    return 10.0 ** (-alpha_db_per_km * length_km / 10.0)


def fiber_transmission(params: SystemParams, plan: TopologyPlan) -> float:
    """Power transmission T_F of the feeder plus drop fiber."""
    return fiber_transmission_db(params.alpha_db_per_km, plan.length_km)


def total_fiber_km(n_users: float, n1: float, l1_km: float, l2_km: float) -> float:
    """Deployed fiber: n1 feeders plus one drop per user."""
    return n1 * l1_km + n_users * l2_km


def link_budget(params: SystemParams, plan: TopologyPlan) -> LinkBudget:
    t_fiber = fiber_transmission(params, plan)
    t_total = t_fiber / plan.n2
    return LinkBudget(
        t_fiber=t_fiber,
        t_total=t_total,
        loss_db=-10.0 * math.log10(t_total),
        fiber_total_km=total_fiber_km(plan.n_users, plan.n1, plan.l1_km, plan.l2_km),
    )


def visibility_qber(visibility: float) -> float:
    return (1.0 - visibility) / 2.0


def dark_count_qber(dark_rate: float, mu: float, eta: float, t_total: float) -> float:
    """Dark-count share of the QBER, d_B / (2 mu eta T) for full path transmission T."""
    denom = 2.0 * mu * eta * t_total
    if denom <= 0:
        raise ValueError("mu * eta * t_total must be positive")
    return dark_rate / denom


def qber_at(params: SystemParams, t_fiber: float, n_users: float, n1: float) -> float:
    """QBER for a possibly non-integer central-office ratio n1."""
    denom = 2.0 * params.mu * params.eta * t_fiber * n1
    if denom <= 0:
        raise ValueError("degenerate QBER: mu * eta * t_fiber * n1 must be positive")
    return visibility_qber(params.visibility) + params.dark_rate * n_users / denom


def qber(params: SystemParams, plan: TopologyPlan) -> float:
    return qber_at(params, fiber_transmission(params, plan), plan.n_users, plan.n1)


def secure_fraction(mu: float, q: float) -> float:
    """Fraction of the sifted key left after error correction and privacy
    amplification, e^-mu (1 - h(q)) - h(q). Negative past the key threshold."""
    if not 0 <= q < 0.5:
        raise ValueError(f"secure_fraction needs q in [0, 0.5), got {q}")
    h = binary_entropy(q)
    return math.exp(-mu) * (1.0 - h) - h


def key_metrics(params: SystemParams, plan: TopologyPlan) -> KeyMetrics:
    budget = link_budget(params, plan)
    if budget.fiber_total_km <= 0:
        raise ValueError("plan deploys no fiber; figure of merit undefined")
    q = qber_at(params, budget.t_fiber, plan.n_users, plan.n1)
    frac = secure_fraction(params.mu, q)
    # sifted rate is used as written, without a 1/2 basis-sifting factor
    sifted = params.pulse_rate * params.mu * budget.t_total * params.eta
    return KeyMetrics(
        qber=q,
        secure_fraction=frac,
        sifted_rate=sifted,
        secure_rate=sifted * frac,
        fom=frac / budget.fiber_total_km,
        fiber_total_km=budget.fiber_total_km,
    )


def splitter_loss_equivalent_km(ratio: int, alpha_db_per_km: float) -> float:
    """Fiber length whose attenuation equals the ideal 1xratio splitting loss."""
    if ratio < 1:
        raise ValueError(f"ratio must be >= 1, got {ratio}")
    if not alpha_db_per_km > 0:
        raise ValueError("alpha_db_per_km must be positive")
    return 10.0 * math.log10(ratio) / alpha_db_per_km
