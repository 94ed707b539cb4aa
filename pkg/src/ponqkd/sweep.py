"""One-dimensional parameter sweeps and the figure presets.

A sweep either optimizes the split at every point (variables ``l1_km``,
``n_users``, ``mu``, ``dark_rate``) or, for ``n1``, just evaluates the plan
with that central-office ratio so the figure of merit can be traced
against log2(N1).
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, replace
from typing import Sequence

from .model import DEFAULT_PARAMS
from .optimizer import Scenario, evaluate_candidate, power_of_two_grid, select_discrete

VARIABLES = ("l1_km", "n_users", "mu", "dark_rate", "n1")
COLUMNS = (
    "variable", "value", "n1_opt", "n2_opt", "log2_n1_opt",
    "qber", "secure_fraction", "fom", "feasible",
)
PRESETS = ("fig3", "fig4", "fig5", "fig6")

TOTAL_LENGTH_KM = 20.0
FIG_USERS = (16, 32, 64, 128)
FIG6_MU_GRID = (0.2, 0.3, 0.4, 0.5)
FIG5_DARK_RATES = (1e-5, 1e-6)


@dataclass(frozen=True)
class SweepSpec:
    """``base`` supplies every quantity not being swept. For ``l1_km`` the
    total length ``base.l1_km + base.l2_km`` is held fixed."""

    base: Scenario
    variable: str
    values: tuple
    outputs: tuple = COLUMNS
    label: str = ""

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ValueError(f"unknown sweep variable {self.variable!r}; expected one of {VARIABLES}")
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise ValueError("sweep needs at least one value")
        steps = [b - a for a, b in zip(values, values[1:])]
        if steps and not (all(s > 0 for s in steps) or all(s < 0 for s in steps)):
            raise ValueError("sweep values must be strictly monotone")
        if self.variable == "l1_km":
            total = self.base.l1_km + self.base.l2_km
            if any(v < 0 or v > total for v in values):
                raise ValueError(f"l1_km values must lie in [0, {total}]")
        unknown = set(self.outputs) - set(COLUMNS)
        if unknown:
            raise ValueError(f"unknown output columns {sorted(unknown)}")

    @property
    def total_length_km(self) -> float:
        return self.base.l1_km + self.base.l2_km


@dataclass(frozen=True)
class SweepRecord:
    variable: str
    value: float
    n1_opt: int
    n2_opt: int
    log2_n1_opt: float
    qber: float
    secure_fraction: float
    fom: float
    feasible: bool


def scenario_at(spec: SweepSpec, value) -> Scenario:
    base = spec.base
    if spec.variable == "l1_km":
        return replace(base, l1_km=float(value), l2_km=spec.total_length_km - float(value))
    if spec.variable == "n_users":
        return replace(base, n_users=int(value))
    if spec.variable in ("mu", "dark_rate"):
        return replace(base, params=replace(base.params, **{spec.variable: float(value)}))
    return base


def _record(variable, value, n1, n2, qber, frac, fom) -> SweepRecord:
    return SweepRecord(
        variable=variable,
        value=value,
        n1_opt=n1,
        n2_opt=n2,
        log2_n1_opt=math.log2(n1),
        qber=qber,
        secure_fraction=frac,
        fom=fom,
        feasible=frac > 0,
    )


def run_sweep(spec: SweepSpec) -> list[SweepRecord]:
    records = []
    for value in spec.values:
        scenario = scenario_at(spec, value)
        if spec.variable == "n1":
            c = evaluate_candidate(scenario, int(value))
            records.append(_record("n1", value, c.n1, c.n2, c.qber, c.secure_fraction, c.fom))
        else:
            r = select_discrete(scenario)
            m = r.metrics
            records.append(_record(spec.variable, value, r.n1_discrete, r.n2_discrete,
                                   m.qber, m.secure_fraction, m.fom))
    return records


def l1_grid(total_km: float = TOTAL_LENGTH_KM, step: float = 1.0,
            start: float = 0.0, stop: float | None = None) -> tuple[float, ...]:
    """Evenly spaced feeder lengths from ``start`` to ``stop`` (default: the full length)."""
    stop = total_km if stop is None else stop
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(start + i * step, 12) for i in range(count))


def figure_preset(
    name: str,
    *,
    params=DEFAULT_PARAMS,
    l1_step: float = 1.0,
    mu_grid: Sequence[float] = FIG6_MU_GRID,
    dark_rates: Sequence[float] = FIG5_DARK_RATES,
) -> list[SweepSpec]:
    """Sweep specs reproducing one of the published figures.

    fig3: FOM against N1 at L1 = 15 km for each N in 16..128.
    fig4: optimum N1 against L1 for the same set of N.
    fig5: optimum-plan Q and secure fraction against L1, N = 64, per dark rate.
    fig6: optimum N1 and secure fraction against L1, N = 64, per mu.
    """
    l1_values = l1_grid(TOTAL_LENGTH_KM, l1_step)
    if name == "fig3":
        return [
            SweepSpec(Scenario(params, n, 15.0, 5.0), "n1", tuple(power_of_two_grid(n)),
                      label=f"N={n}")
            for n in FIG_USERS
        ]
    if name == "fig4":
        return [
            SweepSpec(Scenario(params, n, 0.0, TOTAL_LENGTH_KM), "l1_km", l1_values, label=f"N={n}")
            for n in FIG_USERS
        ]
    if name == "fig5":
        return [
            SweepSpec(Scenario(replace(params, dark_rate=d), 64, 0.0, TOTAL_LENGTH_KM),
                      "l1_km", l1_values, label=f"dark_rate={d:g}")
            for d in dark_rates
        ]
    if name == "fig6":
        return [
            SweepSpec(Scenario(replace(params, mu=mu), 64, 0.0, TOTAL_LENGTH_KM),
                      "l1_km", l1_values, label=f"mu={mu:g}")
            for mu in mu_grid
        ]
    raise ValueError(f"unknown preset {name!r}; expected one of {PRESETS}")


def fmt_number(x) -> str:
    """12 significant digits, the precision shared by CSV and JSON output."""
    if x is None:
        return "nan"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.12g}"


def round_number(x):
    """JSON-side counterpart of ``fmt_number``; NaN becomes None."""
    if isinstance(x, (bool, int)) or x is None:
        return x
    if isinstance(x, float):
        if math.isnan(x):
            return None
        return float(f"{x:.12g}")
    return x


def record_dict(record: SweepRecord, outputs: Sequence[str] = COLUMNS) -> dict:
    d = asdict(record)
    return {k: round_number(d[k]) for k in COLUMNS if k in outputs}


def records_to_csv(records: Sequence[SweepRecord], outputs: Sequence[str] = COLUMNS) -> str:
    cols = [c for c in COLUMNS if c in outputs]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in records:
        d = asdict(r)
        writer.writerow([d[c] if c == "variable" else fmt_number(d[c]) for c in cols])
    return buf.getvalue()


def records_to_json(records: Sequence[SweepRecord], outputs: Sequence[str] = COLUMNS) -> str:
    return json.dumps([record_dict(r, outputs) for r in records], indent=2)
