"""Command-line front end.

Subcommands: evaluate, optimize, sweep, preset, simulate, mu-opt.
Values resolve as command line > ``--config`` JSON file > built-in defaults.
Exit status is 0 on success, 1 on invalid input and 2 when no positive
secure key is possible.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict

from .model import (
    DEFAULT_PARAMS, SystemParams, TopologyPlan, key_metrics, link_budget, optimal_mu, qber,
)
from .montecarlo import MODES, SimConfig, simulate_qber
from .optimizer import Scenario, is_power_of_two, select_discrete
from .sweep import (
    COLUMNS, PRESETS, VARIABLES, SweepSpec, figure_preset, fmt_number, record_dict,
    round_number, run_sweep,
)

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE = 0, 1, 2

DEFAULTS = {
    "users": 64,
    "n1": None,
    "l1": 15.0,
    "l2": 5.0,
    "mu": DEFAULT_PARAMS.mu,
    "eta": DEFAULT_PARAMS.eta,
    "dark": DEFAULT_PARAMS.dark_rate,
    "visibility": DEFAULT_PARAMS.visibility,
    "alpha_db_per_km": DEFAULT_PARAMS.alpha_db_per_km,
    "pulse_rate": DEFAULT_PARAMS.pulse_rate,
    "format": "json",
    "out": None,
    "seed": 0,
    "pulses": None,
    "mode": "aggregate",
    "partitions": 1,
    "qber": None,
    "var": None,
    "from": None,
    "to": None,
    "step": None,
    "l1_step": 1.0,
    "mu_grid": None,
    "dark_rates": None,
}

DEFAULT_PULSES = {"aggregate": 100_000_000, "per-pulse": 1_000_000}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("network and physical parameters")
    g.add_argument("--users", type=int, help="total number of users N (default 64)")
    g.add_argument("--n1", type=int, help="central-office split ratio N1")
    g.add_argument("--l1", type=float, help="feeder length L1 in km (default 15)")
    g.add_argument("--l2", type=float, help="drop length L2 in km (default 5)")
    g.add_argument("--mu", type=float, help="mean photon number per pulse (default 0.4)")
    g.add_argument("--eta", type=float, help="detector efficiency (default 0.1)")
    g.add_argument("--dark", type=float, help="dark-count probability per pulse (default 1e-5)")
    g.add_argument("--visibility", type=float, help="interference visibility (default 0.98)")
    g.add_argument("--alpha-db-per-km", type=float, help="fiber attenuation (default 0.25)")
    g.add_argument("--pulse-rate", type=float, help="source repetition rate in Hz (default 1e9)")
    o = common.add_argument_group("output")
    o.add_argument("--format", choices=("json", "csv", "human"))
    o.add_argument("--out", help="write the report here instead of stdout")
    o.add_argument("--config", help="JSON file with default values for any flag")

    parser = _Parser(prog="ponqkd", description="BB84 QKD planning for two-stage tree PONs.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("evaluate", parents=[common], help="key metrics for an explicit N1")
    sub.add_parser("optimize", parents=[common], help="best power-of-2 split")
    s = sub.add_parser("sweep", parents=[common], help="one-dimensional sweep")
    s.add_argument("--var", choices=VARIABLES)
    s.add_argument("--from", dest="from_", type=float)
    s.add_argument("--to", type=float)
    s.add_argument("--step", type=float)
    p = sub.add_parser("preset", parents=[common], help="published figure presets")
    p.add_argument("name", choices=PRESETS)
    p.add_argument("--l1-step", type=float)
    p.add_argument("--mu-grid", type=_float_list, help="comma-separated mu values (fig6)")
    p.add_argument("--dark-rates", type=_float_list, help="comma-separated dark rates (fig5)")
    m = sub.add_parser("simulate", parents=[common], help="Monte Carlo QBER check")
    m.add_argument("--seed", type=int)
    m.add_argument("--pulses", type=int)
    m.add_argument("--mode", choices=MODES)
    m.add_argument("--partitions", type=int)
    q = sub.add_parser("mu-opt", parents=[common], help="optimal mean photon number")
    q.add_argument("--qber", type=float)
    return parser


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    out = {}
    for key, value in data.items():
        norm = key.replace("-", "_")
        if norm not in DEFAULTS:
            raise UsageError(f"unknown config key {key!r}")
        out[norm] = value
    return out


def resolve(args: argparse.Namespace) -> dict:
    values = dict(DEFAULTS)
    if args.config:
        values.update(load_config(args.config))
    for key in DEFAULTS:
        attr = "from_" if key == "from" else key
        v = getattr(args, attr, None)
        if v is not None:
            values[key] = v
    return values


def params_from(v: dict) -> SystemParams:
    return SystemParams(
        mu=float(v["mu"]),
        eta=float(v["eta"]),
        dark_rate=float(v["dark"]),
        visibility=float(v["visibility"]),
        alpha_db_per_km=float(v["alpha_db_per_km"]),
        pulse_rate=float(v["pulse_rate"]),
    )


def _echo(v: dict, keys) -> dict:
    return {k: round_number(v[k]) for k in keys}


PARAM_KEYS = ("mu", "eta", "dark", "visibility", "alpha_db_per_km", "pulse_rate")
NETWORK_KEYS = ("users", "l1", "l2")


def _rounded(d: dict) -> dict:
    return {k: round_number(x) for k, x in d.items()}


def _render_table(rows: list[dict], fmt: str) -> str:
    cols = list(rows[0]) if rows else []
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([r[c] if isinstance(r[c], str) else fmt_number(r[c]) for c in cols])
        return buf.getvalue()
    lines = ["  ".join(f"{c:>15}" for c in cols)]
    for r in rows:
        lines.append("  ".join(f"{_human(r[c]):>15}" for c in cols))
    return "\n".join(lines) + "\n"


def _human(x) -> str:
    if isinstance(x, (bool, str, int)) or x is None:
        return str(x)
    return f"{x:.4g}"


def _render_result(command: str, inputs: dict, result: dict, fmt: str,
                   table: list[dict] | None = None) -> str:
    if fmt == "json":
        return json.dumps({"command": command, "inputs": inputs, "result": result}, indent=2) + "\n"
    if fmt == "csv":
        if table is not None:
            return _render_table(table, "csv")
        flat = {k: x for k, x in result.items() if not isinstance(x, (dict, list))}
        return _render_table([flat], "csv")
    lines = [f"{command}:"]
    for k, x in result.items():
        if isinstance(x, (dict, list)):
            continue
        lines.append(f"  {k}: {_human(x)}")
    text = "\n".join(lines) + "\n"
    if table:
        text += "\n" + _render_table(table, "human")
    return text


def _metrics_dict(plan: TopologyPlan, params: SystemParams) -> dict:
    budget = link_budget(params, plan)
    d = {"n1": plan.n1, "n2": plan.n2}
    d.update(asdict(budget))
    q = qber(params, plan)
    if q >= 0.5:
        # errors as likely as not: no key can be distilled at all
        nan = math.nan
        d.update(qber=q, secure_fraction=nan, sifted_rate=nan, secure_rate=nan, fom=nan,
                 feasible=False)
        return _rounded(d)
    m = key_metrics(params, plan)
    d.update({k: x for k, x in asdict(m).items() if k != "fiber_total_km"})
    d["feasible"] = m.feasible
    return _rounded(d)


def cmd_evaluate(v: dict) -> tuple[str, int]:
    if v["n1"] is None:
        raise UsageError("evaluate needs --n1")
    params = params_from(v)
    plan = TopologyPlan.from_split(int(v["users"]), int(v["n1"]), float(v["l1"]), float(v["l2"]))
    result = _metrics_dict(plan, params)
    inputs = _echo(v, PARAM_KEYS + NETWORK_KEYS + ("n1",))
    status = EXIT_OK if result["feasible"] else EXIT_INFEASIBLE
    return _render_result("evaluate", inputs, result, v["format"]), status


def cmd_optimize(v: dict) -> tuple[str, int]:
    users = int(v["users"])
    if not is_power_of_two(users):
        raise UsageError(f"--users must be a power of 2 for optimize (splitters are 1x2^k), got {users}")
    scenario = Scenario(params_from(v), users, float(v["l1"]), float(v["l2"]))
    r = select_discrete(scenario)
    candidates = [
        _rounded({
            "n1": c.n1, "n2": c.n2, "log2_n1": math.log2(c.n1), "qber": c.qber,
            "secure_fraction": c.secure_fraction, "fom": c.fom, "feasible": c.feasible,
            "selected": c.n1 == r.n1_discrete,
        })
        for c in r.candidates
    ]
    result = _rounded({
        "n1": r.n1_discrete,
        "n2": r.n2_discrete,
        "feasible": r.feasible,
        "n1_continuous": r.continuous.n1,
        "continuous_interior": r.continuous.interior,
        "qber": r.metrics.qber,
        "secure_fraction": r.metrics.secure_fraction,
        "sifted_rate": r.metrics.sifted_rate,
        "secure_rate": r.metrics.secure_rate,
        "fom": r.metrics.fom,
        "fiber_total_km": r.metrics.fiber_total_km,
    })
    result["candidates"] = candidates
    inputs = _echo(v, PARAM_KEYS + NETWORK_KEYS)
    text = _render_result("optimize", inputs, result, v["format"], table=candidates)
    return text, EXIT_OK if r.feasible else EXIT_INFEASIBLE


def _sweep_values(v: dict) -> tuple:
    start, stop, step = v["from"], v["to"], v["step"]
    if start is None or stop is None:
        raise UsageError("sweep needs --from and --to")
    var = v["var"]
    if var in ("n_users", "n1"):
        # integer ratios double at every step
        values, x = [], int(start)
        if x < 1 or x > stop:
            raise UsageError("--from must be >= 1 and <= --to")
        while x <= stop:
            values.append(x)
            x *= 2
        return tuple(values)
    if step is None or step <= 0:
        raise UsageError("sweep needs a positive --step")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        raise UsageError("--to must not be below --from")
    return tuple(round(start + i * step, 12) for i in range(count))


def _records_output(command: str, inputs: dict, series: list[tuple[str, list]], fmt: str) -> str:
    if fmt == "json":
        if command == "sweep":
            records = [record_dict(r) for r in series[0][1]]
        else:
            records = [{"series": label, **record_dict(r)} for label, recs in series for r in recs]
        return json.dumps({"command": command, "inputs": inputs, "records": records}, indent=2) + "\n"
    rows = []
    for label, recs in series:
        for r in recs:
            row = {"series": label} if command == "preset" else {}
            d = record_dict(r)
            row.update({c: d[c] for c in COLUMNS})
            rows.append(row)
    if fmt == "csv":
        return _render_table(rows, "csv")
    return _render_table(rows, "human")


def cmd_sweep(v: dict) -> tuple[str, int]:
    if v["var"] is None:
        raise UsageError("sweep needs --var")
    scenario = Scenario(params_from(v), int(v["users"]), float(v["l1"]), float(v["l2"]))
    spec = SweepSpec(scenario, v["var"], _sweep_values(v))
    records = run_sweep(spec)
    inputs = _echo(v, PARAM_KEYS + NETWORK_KEYS + ("var", "from", "to", "step"))
    return _records_output("sweep", inputs, [("", records)], v["format"]), EXIT_OK


def cmd_preset(v: dict, name: str) -> tuple[str, int]:
    kwargs = {"params": params_from(v), "l1_step": float(v["l1_step"])}
    if v["mu_grid"]:
        kwargs["mu_grid"] = tuple(v["mu_grid"])
    if v["dark_rates"]:
        kwargs["dark_rates"] = tuple(v["dark_rates"])
    specs = figure_preset(name, **kwargs)
    series = [(s.label, run_sweep(s)) for s in specs]
    inputs = _echo(v, PARAM_KEYS + ("l1_step",))
    inputs["name"] = name
    inputs["mu_grid"] = list(kwargs.get("mu_grid", ())) or None
    inputs["dark_rates"] = list(kwargs.get("dark_rates", ())) or None
    return _records_output("preset", inputs, series, v["format"]), EXIT_OK


def cmd_simulate(v: dict) -> tuple[str, int]:
    if v["n1"] is None:
        raise UsageError("simulate needs --n1")
    params = params_from(v)
    plan = TopologyPlan.from_split(int(v["users"]), int(v["n1"]), float(v["l1"]), float(v["l2"]))
    mode = v["mode"]
    pulses = int(v["pulses"]) if v["pulses"] is not None else DEFAULT_PULSES[mode]
    v = dict(v, pulses=pulses)
    cfg = SimConfig(pulses=pulses, seed=int(v["seed"]), mode=mode, partitions=int(v["partitions"]))
    res = simulate_qber(params, plan, cfg)
    result = _rounded(asdict(res))
    result["q_eq5"] = round_number(key_metrics(params, plan).qber)
    inputs = _echo(v, PARAM_KEYS + NETWORK_KEYS + ("n1", "seed", "pulses", "mode", "partitions"))
    return _render_result("simulate", inputs, result, v["format"]), EXIT_OK


def cmd_mu_opt(v: dict) -> tuple[str, int]:
    if v["qber"] is None:
        raise UsageError("mu-opt needs --qber")
    result = {"mu_opt": round_number(optimal_mu(float(v["qber"])))}
    return _render_result("mu-opt", {"qber": round_number(float(v["qber"]))}, result, v["format"]), EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        v = resolve(args)
        if v["format"] not in ("json", "csv", "human"):
            raise UsageError(f"unknown format {v['format']!r}")
        # physical inputs are validated before any command runs
        params_from(v)
        if args.command == "evaluate":
            text, status = cmd_evaluate(v)
        elif args.command == "optimize":
            text, status = cmd_optimize(v)
        elif args.command == "sweep":
            text, status = cmd_sweep(v)
        elif args.command == "preset":
            text, status = cmd_preset(v, args.name)
        elif args.command == "simulate":
            text, status = cmd_simulate(v)
        else:
            text, status = cmd_mu_opt(v)
    except (UsageError, ValueError, TypeError) as exc:
        print(f"ponqkd {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if v["out"]:
        with open(v["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
