"""Command-line front end.

Subcommands::

    secrelay analyze  SCENARIO [--strategy S] [--p-r-db X] [--json]
    secrelay simulate SCENARIO --target {soc,ip,outage} [--trials N] [--seed S] [--json]
    secrelay sweep    {2,3,4,5,6} SCENARIO --out DIR [--trials N] [--seed S] [--no-mc]

Exit codes: 0 ok, 2 validation error, 3 infeasible, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import analytics, experiments, montecarlo
from .allocation import IP_MIN, SOC_MAX, Strategy, StrategyKind, allocate
from .exceptions import InfeasibleError, ParameterError, SecrelayError
from .params import SystemParams, derive, from_db, to_db

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4

REPORT_KIND = "secrelay.analysis"

# Simulation settings of the reference scenario; any key may be omitted.
SCENARIO_DEFAULTS = {
    "n_r": 100,
    "w_hz": 1e4,
    "rho": 0.9,
    "epsilon": 0.01,
    "snr_s_db": 10.0,
    "snr_max_db": 15.0,
    "alpha_sr": 1.0,
    "alpha_rd": 1.0,
    "alpha_re": 5.0,
}
_MC_KEYS = {"trials", "seed"}


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class Scenario:
    params: SystemParams
    document: dict
    mc_trials: int | None = None
    mc_seed: int | None = None


def scenario_from_dict(doc: dict) -> Scenario:
    """Validate a scenario document (or an ``analyze --json`` report)."""
    if not isinstance(doc, dict):
        raise ParameterError("scenario must be a JSON object")
    if doc.get("kind") == REPORT_KIND:
        doc = doc.get("scenario")
        if not isinstance(doc, dict):
            raise ParameterError("analysis report has no scenario object")
    unknown = set(doc) - set(SCENARIO_DEFAULTS) - {"mc"}
    if unknown:
        raise ParameterError(f"unknown scenario keys: {sorted(unknown)}")
    values = {**SCENARIO_DEFAULTS, **{k: v for k, v in doc.items() if k != "mc"}}
    mc = doc.get("mc") or {}
    if not isinstance(mc, dict) or set(mc) - _MC_KEYS:
        raise ParameterError(f"'mc' must be an object with keys {sorted(_MC_KEYS)}")
    for key in ("snr_s_db", "snr_max_db"):
        if isinstance(values[key], bool) or not isinstance(values[key], (int, float)):
            raise ParameterError(f"{key} must be a number, got {values[key]!r}")
    params = SystemParams(
        n_r=values["n_r"], w_hz=values["w_hz"], rho=values["rho"], epsilon=values["epsilon"],
        p_s=from_db(values["snr_s_db"]), p_max=from_db(values["snr_max_db"]),
        alpha_sr=values["alpha_sr"], alpha_rd=values["alpha_rd"], alpha_re=values["alpha_re"],
    )
    trials, seed = mc.get("trials"), mc.get("seed")
    for name, v in (("trials", trials), ("seed", seed)):
        if v is not None and (isinstance(v, bool) or not isinstance(v, int) or v < 0):
            raise ParameterError(f"mc.{name} must be a nonnegative integer, got {v!r}")
    return Scenario(params=params, document=dict(doc), mc_trials=trials, mc_seed=seed)


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise ParameterError(f"cannot read scenario {path}: {exc.strerror}") from exc
    return scenario_from_dict(doc)


def _resolve_strategy(name: str | None, p_r_db: float | None, params: SystemParams) -> Strategy:
    if name is None:
        name = "fixed" if p_r_db is not None else "socmax"
    if name == "fixed":
        return Strategy.fixed(from_db(p_r_db) if p_r_db is not None else params.p_max)
    if p_r_db is not None:
        raise ParameterError("--p-r-db only applies to --strategy fixed")
    return SOC_MAX if name == "socmax" else IP_MIN


def _relay_power(args, params: SystemParams) -> tuple[Strategy, float]:
    strategy = _resolve_strategy(args.strategy, args.p_r_db, params)
    if strategy.kind is StrategyKind.SOC_MAX and not analytics.feasibility(params):
        d = derive(params)
        raise InfeasibleError(
            f"infeasible: r_l = {d.r_l:.6g} >= 1, no nonnegative secrecy outage capacity; "
            f"need n_r >= {analytics.min_antennas(params)} (have {params.n_r})")
    return strategy, allocate(strategy, params).p_r_star


def _db_or_none(x):
    return to_db(x) if x > 0 else None


def analysis_report(scenario: Scenario, strategy: Strategy, p_r: float) -> dict:
    params = scenario.params
    d = derive(params)
    feasible = analytics.feasibility(params)
    soc = analytics.secrecy_outage_capacity(params, p_r)
    p_r_star = min(params.source_limited_power, params.p_max)
    upper, p0_min = analytics.optimal_power_ip(params) if params.p_s > 0 else (0.0, None)
    return {
        "kind": REPORT_KIND,
        "scenario": scenario.document,
        "strategy": strategy.kind.value,
        "r_l": d.r_l,
        "feasible": feasible,
        "min_antennas": analytics.min_antennas(params),
        "p_r": p_r,
        "p_r_db": _db_or_none(p_r),
        "p_r_star": p_r_star,
        "p_r_star_db": _db_or_none(p_r_star),
        "regime": analytics.regime(params).value,
        "c_soc_raw": soc.c_soc,
        "c_soc_clamped": soc.clamped,
        "c_d": analytics.legitimate_capacity_cf(params, p_r),
        "p0": analytics.interception_probability_cf(params, p_r) if p_r > 0 else None,
        "p0_min": p0_min,
        "ip_region_upper": upper,
        "saturation_limit": analytics.soc_saturation_limit(params) if feasible else None,
    }


def _fmt_db(x):
    return "n/a" if x is None else f"{x:.2f} dB"


def _fmt_opt(x, spec):
    return "n/a" if x is None else format(x, spec)


def format_analysis(r: dict) -> str:
    lines = [
        f"r_l                : {r['r_l']:.6f}",
        f"feasible           : {'yes' if r['feasible'] else 'no'}",
        f"min antennas       : {r['min_antennas']}",
        f"strategy           : {r['strategy']}",
        f"P_R                : {r['p_r']:.4f} ({_fmt_db(r['p_r_db'])})",
        f"P_R* (optimal)     : {r['p_r_star']:.4f} ({_fmt_db(r['p_r_star_db'])}, {r['regime']})",
        f"C_D (hardened)     : {r['c_d'] / 1e3:.4f} kbps",
        f"C_soc raw          : {r['c_soc_raw'] / 1e3:.4f} kbps",
        f"C_soc clamped      : {r['c_soc_clamped'] / 1e3:.4f} kbps",
        f"P_0                : {_fmt_opt(r['p0'], '.6e')}",
        f"P_0 min            : {_fmt_opt(r['p0_min'], '.6e')}",
        "saturation limit   : "
        + ("n/a" if r["saturation_limit"] is None else f"{r['saturation_limit'] / 1e3:.4f} kbps"),
    ]
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    scenario = load_scenario(args.scenario)
    strategy, p_r = _relay_power(args, scenario.params)
    report = analysis_report(scenario, strategy, p_r)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(format_analysis(report))
    return EXIT_OK


def _mc_settings(args, scenario: Scenario) -> tuple[int, int]:
    trials = args.trials if args.trials is not None else scenario.mc_trials
    seed = args.seed if args.seed is not None else scenario.mc_seed
    trials = experiments.DEFAULT_TRIALS if trials is None else trials
    seed = experiments.DEFAULT_SEED if seed is None else seed
    if trials <= 0:
        raise ParameterError(f"--trials must be positive, got {trials}")
    return trials, seed


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    params = scenario.params
    strategy, p_r = _relay_power(args, params)
    trials, seed = _mc_settings(args, scenario)
    if args.target == "soc":
        est = montecarlo.empirical_outage_capacity(params, p_r, trials, seed, workers=args.workers)
        reference = analytics.secrecy_outage_capacity(params, p_r).c_soc
        unit = "bits/s"
    elif args.target == "ip":
        est = montecarlo.estimate_interception_probability(params, p_r, trials, seed,
                                                           workers=args.workers)
        reference = analytics.interception_probability_cf(params, p_r)
        unit = "probability"
    else:
        c_target = (args.c_target if args.c_target is not None
                    else analytics.secrecy_outage_capacity(params, p_r).c_soc)
        est = montecarlo.estimate_outage_probability(params, p_r, c_target, trials, seed,
                                                     workers=args.workers)
        reference = params.epsilon if args.c_target is None else \
            analytics.secrecy_outage_probability_cf(params, p_r, c_target)
        unit = "probability"
    out = {"target": args.target, "strategy": strategy.kind.value, "p_r": p_r, "unit": unit,
           "closed_form": reference, **est.to_dict()}
    if args.target == "outage":
        out["c_target"] = c_target
    if args.json:
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        print(f"target      : {args.target} ({unit})")
        print(f"P_R         : {p_r!r}")
        if args.target == "outage":
            print(f"C target    : {c_target!r} bits/s")
        print(f"estimate    : {est.value!r}")
        print(f"std error   : {est.std_error!r} ({est.method})")
        print(f"closed form : {reference!r}")
        print(f"trials      : {est.n_trials}")
        print(f"seed        : {est.seed}")
    return EXIT_OK


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ParameterError(f"bad number list {text!r}") from exc


def cmd_sweep(args) -> int:
    scenario = load_scenario(args.scenario)
    figure = args.figure
    mc = None
    if not args.no_mc:
        trials, seed = _mc_settings(args, scenario)
        mc = experiments.MonteCarloConfig(n_trials=trials, seed=seed)
    bases = [scenario.params]
    if args.series_alpha_re:
        if figure not in (5, 6):
            raise ParameterError("--series-alpha-re applies to figures 5 and 6 only")
        bases = [scenario.params.replace(alpha_re=a) for a in _parse_floats(args.series_alpha_re)]
    specs = [experiments.default_spec(figure, b, mc) for b in bases]
    records = []
    for spec in specs:
        records.extend(experiments.run_figure(figure, spec, workers=args.workers))
    try:
        os.makedirs(args.out, exist_ok=True)
        csv_path = os.path.join(args.out, f"fig{figure}.csv")
        meta_path = os.path.join(args.out, f"fig{figure}.meta.json")
        experiments.write_csv(records, figure, csv_path, specs[0].axis)
        experiments.write_metadata(specs, figure, meta_path)
    except OSError as exc:
        raise CliError(f"cannot write sweep output to {args.out}: {exc}", EXIT_IO) from exc
    print(f"wrote {csv_path} ({len(records)} rows) and {meta_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secrelay",
        description="Secrecy analysis and relay power allocation for a DF massive-MIMO relay.")
    sub = parser.add_subparsers(dest="command", required=True)

    def power_flags(p):
        p.add_argument("--strategy", choices=["socmax", "ipmin", "fixed"],
                       help="relay power rule (default: socmax, or fixed if --p-r-db is given)")
        p.add_argument("--p-r-db", type=float, help="fixed relay power in dB")

    def mc_flags(p):
        p.add_argument("--trials", type=int, help="Monte Carlo trials")
        p.add_argument("--seed", type=int, help="64-bit master seed")
        p.add_argument("--workers", type=int, default=None,
                       help="worker threads (results do not depend on this)")

    p = sub.add_parser("analyze", help="evaluate the closed-form analysis")
    p.add_argument("scenario")
    power_flags(p)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of one metric")
    p.add_argument("scenario")
    p.add_argument("--target", choices=["soc", "ip", "outage"], default="soc")
    p.add_argument("--c-target", type=float,
                   help="secrecy rate threshold in bits/s for --target outage "
                        "(default: closed-form secrecy outage capacity)")
    power_flags(p)
    mc_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="write a figure sweep as CSV + JSON metadata")
    p.add_argument("figure", type=int, choices=[2, 3, 4, 5, 6])
    p.add_argument("scenario")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--no-mc", action="store_true", help="theory columns only")
    p.add_argument("--series-alpha-re", help="comma-separated alpha_re curves (figures 5, 6)")
    mc_flags(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ParameterError, SecrelayError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
