"""Batch command-line front end.

Each command loads and validates the YAML config, runs the Monte Carlo
harness and writes CSV (or JSON for ``design``) to ``--out`` or stdout.
Exit codes: 0 success, 2 configuration error, 3 runtime or solver error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys

import numpy as np

from .channel import build_channel
from .config import ConfigError, default_yaml, load_config
from .experiments import run_sweep
from .known_csi import MaxMinConfig, maxmin_see
from .metrics import min_see
from .unknown_csi import DesignConfig, design_unknown

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3

HEADERS = {
    "sweep-power": ["p_t_dbm", "scheme", "csi_mode", "mean_ee", "mean_see", "feas_prob",
                    "mean_sinr_gap_db", "n_feasible"],
    "feasibility": ["rho", "p_t_dbm", "scheme", "feas_prob"],
    "eves-sweep": ["k_eves", "scheme", "mean_min_see"],
    "convergence": ["realization", "scheme", "algo", "iter", "error"],
}


def _fmt(v):
    # repr of a float is locale independent and round-trips exactly
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _csv_text(command: str, seed: int, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# seed={seed}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADERS[command])
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def sweep_power_rows(cfg):
    spec = cfg.sweep_power_spec()
    res = run_sweep(spec, workers=cfg.threads)
    for value, sv, st in res.rows():
        yield (value, sv.label, spec.csi_mode, st.mean_ee, st.mean_see, st.feas_prob,
               st.mean_sinr_gap_db, st.n_feasible)


def feasibility_rows(cfg):
    for spec in cfg.feasibility_specs():
        res = run_sweep(spec, workers=cfg.threads)
        for value, sv, st in res.rows():
            yield value, spec.p_t_dbm, sv.label, st.feas_prob


def eves_sweep_rows(cfg):
    res = run_sweep(cfg.eves_sweep_spec(), workers=cfg.threads)
    for value, sv, st in res.rows():
        yield value, sv.label, st.mean_see


def convergence_rows(cfg):
    """Dinkelbach errors and the first CCP stage's errors of every solved design."""
    spec = cfg.convergence_spec()
    res = run_sweep(spec, workers=cfg.threads)
    value = spec.values[0]
    for i, rec in enumerate(res.records):
        for sv in spec.schemes:
            r = rec[(value, sv.label)]
            if not r.feasible or r.trace is None:
                continue
            for it, err in enumerate(r.trace["dinkelbach"], 1):
                yield i, sv.label, "dinkelbach", it, err
            stages = r.trace["ccp"]
            for it, err in enumerate(stages[0] if stages else [], 1):
                yield i, sv.label, "ccp", it, err


ROWS = {"sweep-power": sweep_power_rows, "feasibility": feasibility_rows,
        "eves-sweep": eves_sweep_rows, "convergence": convergence_rows}


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def design_report(cfg) -> dict:
    d = cfg.design_point()
    scenario, sv = d["scenario"], d["scheme"]
    channel = build_channel(scenario, d["bob"], d["eves"], sv.scheme)
    dcfg = cfg.raw["design"]
    if d["csi_mode"] == "unknown":
        out = design_unknown(channel, scenario,
                             DesignConfig.from_rho(scenario, dcfg["rho"], dcfg["delta_b_db"],
                                                   eps_dinkelbach=dcfg["eps"], eps_ccp=dcfg["eps"],
                                                   max_iter_dinkelbach=dcfg["max_iter_dinkelbach"],
                                                   max_iter_ccp=dcfg["max_iter_ccp"]),
                             sv.variant)
        extra = {"resultant_see": out.resultant_see, "dinkelbach_iters": out.dinkelbach_iters,
                 "ccp_iters_per_stage": list(out.ccp_iters_per_stage),
                 "lambda_trace": list(out.lambda_trace)}
    else:
        out = maxmin_see(channel, scenario,
                         MaxMinConfig(eps_bisect=dcfg["eps"], eps_ccp=dcfg["eps"],
                                      max_iter_ccp=dcfg["max_iter_ccp_known"],
                                      use_an=sv.variant == "an"))
        extra = {"t_star": out.t_star,
                 "min_see": min_see(scenario, channel, out.sol) if out.sol is not None else math.nan,
                 "bisection_steps": len(out.bisection_trace)}
    report = {"scheme": sv.label, "csi_mode": d["csi_mode"], "status": out.status,
              "ee_bob": out.ee_bob, "message": out.message}
    if out.sol is not None:
        report.update(info_precoder=out.sol.info_precoder, an_precoder=out.sol.an_precoder,
                      zf=out.sol.zf_flag)
    report.update(extra)
    return {k: _jsonable(v) for k, v in report.items()}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vlcsee", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log solver warnings")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in [("sweep-power", "EE/SEE/feasibility versus emitted power"),
                       ("feasibility", "feasibility probability versus rho"),
                       ("eves-sweep", "min-SEE versus number of eavesdroppers (known CSI)"),
                       ("convergence", "Dinkelbach and CCP error traces"),
                       ("design", "single design at the configured receiver positions"),
                       ("default-config", "print the default YAML configuration")]:
        c = sub.add_parser(name, help=text)
        c.add_argument("--out", help="output file (default: stdout)")
        if name != "default-config":
            c.add_argument("--config", help="YAML configuration file")
            c.add_argument("--seed", type=int)
            c.add_argument("--realizations", type=int)
            c.add_argument("--threads", type=int, help="worker processes")
    return p


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "default-config":
        _emit(default_yaml(), args.out)
        return EXIT_OK
    try:
        cfg = load_config(args.config, seed=args.seed, realizations=args.realizations,
                          threads=args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "design":
            text = json.dumps(design_report(cfg), indent=2) + "\n"
        else:
            text = _csv_text(args.command, cfg.seed, ROWS[args.command](cfg))
        _emit(text, args.out)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
