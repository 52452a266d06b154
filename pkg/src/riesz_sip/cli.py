"""Command line interface.

    riesz-sip verify      run theorem suites, write a JSON report
    riesz-sip oracle-study  oracle gap vs grid resolution study
    riesz-sip shrink      minimize a failing instance or counterexample

Exit codes: 0 all checks passed, 1 at least one violation, 2 invalid
configuration or input. The environment variable RIESZ_SIP_SEED, when set,
overrides --seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from .harness import (
    CHECKS,
    ConfigError,
    Instance,
    THEOREMS,
    Tolerances,
    TrialConfig,
    build_grids,
    _run_check,
    convergence_study,
    emit_report,
    run_suite,
    shrink,
)

DEFAULTS = TrialConfig(trials=1)


def _add_config_flags(p: argparse.ArgumentParser, trials_default: int) -> None:
    p.add_argument("--trials", type=int, default=trials_default,
                   help=f"trials per suite (default {trials_default})")
    p.add_argument("--seed", type=int, default=0,
                   help="base RNG seed; RIESZ_SIP_SEED overrides")
    p.add_argument("--m", type=int, default=None,
                   help="fix the domain dimension (default: range "
                        f"[{DEFAULTS.m_lo}, {DEFAULTS.m_hi}])")
    p.add_argument("--n", type=int, default=None,
                   help="fix the codomain dimension (default: range "
                        f"[{DEFAULTS.n_lo}, {DEFAULTS.n_hi}])")
    p.add_argument("--tol-rel", type=float, default=DEFAULTS.tolerances.rel)
    p.add_argument("--tol-abs", type=float, default=DEFAULTS.tolerances.abs)
    p.add_argument("--cone-band", type=float, default=DEFAULTS.tolerances.cone_band)
    p.add_argument("--theta-lo", type=float, default=DEFAULTS.theta_lo)
    p.add_argument("--theta-hi", type=float, default=DEFAULTS.theta_hi)
    p.add_argument("--theta-count", type=int, default=DEFAULTS.theta_count)
    p.add_argument("--angle-count", type=int, default=DEFAULTS.angle_count)
    p.add_argument("--lambda-lo", type=float, default=DEFAULTS.lambda_lo)
    p.add_argument("--lambda-hi", type=float, default=DEFAULTS.lambda_hi)
    p.add_argument("--lambda-count", type=int, default=DEFAULTS.lambda_count)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riesz-sip",
        description="Verification harness for lattice-valued semi-inner products.")
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run theorem suites")
    pv.add_argument("--theorems", default="all",
                    help="comma-separated subset of "
                         f"{{{','.join(THEOREMS)}}} or 'all'")
    _add_config_flags(pv, trials_default=10_000)
    pv.add_argument("--report", default=None, help="write the JSON report here")
    pv.add_argument("--instances", default=None,
                    help="directory of instance JSON files injected into every "
                         "selected suite")

    po = sub.add_parser("oracle-study", help="oracle gap vs grid resolution")
    po.add_argument("--grids", default="100,1000,10000",
                    help="comma-separated grid sizes")
    _add_config_flags(po, trials_default=1000)
    po.add_argument("--report", default=None, help="write the JSON report here")

    ps = sub.add_parser("shrink", help="minimize a failing instance")
    ps.add_argument("--instance", required=True,
                    help="instance or counterexample JSON file")
    ps.add_argument("--check", default=None,
                    help="check to shrink against; required for bare instances, "
                         "optional override for counterexample files")
    ps.add_argument("--out", default=None,
                    help="write the shrunk counterexample here (default stdout)")
    _add_config_flags(ps, trials_default=1)
    return parser


def _config_from_args(args: argparse.Namespace, theorems: tuple) -> TrialConfig:
    seed = args.seed
    env = os.environ.get("RIESZ_SIP_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise ConfigError(f"RIESZ_SIP_SEED must be an integer, got {env!r}")
    cfg = TrialConfig(
        seed=seed,
        trials=args.trials,
        tolerances=Tolerances(rel=args.tol_rel, abs=args.tol_abs,
                              cone_band=args.cone_band),
        theta_lo=args.theta_lo, theta_hi=args.theta_hi, theta_count=args.theta_count,
        angle_count=args.angle_count,
        lambda_lo=args.lambda_lo, lambda_hi=args.lambda_hi,
        lambda_count=args.lambda_count,
        theorems=theorems,
    )
    if args.m is not None:
        cfg = replace(cfg, m_lo=args.m, m_hi=args.m)
    if args.n is not None:
        cfg = replace(cfg, n_lo=args.n, n_hi=args.n)
    return cfg


def _parse_theorems(raw: str) -> tuple:
    if raw.strip() == "all":
        return THEOREMS
    names = tuple(t.strip() for t in raw.split(",") if t.strip())
    unknown = set(names) - set(THEOREMS)
    if unknown:
        raise ConfigError(f"unknown theorems: {sorted(unknown)}")
    return names


def _load_instances(directory: str) -> tuple:
    root = Path(directory)
    if not root.is_dir():
        raise ConfigError(f"--instances path is not a directory: {directory}")
    loaded = []
    for path in sorted(root.glob("*.json")):
        try:
            with open(path, encoding="utf-8") as fh:
                d = json.load(fh)
            if "instance" in d:  # counterexample wrapper
                d = d["instance"]
            loaded.append(Instance.from_dict(d))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"cannot load instance {path}: {exc}")
    return tuple(loaded)


def _cmd_verify(args: argparse.Namespace) -> int:
    config = _config_from_args(args, _parse_theorems(args.theorems))
    injected = _load_instances(args.instances) if args.instances else ()
    report = run_suite(config, injected=injected)
    if args.report:
        emit_report(report, args.report)
    for name in config.theorems:
        t = report.theorems[name]
        print(f"{name}: trials={t['trials']} passes={t['passes']} "
              f"failures={t['failures']} borderline={t['borderline']} "
              f"max_residual={t['max_residual']:.3e}")
    print("ok" if report.ok else "FAIL")
    return 0 if report.ok else 1


def _cmd_oracle_study(args: argparse.Namespace) -> int:
    try:
        sizes = tuple(int(g.strip()) for g in args.grids.split(",") if g.strip())
    except ValueError:
        raise ConfigError(f"--grids must be comma-separated integers: {args.grids!r}")
    config = _config_from_args(args, theorems=("oracle",))
    study = convergence_study(config, grid_sizes=sizes)
    if args.report:
        emit_report(study, args.report)
    for row in study.rows:
        print(f"grid={row['grid_size']}: box_times={row['box_times_gap']:.3e} "
              f"box_plus={row['box_plus_gap']:.3e} defect={row['defect_gap']:.3e}")
    print("ok" if study.ok else "FAIL")
    return 0 if study.ok else 1


def _cmd_shrink(args: argparse.Namespace) -> int:
    try:
        with open(args.instance, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read {args.instance}: {exc}")
    check = args.check or data.get("theorem")
    if check is None:
        raise ConfigError("--check is required for bare instance files")
    if check not in CHECKS:
        raise ConfigError(f"unknown check {check!r}; choose from {sorted(CHECKS)}")
    inst_dict = data.get("instance", data)
    try:
        inst = Instance.from_dict(inst_dict)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"invalid instance: {exc}")
    config = _config_from_args(args, theorems=(check,))

    original = _run_check(check, inst, config, build_grids(config))
    if original.status != "fail":
        raise ConfigError("instance does not fail the check; nothing to shrink")
    small, res = shrink(inst, check, config)
    out = {
        "schema": "riesz-sip/1",
        "theorem": check,
        "failed": list(res.failed),
        "residuals": dict(res.residuals),
        "instance": small.to_dict(),
    }
    text = json.dumps(out, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "oracle-study":
            return _cmd_oracle_study(args)
        return _cmd_shrink(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
