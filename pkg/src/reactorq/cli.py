"""Command-line entry point.

    reactorq train    --config run.json [--seed N] [--out DIR]
    reactorq baseline --config run.json --method idp|cvp [--seed N] [--out DIR]
    reactorq scenario --config run.json --scenario NAME [--seed N] [--out DIR]
    reactorq compare  --config run.json [--seed N] [--out DIR]
"""

import argparse
import sys

from reactorq import runner
from reactorq.config import ConfigError, load_config, resolve_config
from reactorq.models import MINIMUM_TIME, DomainError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reactorq",
        description="Q-learning optimal control for batch reactor models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True,
                       help="path to a JSON run configuration")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        p.add_argument("--out", default=None,
                       help="override the config output directory")

    common(sub.add_parser("train",
                          help="fit a Q-function and extract its policy"))
    p = sub.add_parser("baseline", help="run a reference optimizer")
    common(p)
    p.add_argument("--method", required=True, choices=("idp", "cvp"),
                   help="iterative dynamic programming or direct search")
    p = sub.add_parser("scenario",
                       help="replay a named disturbance in all three modes")
    common(p)
    p.add_argument("--scenario", required=True,
                   help="scenario name from the config's 'scenarios' table")
    common(sub.add_parser("compare",
                          help="policy vs both baselines on one model"))
    return parser


def _apply_overrides(config, args):
    if args.seed is not None:
        config["seed"] = args.seed
    if args.out is not None:
        config["out_dir"] = args.out
    # re-validate so the run hash reflects the overridden values
    return resolve_config(config)


def _report(config, result, args):
    print(f"run directory: {result['run_dir']}")
    if args.command == "train":
        model = result["model"]
        metric = runner.final_metric(model, result["policy_traj"])
        print(f"policy {runner.metric_name(model)}: {metric:.6g}")
    elif args.command == "baseline":
        model = runner.build_model(config)
        objective = result["schedule"].objective
        if model.objective_kind == MINIMUM_TIME:
            objective = abs(objective)
        print(f"{args.method} {runner.metric_name(model)}: {objective:.6g}")
    elif args.command == "scenario":
        report = result["report"]
        for mode in report.ranking:
            print(f"{mode}: {report.final_metrics[mode]:.6g}")
    elif args.command == "compare":
        for _, method, metric, value in result["summary"]:
            print(f"{method} {metric}: {value:.6g}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _apply_overrides(load_config(args.config), args)
        result = runner.run_command(
            config, args.command,
            method=getattr(args, "method", None),
            scenario=getattr(args, "scenario", None))
    except (ConfigError, DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _report(config, result, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
