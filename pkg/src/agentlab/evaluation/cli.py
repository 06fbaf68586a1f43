"""Command-line entry point: ``bench``, ``report`` and ``run``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from agentlab.errors import AgentLabError
from agentlab.evaluation.config import HarnessConfig
from agentlab.evaluation.dataset import Question, load_dataset
from agentlab.evaluation.metrics import aggregate
from agentlab.evaluation.report import format_counts, format_table, write_report
from agentlab.evaluation.runner import bench, group_results, load_results, standard_reports


def parse_metric(value: str, k: int | None, runs: int) -> tuple[str, int]:
    """Map a CLI metric name to (metric, k).

    ``pass@1`` is the mean of single runs over all runs; ``pass@N`` is
    shorthand for ``pass@k`` with k=N.
    """
    if value == "pass@1":
        return "pass@1_avg", runs
    if value == "vote":
        return "majority_vote", runs
    if value == "pass@k":
        return "pass@k", k if k is not None else runs
    if value.startswith("pass@") and value[5:].isdigit():
        n = int(value[5:])
        if k is not None and k != n:
            raise argparse.ArgumentTypeError(f"--metric {value} conflicts with --k {k}")
        return "pass@k", n
    raise argparse.ArgumentTypeError(f"unknown metric {value!r}")


def load_config(path: str | None) -> HarnessConfig:
    return HarnessConfig.load(path) if path else HarnessConfig.default()


def cmd_bench(args: argparse.Namespace) -> int:
    from agentlab.evaluation.agent import AgentSolver

    config = load_config(args.config)
    metric, k = parse_metric(args.metric, args.k, args.runs)
    questions = load_dataset(args.dataset)
    solver = AgentSolver(config, files_dir=Path(args.dataset).parent, preset=args.preset)
    outcome = bench(
        questions,
        solver,
        runs=args.runs,
        metric=metric,
        k=k,
        out_dir=args.out,
        workers=args.workers or config["eval"]["workers"],
        max_retries=config["eval"]["max_retries"],
        config_hash=config.config_hash,
        meta={"dataset": Path(args.dataset).name, "preset": args.preset},
    )
    print(f"primary: {outcome.primary.label}")
    print(format_table(outcome.reports), end="")
    print(f"wrote {args.out}/report.json")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    src = Path(args.input)
    results = load_results(src / "results.jsonl")
    info_path = src / "report.json"
    info = json.loads(info_path.read_text())["info"] if info_path.exists() else {}
    runs = info.get("runs") or max(r.run_index for r in results) + 1
    metric, k = parse_metric(args.metric, args.k, runs) if args.metric else (info.get("metric", "pass@1_avg"), info.get("k", runs))
    grouped = group_results(results)
    primary = aggregate(grouped, metric, k if metric == "pass@k" else runs)
    reports = standard_reports(grouped, runs, info.get("k", runs))
    print(f"primary: {primary.label}")
    print(format_counts(primary))
    print(format_table(reports), end="")
    if args.write:
        write_report(src, primary, reports, {**info, "metric": metric, "k": k})
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    from agentlab.evaluation.agent import AgentSolver

    config = load_config(args.config)
    solver = AgentSolver(config, files_dir=Path.cwd(), preset=args.preset)
    question = Question(task_id="adhoc", question=args.task, level=1, true_answer="?")
    traj = solver(question, 0, 0)
    if args.trajectory:
        Path(args.trajectory).write_text(traj.to_jsonl(config.config_hash), encoding="utf-8")
    print(traj.final_answer if traj.final_answer is not None else f"(no answer: {traj.stop_reason})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="agentlab", description="Agent benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="run a dataset and write results and reports")
    b.add_argument("--dataset", required=True)
    b.add_argument("--runs", type=int, default=1)
    b.add_argument("--metric", default="pass@1", help="pass@1, pass@k, vote or pass@N")
    b.add_argument("--k", type=int, default=None)
    b.add_argument("--preset", choices=["single", "k3", "k5"], default=None)
    b.add_argument("--config", default=None)
    b.add_argument("--out", required=True)
    b.add_argument("--workers", type=int, default=None)
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("report", help="recompute the report from a results directory")
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--metric", default=None)
    r.add_argument("--k", type=int, default=None)
    r.add_argument("--write", action="store_true", help="rewrite report.json and report.txt")
    r.set_defaults(func=cmd_report)

    t = sub.add_parser("run", help="run one ad-hoc task and print the final answer")
    t.add_argument("--task", required=True)
    t.add_argument("--config", default=None)
    t.add_argument("--preset", choices=["single", "k3", "k5"], default=None)
    t.add_argument("--trajectory", default=None, help="write the trajectory JSONL here")
    t.set_defaults(func=cmd_run)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AgentLabError, OSError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
