"""Command line surface: scenario runs, verification, sweeps, figure data.

Each subcommand loads a scenario (preset name or JSON path), runs one
analysis, and writes artifacts into --out. `run` executes every mode the
scenario enables plus the cost sweep when one is configured. Artifacts are
deterministic: rerunning a scenario reproduces byte-identical files except
for the manifest timestamp.

Exit codes: 0 success, 1 assumption failure under --strict, 2 input or I/O
error, 3 problem too large for the exact LP (enumeration guard).
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from .baselines import compare, sweep, sweep_boundaries
from .designer import InfeasibleDesignError, StrictModeError, design, to_sequential_policy
from .equilibrium import PRIVATE_SEQUENTIAL, PUBLIC, evaluate_policy_realized
from .lp import build_lp, solve
from .scenarios import Scenario, load_scenario
from .seqpolicy import CapacityError, check_policy, policy_to_dict


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _run_design(scn: Scenario, out: Path, args) -> list[str]:
    tp = design(scn.env, scn.welfare, strict=args.strict)
    pol = to_sequential_policy(tp, scn.env)
    _write_json(out / "design.json", tp.to_dict(labels=scn.env.labels))
    _write_json(out / "policy.json", policy_to_dict(pol, labels=scn.env.labels))
    q = tp.invite_probabilities()
    rows = [
        [scn.env.labels[s], float(tp.scores[s]), float(q[s])]
        for s in range(scn.env.n_states)
    ]
    _write_csv(out / "figdata_scores.csv", ["state", "score", "invite_prob"], rows)
    return ["design.json", "policy.json", "figdata_scores.csv"]


def _run_check(scn: Scenario, out: Path, args) -> list[str]:
    tp = design(scn.env, scn.welfare, strict=args.strict)
    pol = to_sequential_policy(tp, scn.env)
    report = check_policy(pol, scn.env, tol=args.tol)
    _write_json(out / "obedience.json", report.to_dict())
    return ["obedience.json"]


def _run_lp(scn: Scenario, out: Path, args) -> list[str]:
    prog = build_lp(scn.env, scn.welfare)
    sol = solve(prog)
    tp = design(scn.env, scn.welfare, strict=args.strict)
    payload = {
        "status": sol.status,
        "value": sol.value,
        "iterations": sol.iterations,
        "n_vars": prog.n_vars,
        "assignment": [
            {"state": scn.env.labels[s], "sequence": list(seq), "prob": p}
            for s, seq, p in sol.assignment(prog)
        ],
        "greedy_welfare": tp.expected_welfare,
        "agreement_gap": abs(sol.value - tp.expected_welfare)
        if sol.status == "OPTIMAL"
        else None,
    }
    _write_json(out / "lp.json", payload)
    return ["lp.json"]


def _run_public(scn: Scenario, out: Path, args) -> list[str]:
    tp = design(scn.env, scn.welfare, strict=args.strict)
    pol = to_sequential_policy(tp, scn.env)
    priv = evaluate_policy_realized(
        pol, scn.env, scn.welfare, mode=PRIVATE_SEQUENTIAL, obedience_tol=args.tol
    )
    pub = evaluate_policy_realized(pol, scn.env, scn.welfare, mode=PUBLIC)
    _write_json(
        out / "public.json",
        {
            "private_sequential": priv.to_dict(),
            "public_counterfactual": pub.to_dict(),
            "welfare_shortfall": priv.welfare - pub.welfare,
        },
    )
    return ["public.json"]


_COMPARE_HEADER = [
    "cost",
    "robust_welfare",
    "bce_predicted",
    "bce_realized",
    "theta_star",
    "p_star",
    "bce_threshold",
]


def _compare_row(rec) -> list:
    return [
        rec.cost,
        rec.robust_welfare,
        rec.bce_predicted,
        rec.bce_realized,
        rec.theta_star,
        rec.p_star,
        rec.bce_threshold,
    ]


def _run_compare(scn: Scenario, out: Path, args) -> list[str]:
    rec = compare(scn.env, scn.welfare)
    _write_csv(out / "comparison.csv", _COMPARE_HEADER, [_compare_row(rec)])
    return ["comparison.csv"]


def _run_sweep(scn: Scenario, out: Path, args) -> list[str]:
    if scn.sweep_costs is None:
        raise ValueError(f"scenario {scn.name!r} has no sweep block")
    records = sweep(scn.env, scn.welfare, scn.sweep_costs)
    _write_csv(out / "sweep.csv", _COMPARE_HEADER, [_compare_row(r) for r in records])
    _write_csv(
        out / "figdata_welfare.csv",
        ["cost", "robust", "bce_predicted", "bce_realized"],
        [[r.cost, r.robust_welfare, r.bce_predicted, r.bce_realized] for r in records],
    )
    _write_json(out / "sweep_summary.json", sweep_boundaries(records))
    return ["sweep.csv", "figdata_welfare.csv", "sweep_summary.json"]


_MODE_RUNNERS = {
    "design": _run_design,
    "check": _run_check,
    "lp": _run_lp,
    "baselines": _run_compare,
    "public-counterfactual": _run_public,
}


def _run_all(scn: Scenario, out: Path, args) -> list[str]:
    written: list[str] = []
    for mode in scn.modes:
        written.extend(_MODE_RUNNERS[mode](scn, out, args))
    if scn.sweep_costs is not None:
        written.extend(_run_sweep(scn, out, args))
    return written


_COMMANDS = {
    "design": (_run_design, "compute the robust threshold policy"),
    "check": (_run_check, "verify obedience of the designed policy"),
    "lp": (_run_lp, "cross-check the design against the exact LP"),
    "evaluate": (_run_public, "realized welfare, private versus public signals"),
    "compare": (_run_compare, "robust versus optimistic baselines at one cost"),
    "sweep": (_run_sweep, "baseline comparison across the configured cost grid"),
    "run": (_run_all, "every mode the scenario enables, plus the sweep"),
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--scenario",
        required=True,
        help="preset name (case1, case2) or path to a scenario JSON file",
    )
    common.add_argument(
        "--out", default="artifacts", help="output directory (created if missing)"
    )
    common.add_argument(
        "--tol", type=float, default=1e-9, help="obedience check tolerance"
    )
    common.add_argument(
        "--strict",
        action="store_true",
        help="fail (exit 1) on modeling-assumption violations instead of warning",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=0,
        help="recorded in the manifest; core results never depend on it",
    )
    parser = argparse.ArgumentParser(
        prog="robustcoord",
        description="Robust information design for binary-action coordination games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in _COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        scn = load_scenario(args.scenario)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        written = _COMMANDS[args.command][0](scn, out, args)
        _write_json(
            out / "manifest.json",
            {
                "schema": 1,
                "scenario": scn.name,
                "command": args.command,
                "modes": list(scn.modes),
                "artifacts": sorted(written),
                "flags": {"tol": args.tol, "strict": args.strict, "seed": args.seed},
                "timestamp": datetime.now(timezone.utc).isoformat(),
            },
        )
    except StrictModeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InfeasibleDesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
