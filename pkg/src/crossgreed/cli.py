"""Command-line front end.

Four subcommands wire the library into reproducible runs:

* ``search``        -- ingest a dataset, maximize the cross objective.
* ``eval``          -- score one explicit column subset both ways.
* ``gen-hard``      -- emit a graph-derived worst-case instance.
* ``verify-theory`` -- run the randomized structural checks.

Every run writes one JSON document (stdout, plus ``--out`` if given)
with sorted keys and a ``schema_version`` field; given identical flags,
seeds and input bytes the document is byte-identical across runs, so
timing goes to stderr, never into the report.  Exit codes: 0 success,
1 verification failure, 2 input error, 3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__, hardgen, ingest, joint_eval, score_dist, selector, theory_lab
from .errors import CapacityError, CrossgreedError, DatasetError, VerificationError
from .nb_model import ColumnModel, NbObjective

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2
EXIT_CAPACITY = 3


def thread_cap() -> int:
    """Upper bound on worker parallelism, from CROSSGREED_THREADS.

    Execution is currently sequential everywhere, which satisfies any
    cap; the value is parsed and validated so misconfiguration fails
    loudly rather than silently.
    """
    raw = os.environ.get("CROSSGREED_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise DatasetError(f"CROSSGREED_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise DatasetError("CROSSGREED_THREADS must be at least 1")
    return value


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "item"):  # numpy scalars
        return value.item()
    return value


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(_jsonable(report), sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def _value_fields(prefix: str, value) -> dict:
    if isinstance(value, Fraction):
        return {prefix: float(value), f"{prefix}_exact": str(value)}
    return {prefix: float(value)}


def _dataset_spec(args) -> ingest.DatasetSpec:
    if not args.dataset:
        raise DatasetError("--dataset is required")
    features = tuple(args.features.split(",")) if args.features else None
    return ingest.DatasetSpec(
        path=args.dataset,
        label_column=args.label,
        delimiter=args.delimiter,
        feature_columns=features,
        smoothing_alpha=Fraction(args.alpha) if args.mode == "exact" else args.alpha,
    )


def _build_objective(args) -> tuple[NbObjective, int]:
    spec = _dataset_spec(args)
    exact = args.mode == "exact"
    pairs, _, rows = ingest.load_objective_columns(spec, exact=exact)
    if not pairs:
        raise DatasetError("dataset has no feature columns to search over")
    columns = [ColumnModel.build(name, pair) for name, pair in pairs]
    prune = args.prune_eps if not exact else 0.0
    return NbObjective(columns, prune_eps=prune), rows


def _assumption_block(args, ids) -> dict:
    """Ground-truth cross-check of the selected columns, caps permitting."""
    block: dict = {"columns": sorted(ids)}
    if not ids:
        block.update(status="ok", gap=0.0, joint_auc_star=0.5)
        return block
    try:
        table = ingest.build_joint_table(_dataset_spec(args), set(ids),
                                         exact=args.mode == "exact")
        gap = joint_eval.independence_gap(table, set(ids))
        joint_auc = joint_eval.auc_star_joint(table, set(ids))
    except CapacityError as exc:
        block.update(status="skipped", reason=str(exc))
        return block
    block.update(_value_fields("gap", gap))
    block.update(_value_fields("joint_auc_star", joint_auc))
    # float-mode estimation noise below 1e-12 is not a real violation
    block["status"] = "ok" if gap <= 1e-12 else "violated"
    return block


def cmd_search(args) -> int:
    started = time.perf_counter()
    objective, rows = _build_objective(args)

    method = {"greedy": selector.greedy_select,
              "lazy": selector.lazy_greedy_select}.get(args.method)
    if method is not None:
        report = method(objective.f_of, objective.universe(), args.k,
                        pad_to_k=args.pad_to_k)
    elif args.method == "exhaustive":
        report = selector.exhaustive_select(objective.f_of, objective.universe(),
                                            args.k)
    else:
        raise DatasetError(f"unknown method {args.method!r}")

    selected = set(report.selected)
    auc, bound = objective.auc_star_with_bound(selected)
    normalized = 2 * auc - 1

    doc = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": "search",
        "config": {
            "dataset": str(args.dataset),
            "label": args.label,
            "k": args.k,
            "method": args.method,
            "mode": args.mode,
            "alpha": float(args.alpha),
            "prune_eps": args.prune_eps,
            "pad_to_k": args.pad_to_k,
            "seed": args.seed,
        },
        "data": {"rows": rows, "n_columns": len(objective.columns)},
        "report": {
            "method": report.method,
            "selected": list(report.selected),
            "gains": [float(g) for g in report.gains],
            "gains_exact": [str(g) for g in report.gains] if objective.exact else None,
            "f_trajectory": [float(v) for v in report.f_trajectory],
            "evaluations": report.evaluations,
            "objective_evaluations": objective.eval_count,
            "stale_bound_violations": report.stale_bound_violations,
        },
        "result": {
            **_value_fields("auc_star", auc),
            **_value_fields("normalized_auc", normalized),
            "auc_error_bound": float(bound),
        },
        "assumption": _assumption_block(args, selected),
    }
    _emit(doc, args.out)
    print(f"search finished in {time.perf_counter() - started:.3f}s "
          f"(backend: {score_dist.BACKEND})", file=sys.stderr)
    return EXIT_OK


def cmd_eval(args) -> int:
    if not args.subset:
        raise DatasetError("--subset is required for eval")
    ids = args.subset.split(",")
    objective, rows = _build_objective(args)
    unknown = [c for c in ids if c not in objective.columns]
    if unknown:
        raise DatasetError(f"unknown columns: {unknown}")

    auc, bound = objective.auc_star_with_bound(set(ids))
    doc = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": "eval",
        "config": {
            "dataset": str(args.dataset),
            "label": args.label,
            "mode": args.mode,
            "alpha": float(args.alpha),
            "subset": sorted(ids),
        },
        "data": {"rows": rows, "n_columns": len(objective.columns)},
        "factorized": {
            **_value_fields("auc_star", auc),
            "auc_error_bound": float(bound),
        },
        "assumption": _assumption_block(args, set(ids)),
    }
    try:
        table = ingest.build_joint_table(_dataset_spec(args), set(ids),
                                         exact=args.mode == "exact")
        joint_auc = joint_eval.auc_star_joint(table, set(ids))
        mi = joint_eval.mutual_information(table, set(ids))
        doc["joint"] = {
            **_value_fields("auc_star", joint_auc),
            **_value_fields("mutual_information_bits", mi),
        }
    except CapacityError as exc:
        doc["joint"] = {"status": "skipped", "reason": str(exc)}
    _emit(doc, args.out)
    return EXIT_OK


def cmd_gen_hard(args) -> int:
    if not args.graph:
        raise DatasetError("--graph is required for gen-hard")
    graph = hardgen.load_graph(args.graph)
    doc: dict = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": "gen-hard",
        "graph": {"path": str(args.graph), "vertices": graph.n, "edges": graph.m},
    }

    header = [f"x{v}" for v in range(graph.n)] + ["label"]
    if args.sample:
        rows = hardgen.sample_hard_dataset(graph, args.sample, args.seed)
        lines = [",".join(header)]
        lines += [",".join(row) for row in rows]
        payload = "\n".join(lines) + "\n"
        kind = "sampled"
        n_rows = len(rows)
    else:
        instance = hardgen.build_hard_instance(graph)
        lines = [",".join(header + ["weight"])]
        for (values, label), mass in sorted(instance.joint.rows.items()):
            lines.append(",".join(list(values) + [str(label), str(mass)]))
        payload = "\n".join(lines) + "\n"
        kind = "exact"
        n_rows = len(instance.joint.rows)

    if args.out_data:
        Path(args.out_data).write_text(payload, encoding="utf-8")
        doc["output"] = {"path": str(args.out_data), "kind": kind, "rows": n_rows}
    else:
        doc["output"] = {"kind": kind, "rows": n_rows}
        doc["inline_rows"] = payload.splitlines()

    if args.subset:
        vertices = {int(v) for v in args.subset.split(",")}
        record = hardgen.verify_reduction(graph, vertices)
        doc["subset_check"] = {
            "subset": sorted(vertices),
            **_value_fields("phi", record.phi),
            **_value_fields("normalized_auc", record.normalized_auc),
            **_value_fields("mutual_information_bits", record.mutual_information_bits),
        }
    _emit(doc, args.out)
    return EXIT_OK


def cmd_verify_theory(args) -> int:
    n = args.trials
    summary = theory_lab.run_verification_suites(
        seed=args.seed,
        lemma_trials=n,
        general_trials=n // 2,
        nonneg_trials=n,
        kernel_trials=n,
        fourier_trials=min(3, max(0, n)),
        swap_trials=max(0, n // 5),
        fourier_tol=args.tol,
    )
    doc = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": "verify-theory",
        "config": {"seed": args.seed, "trials": n, "tol": args.tol},
        "summary": summary,
    }
    _emit(doc, args.out)
    return EXIT_OK if summary["passed"] else EXIT_VERIFICATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossgreed",
        description="Feature-cross search and its verification tooling.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--out", help="also write the JSON report to this path")
        p.add_argument("--seed", type=int, default=0)

    def dataset_flags(p):
        p.add_argument("--dataset", help="delimited text file with a header row")
        p.add_argument("--label", default="label", help="name of the label column")
        p.add_argument("--delimiter", default=",")
        p.add_argument("--features",
                       help="comma-separated feature columns (default: all)")
        p.add_argument("--alpha", type=float, default=0.0,
                       help="additive smoothing for conditional estimates")
        p.add_argument("--mode", choices=("exact", "float"), default="exact")
        p.add_argument("--prune-eps", type=float, default=0.0,
                       help="float mode: drop atoms below this mass under both laws")

    p = sub.add_parser("search", help="select k columns maximizing the crossed AUC")
    dataset_flags(p)
    common(p)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--method", choices=("greedy", "lazy", "exhaustive"),
                   default="greedy")
    p.add_argument("--no-pad", dest="pad_to_k", action="store_false",
                   help="stop early on nonpositive marginal gain instead of "
                        "filling the budget")
    p.set_defaults(pad_to_k=True, func=cmd_search)

    p = sub.add_parser("eval", help="evaluate one explicit column subset")
    dataset_flags(p)
    common(p)
    p.add_argument("--subset", help="comma-separated column names")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen-hard", help="emit a graph-derived hard instance")
    common(p)
    p.add_argument("--graph", help="edge list file: one 'u v' per line")
    p.add_argument("--sample", type=int, default=0,
                   help="write this many sampled rows instead of exact weights")
    p.add_argument("--subset", help="comma-separated vertex ids to verify")
    p.add_argument("--out-data", help="path for the generated instance file")
    p.set_defaults(func=cmd_gen_hard)

    p = sub.add_parser("verify-theory", help="run the randomized structural checks")
    common(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-6,
                   help="tolerance for the quadrature-vs-closed-form check")
    p.set_defaults(func=cmd_verify_theory)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        thread_cap()
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (DatasetError, CrossgreedError, OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
