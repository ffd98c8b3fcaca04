"""Command-line front end: classify, explain, encode, verify.

Machine output is JSON lines with a stable field order and lexicographically
sorted explanations, so identical configurations produce byte-identical
output; the human format renders the same records.  Wall-clock figures are
only added under --timing to keep the default output reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .bruteforce import (
    BoundExceeded,
    ExplanationSets,
    bf_all_axps,
    bf_all_cxps,
    check_duality,
)
from .core import AXP, CXP, DecisionList, Instance, InputError, classify
from .encoding import (
    MultiClassUnsupported,
    dump_dimacs,
    dump_wcnf,
    encode_alternative,
    encode_dlsat,
    encode_explanation_query,
)
from .enumeration import enumerate_cxp_lbx, enumerate_marco
from .explain import NoCxpExists, load_encoding, one_axp, one_cxp
from .horn import NotRestricted, horn_axp
from .model_io import ParseError, parse_instances, parse_model
from .oracle import OracleTimeout

ONE_SHOT_MODES = ("one-axp", "one-cxp", "horn")
ENUM_MODES = ("enum-lbx", "enum-marco-axp", "enum-marco-cxp")


@dataclass
class RunConfig:
    model: str
    instances: str | None = None
    mode: str = "enum-marco-axp"
    encoding: str = "main"
    budget_s: float | None = None
    format: str = "human"
    seed: int = 0
    bf_max_points: int = 1_000_000
    bf_max_features: int = 12
    strict: bool = False
    out_dir: str = "."
    timing: bool = False
    query: str = "explain"
    target_class: str | None = None


def _use_color(stream) -> bool:
    try:
        istty = stream.isatty()
    except (AttributeError, ValueError):
        istty = False
    return istty and not os.environ.get("DLX_NO_COLOR")


def _bold(text: str, stream) -> str:
    return f"\033[1m{text}\033[0m" if _use_color(stream) else text


def _emit(record: dict, cfg: RunConfig, out=None) -> None:
    out = out if out is not None else sys.stdout
    if cfg.format == "json-lines":
        out.write(json.dumps(record, separators=(", ", ": ")) + "\n")
    else:
        parts = []
        for key, value in record.items():
            if isinstance(value, (list, dict)):
                value = json.dumps(value, separators=(",", ":"))
            if key in ("class", "status", "kind"):
                value = _bold(str(value), out)
            parts.append(f"{key}={value}")
        out.write("  ".join(parts) + "\n")


def _load(cfg: RunConfig) -> tuple[DecisionList, list[Instance]]:
    dl = parse_model(Path(cfg.model).read_text(encoding="utf-8"))
    instances: list[Instance] = []
    if cfg.instances:
        instances = parse_instances(
            Path(cfg.instances).read_text(encoding="utf-8"), dl.space
        )
    return dl, instances


def _feature_names(dl: DecisionList, feats) -> list[str]:
    return [dl.space.feature_names[j] for j in sorted(feats)]


def _deadline(cfg: RunConfig) -> float | None:
    return time.monotonic() + cfg.budget_s if cfg.budget_s else None


def _encode_for(cfg: RunConfig, dl: DecisionList, inst: Instance):
    if cfg.encoding == "alternative":
        return encode_alternative(dl, inst)
    return encode_explanation_query(dl, inst)


def cmd_classify(cfg: RunConfig) -> int:
    dl, instances = _load(cfg)
    mismatches = 0
    labelled = 0
    for idx, inst in enumerate(instances):
        cls, rule = classify(dl, inst.point)
        record = {
            "instance": idx,
            "point": [dl.space.domains[j][v] for j, v in enumerate(inst.point)],
            "class": dl.space.classes[cls],
            "rule": dl.rule_name(rule),
        }
        if inst.label is not None:
            labelled += 1
            record["expected"] = dl.space.classes[inst.label]
            if inst.label != cls:
                mismatches += 1
                record["mismatch"] = True
        _emit(record, cfg)
    if labelled:
        _emit({"summary": "mismatches", "count": mismatches, "of": labelled}, cfg)
    return 0


def _one_shot_record(cfg, dl, idx, inst):
    record = {"instance": idx, "point": [dl.space.domains[j][v]
                                         for j, v in enumerate(inst.point)]}
    started = time.monotonic()
    deadline = _deadline(cfg)
    if cfg.mode == "horn":
        cls, _ = classify(dl, inst.point)
        record["class"] = dl.space.classes[cls]
        try:
            expl = horn_axp(dl, inst)
            record["kind"] = AXP
            record["features"] = _feature_names(dl, expl.features)
        except NotRestricted as exc:
            record["error"] = f"not-restricted: {exc}"
    else:
        enc = _encode_for(cfg, dl, inst)
        record["class"] = dl.space.classes[enc.pred_class]
        session = load_encoding(enc)
        try:
            if cfg.mode == "one-axp":
                expl = one_axp(enc, session, deadline=deadline)
            else:
                expl = one_cxp(enc, session, deadline=deadline)
            record["kind"] = expl.kind
            record["features"] = _feature_names(dl, expl.features)
        except NoCxpExists:
            record["kind"] = CXP
            record["features"] = None
            record["note"] = "no contrastive explanation exists"
        except OracleTimeout:
            record["incomplete"] = True
    if cfg.timing:
        record["time"] = round(time.monotonic() - started, 3)
    return record


def _enum_record(cfg, dl, idx, inst):
    enc = _encode_for(cfg, dl, inst)
    session = load_encoding(enc)
    deadline = _deadline(cfg)
    if cfg.mode == "enum-lbx":
        report = enumerate_cxp_lbx(enc, session, deadline=deadline)
    else:
        target = AXP if cfg.mode == "enum-marco-axp" else CXP
        report = enumerate_marco(enc, session, target, deadline=deadline)
    record = {
        "instance": idx,
        "point": [dl.space.domains[j][v] for j, v in enumerate(inst.point)],
        "class": dl.space.classes[enc.pred_class],
        "axps": [_feature_names(dl, x) for x in report.axps],
        "cxps": [_feature_names(dl, y) for y in report.cxps],
        "counts": report.counts,
        "avg_size": report.average_sizes,
        "complete": report.complete,
    }
    if cfg.timing:
        record["time"] = round(report.wall_time, 3)
    return record, report.complete


def cmd_explain(cfg: RunConfig) -> int:
    dl, instances = _load(cfg)
    if cfg.encoding == "alternative" and len(dl.space.classes) != 2:
        print("error: the alternative encoding handles binary models only",
              file=sys.stderr)
        return 2
    all_complete = True
    for idx, inst in enumerate(instances):
        if cfg.mode in ONE_SHOT_MODES:
            record = _one_shot_record(cfg, dl, idx, inst)
            complete = "incomplete" not in record
        else:
            record, complete = _enum_record(cfg, dl, idx, inst)
        all_complete &= complete
        _emit(record, cfg)
    if not all_complete and cfg.strict:
        return 3
    return 0


def cmd_encode(cfg: RunConfig) -> int:
    dl, instances = _load(cfg)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.query == "dlsat":
        if cfg.target_class is None:
            print("error: --target-class is required for dlsat", file=sys.stderr)
            return 2
        target = dl.space.class_index(cfg.target_class)
        vm, clauses = encode_dlsat(dl, target)
        path = out_dir / f"dlsat_{cfg.target_class}.cnf"
        path.write_text(dump_dimacs(vm, clauses), encoding="utf-8")
        _emit({"file": path.name, "vars": vm.var_count,
               "clauses": len(clauses)}, cfg)
        return 0
    for idx, inst in enumerate(instances):
        try:
            enc = _encode_for(cfg, dl, inst)
        except MultiClassUnsupported as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        path = out_dir / f"inst{idx:04d}.wcnf"
        path.write_text(dump_wcnf(enc), encoding="utf-8")
        _emit({
            "file": path.name,
            "vars": enc.varmap.var_count,
            "hard": len(enc.hard),
            "soft": len(enc.soft),
        }, cfg)
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    dl, instances = _load(cfg)
    bounds = dict(max_points=cfg.bf_max_points, max_features=cfg.bf_max_features)
    failures = 0
    for idx, inst in enumerate(instances):
        try:
            expected_x = bf_all_axps(dl, inst, **bounds)
            expected_y = bf_all_cxps(dl, inst, **bounds)
        except BoundExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        enc = encode_explanation_query(dl, inst)
        deadline = _deadline(cfg)
        results = {}
        report = enumerate_marco(enc, load_encoding(enc), AXP, deadline=deadline)
        results["marco-axp"] = (set(report.axps), set(report.cxps))
        report = enumerate_marco(enc, load_encoding(enc), CXP, deadline=deadline)
        results["marco-cxp"] = (set(report.axps), set(report.cxps))
        report = enumerate_cxp_lbx(enc, load_encoding(enc), deadline=deadline)
        results["lbx"] = (None, set(report.cxps))

        ok = check_duality(ExplanationSets(expected_x, expected_y))
        problems = [] if ok else ["duality violated on brute-force sets"]
        for mode, (axps, cxps) in results.items():
            if axps is not None and axps != set(expected_x):
                problems.append(f"{mode} axps diverge")
            if cxps != set(expected_y):
                problems.append(f"{mode} cxps diverge")
        record = {
            "instance": idx,
            "point": [dl.space.domains[j][v] for j, v in enumerate(inst.point)],
            "status": "ok" if not problems else "mismatch",
        }
        if problems:
            failures += 1
            record["problems"] = problems
            record["expected_axps"] = [sorted(x) for x in sorted(expected_x, key=sorted)]
            record["expected_cxps"] = [sorted(y) for y in sorted(expected_y, key=sorted)]
            record["got"] = {
                mode: {
                    "axps": None if axps is None else [sorted(x) for x in sorted(axps, key=sorted)],
                    "cxps": [sorted(y) for y in sorted(cxps, key=sorted)],
                }
                for mode, (axps, cxps) in results.items()
            }
        _emit(record, cfg)
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dlxplain",
        description="Rigorous explanations for decision-list classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, instances_required=True):
        p.add_argument("--model", required=True, help="decision-list model file")
        p.add_argument("--instances", required=instances_required,
                       help="instance CSV file")
        p.add_argument("--format", choices=("human", "json-lines"),
                       default="human")
        p.add_argument("--budget-s", type=float, default=None,
                       help="per-instance time budget in seconds")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--timing", action="store_true",
                       help="add wall-clock fields to the output")

    p = sub.add_parser("classify", help="classify instances")
    common(p)

    p = sub.add_parser("explain", help="compute or enumerate explanations")
    common(p)
    p.add_argument("--mode", choices=ONE_SHOT_MODES + ENUM_MODES,
                   default="enum-marco-axp")
    p.add_argument("--encoding", choices=("main", "alternative"), default="main")
    p.add_argument("--strict", action="store_true",
                   help="exit 3 when any instance ran out of budget")

    p = sub.add_parser("encode", help="export CNF/WCNF encodings")
    common(p, instances_required=False)
    p.add_argument("--encoding", choices=("main", "alternative"), default="main")
    p.add_argument("--query", choices=("explain", "dlsat"), default="explain")
    p.add_argument("--target-class", default=None)
    p.add_argument("--out-dir", default=".")

    p = sub.add_parser("verify", help="cross-check enumeration against "
                                      "exhaustive ground truth")
    common(p)
    p.add_argument("--bf-max-points", type=int, default=1_000_000)
    p.add_argument("--bf-max-features", type=int, default=12)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        model=args.model,
        instances=args.instances,
        format=args.format,
        budget_s=args.budget_s,
        seed=args.seed,
        timing=args.timing,
        mode=getattr(args, "mode", "enum-marco-axp"),
        encoding=getattr(args, "encoding", "main"),
        strict=getattr(args, "strict", False),
        out_dir=getattr(args, "out_dir", "."),
        query=getattr(args, "query", "explain"),
        target_class=getattr(args, "target_class", None),
        bf_max_points=getattr(args, "bf_max_points", 1_000_000),
        bf_max_features=getattr(args, "bf_max_features", 12),
    )
    if cfg.budget_s is not None and cfg.budget_s <= 0:
        print("error: --budget-s must be positive", file=sys.stderr)
        return 2
    handlers = {
        "classify": cmd_classify,
        "explain": cmd_explain,
        "encode": cmd_encode,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](cfg)
    except (ParseError, InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
