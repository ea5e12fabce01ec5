"""Command-line workflow: build a sketch, sample units, refactor, score, report.

Each subcommand is one stage; stages hand data to each other through files
(a sketch file, a units JSONL, the artifact tree), so any stage can be rerun
alone. Exit status: 0 clean, 2 finished with per-unit failures or skipped
inputs, 1 fatal configuration or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..errors import CodeScrubError, ConfigError
from ..ops.base import RefactorConfig
from ..sketch.manifest import build_from_manifest, load_manifest
from ..sketch.membership import DEFAULT_GRAM_WIDTH, DEFAULT_TARGET_FP, NgramSketch
from ..units import Granularity, Language, read_units, write_units
from .runner import (
    assemble_report,
    load_artifacts,
    load_traces_arg,
    metrics_stage,
    overlap_stage,
    run_refactor,
)
from .sampling import SampleConfig, sample_units

OK = 0
FATAL = 1
PARTIAL = 2


def _warn(lines: list[str]) -> None:
    for line in lines:
        print(f"warning: {line}", file=sys.stderr)


def cmd_build_sketch(args) -> int:
    manifest = load_manifest(args.manifest)
    sketch, warnings = build_from_manifest(
        manifest, gram_width=args.gram, target_fp=args.fp, exact=args.exact
    )
    sketch.save(args.out)
    _warn(warnings)
    mode = "exact" if sketch.exact else f"fp<={sketch.estimated_fp:.2e}"
    print(f"sketch: {sketch.inserted_grams} grams, width {sketch.gram_width}, {mode} -> {args.out}")
    return PARTIAL if warnings else OK


def cmd_sample(args) -> int:
    manifest = load_manifest(args.manifest)
    filters = {}
    for item in args.filter or []:
        if "=" not in item:
            raise ConfigError(f"--filter expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        filters[key] = value
    config = SampleConfig(
        n=args.n,
        seed=args.seed,
        min_loc=args.min_loc,
        granularity=Granularity(args.granularity),
        language=Language(args.language) if args.language else None,
        metadata_filters=filters or None,
        strata_key=args.strata_key,
    )
    units, warnings = sample_units(manifest, config)
    write_units(units, args.out)
    _warn(warnings)
    print(f"sampled {len(units)} units -> {args.out}")
    return PARTIAL if warnings else OK


def cmd_refactor(args) -> int:
    units = read_units(args.units)
    config = RefactorConfig(seed=args.seed, max_renames=args.max_renames)
    summary = run_refactor(
        units, args.chain, args.out, seed=args.seed, config=config
    )
    print(
        f"refactored {len(summary.unit_ids)} units x {len(summary.chains)} chains -> {summary.out_dir}"
    )
    if summary.failures:
        print(f"{len(summary.failures)} unit/chain failures (see run.json)", file=sys.stderr)
        return PARTIAL
    return OK


def cmd_overlap(args) -> int:
    sketch = NgramSketch.load(args.sketch)
    units = load_artifacts(args.artifacts)
    data = overlap_stage(units, sketch)
    out = Path(args.artifacts) / "overlap.json"
    out.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    for label, median in data["chain_medians"].items():
        print(f"{label}: median overlap {median:.4f}")
    print(f"overlap rows -> {out}")
    return OK


def cmd_metrics(args) -> int:
    units = load_artifacts(args.artifacts)
    traces = load_traces_arg(args.traces)
    data = metrics_stage(units, traces, mink_k=args.k)
    out = Path(args.artifacts) / "metrics.json"
    out.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    for agg in data["aggregates"]:
        print(
            f"{agg['variant']} / {agg['model_id']}: "
            f"dPPL {agg['ppl_delta_mean']:+.4f}, dMinK {agg['mink_delta_mean']:+.4f}"
        )
    if data["missing"]:
        print(f"{len(data['missing'])} unscored variants (see metrics.json)", file=sys.stderr)
    print(f"metric rows -> {out}")
    return OK


def cmd_report(args) -> int:
    root = Path(args.artifacts)
    overlap_path = root / "overlap.json"
    if not overlap_path.is_file():
        raise ConfigError(f"{overlap_path} not found; run the overlap stage first")
    overlap_data = json.loads(overlap_path.read_text(encoding="utf-8"))
    metrics_path = root / "metrics.json"
    metrics_data = (
        json.loads(metrics_path.read_text(encoding="utf-8"))
        if metrics_path.is_file()
        else None
    )
    seed = None
    run_path = root / "run.json"
    if run_path.is_file():
        seed = json.loads(run_path.read_text(encoding="utf-8")).get("seed")
    report = assemble_report(overlap_data, metrics_data, seed=seed)

    out = Path(args.out)
    json_path = out if out.suffix == ".json" else out.with_suffix(".json")
    csv_path = json_path.with_suffix(".csv")
    json_path.write_text(report.to_json() + "\n", encoding="utf-8")
    csv_path.write_text(report.to_csv(), encoding="utf-8")
    print(f"report -> {json_path} and {csv_path}")
    bad = sum(1 for row in report.rows if row.get("status") != "ok")
    if bad:
        print(f"{bad} rows carry a failure status", file=sys.stderr)
        return PARTIAL
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="codescrub",
        description="Refactor sampled code units and measure contamination reduction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-sketch", help="build an n-gram corpus sketch")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--gram", type=int, default=DEFAULT_GRAM_WIDTH)
    p.add_argument("--fp", type=float, default=DEFAULT_TARGET_FP)
    p.add_argument("--exact", action="store_true", help="exact set instead of a filter")
    p.set_defaults(func=cmd_build_sketch)

    p = sub.add_parser("sample", help="sample code units from a corpus manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--min-loc", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--granularity", choices=[g.value for g in Granularity], default="method")
    p.add_argument("--language", choices=[l.value for l in Language], default=None)
    p.add_argument("--strata-key", default=None, help="metadata key for stratified sampling")
    p.add_argument("--filter", action="append", help="metadata key=value filter; repeatable")
    p.add_argument("--out", default="units.jsonl")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("refactor", help="apply operator chains to sampled units")
    p.add_argument("--units", required=True)
    p.add_argument(
        "--chain",
        action="append",
        required=True,
        help="ALL or operator names joined by + or , (repeatable)",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-renames", type=int, default=3)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_refactor)

    p = sub.add_parser("overlap", help="score artifact tree against a corpus sketch")
    p.add_argument("--artifacts", required=True)
    p.add_argument("--sketch", required=True)
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("metrics", help="score artifact tree against model traces")
    p.add_argument("--artifacts", required=True)
    p.add_argument("--traces", required=True, help="trace JSONL file or directory")
    p.add_argument("--k", type=float, default=20.0, help="Min-K percentage")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("report", help="assemble stage outputs into JSON and CSV reports")
    p.add_argument("--artifacts", required=True)
    p.add_argument("--out", default="report.json", help="JSON path; CSV lands beside it")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; 2 means partial failure here, so remap.
        return OK if exc.code == 0 else FATAL
    try:
        return args.func(args)
    except CodeScrubError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FATAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FATAL


if __name__ == "__main__":
    sys.exit(main())
