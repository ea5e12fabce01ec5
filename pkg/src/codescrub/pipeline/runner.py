"""Batch refactoring into an artifact tree, and report assembly out of it.

Layout, one directory per unit:

    out/
      run.json                       run-level config and failure records
      <unit_id>/
        unit.json                    unit metadata (no code text)
        original/code.txt            unit text as sampled
        <chain>/code.txt             text after the chain
        <chain>/outcome.json         per-operator outcomes and status

Every stage below communicates only through this tree, so refactoring,
scoring, and reporting can run as separate processes.
"""

from __future__ import annotations

import csv
import dataclasses
import datetime
import io
import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from .. import __version__
from ..errors import CodeScrubError, ConfigError
from ..modelmetrics import (
    LogProbTrace,
    aggregate,
    metric_delta,
    min_k_prob,
    perplexity,
    read_traces,
)
from ..ops.base import OperatorId, RefactorConfig
from ..ops.chain import apply_chain
from ..overlap import overlap
from ..sketch.membership import NgramSketch
from ..units import CodeUnit, Granularity, Language, unit_from_dict, unit_to_dict

ORIGINAL = "original"

# Semantic rewrites run late so earlier text-level passes see stable shapes.
ALL_PYTHON_METHOD = (
    OperatorId.NORM,
    OperatorId.STYL,
    OperatorId.RENM,
    OperatorId.IFF,
    OperatorId.LOOP,
    OperatorId.ITER,
    OperatorId.COMM,
    OperatorId.PARAM,
    OperatorId.DECO,
)
ALL_PYTHON_CLASS = ALL_PYTHON_METHOD + (OperatorId.SHUF, OperatorId.INHR)
ALL_JAVA = (OperatorId.NORM, OperatorId.RENM, OperatorId.IFF, OperatorId.LOOP)


def expand_chain(label: str, unit: CodeUnit) -> list[OperatorId]:
    """Turn a chain label into a concrete operator list for one unit."""
    if label.strip().upper() == "ALL":
        if unit.language is Language.JAVA:
            return list(ALL_JAVA)
        if unit.granularity is Granularity.CLASS:
            return list(ALL_PYTHON_CLASS)
        return list(ALL_PYTHON_METHOD)
    parts = [p for p in label.replace("+", ",").split(",") if p.strip()]
    if not parts:
        raise ConfigError(f"empty operator chain {label!r}")
    return [OperatorId.parse(p) for p in parts]


def chain_label(label: str) -> str:
    """Canonical directory name for a requested chain."""
    if label.strip().upper() == "ALL":
        return "ALL"
    return "+".join(op.value for op in expand_chain(label, _LABEL_PROBE))


# Probe unit for label canonicalization only; never refactored.
_LABEL_PROBE = CodeUnit(
    id="probe",
    language=Language.PYTHON,
    granularity=Granularity.METHOD,
    text="pass\n",
)


@dataclass
class RunSummary:
    out_dir: str
    unit_ids: list[str]
    chains: list[str]
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def run_refactor(
    units: list[CodeUnit],
    chains: list[str],
    out_dir: str | Path,
    seed: int = 0,
    config: RefactorConfig | None = None,
    auto_norm: bool = True,
) -> RunSummary:
    """Apply every chain to every unit, writing the artifact tree.

    Per-unit failures are recorded and the run continues; whether any
    occurred is the caller's exit-status decision. Chains are normalized
    first by default (auto_norm) so text-level passes see canonical code;
    a chain already containing NORM is left alone.
    """
    base_config = config or RefactorConfig(seed=seed)
    if config is not None and config.seed != seed:
        base_config = dataclasses.replace(config, seed=seed)
    labels = [chain_label(c) for c in chains]
    if len(set(labels)) != len(labels):
        raise ConfigError(f"duplicate chains after canonicalization: {labels}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    seen_ids = set()
    for unit in units:
        if unit.id in seen_ids:
            raise ConfigError(f"duplicate unit id {unit.id!r}")
        seen_ids.add(unit.id)

    # Classes sampled from the same file are the pool INHR may pull from.
    class_peers: dict[str, list[CodeUnit]] = {}
    for unit in units:
        if unit.language is Language.PYTHON and unit.granularity is Granularity.CLASS:
            class_peers.setdefault(unit.path, []).append(unit)

    summary = RunSummary(out_dir=str(out), unit_ids=[u.id for u in units], chains=labels)
    for unit in units:
        unit_dir = out / unit.id
        (unit_dir / ORIGINAL).mkdir(parents=True, exist_ok=True)
        meta = unit_to_dict(unit)
        del meta["text"]
        meta["loc"] = unit.loc
        _write_json(unit_dir / "unit.json", meta)
        (unit_dir / ORIGINAL / "code.txt").write_text(unit.text, encoding="utf-8")
        peers = [p for p in class_peers.get(unit.path, []) if p.id != unit.id]
        for requested, label in zip(chains, labels):
            chain_dir = unit_dir / label
            chain_dir.mkdir(parents=True, exist_ok=True)
            record = {"unit_id": unit.id, "chain": label, "status": "ok"}
            text = unit.text
            try:
                ops = expand_chain(requested, unit)
                if auto_norm and OperatorId.NORM not in ops:
                    ops = [OperatorId.NORM] + ops
                outcomes = apply_chain(unit, ops, base_config, superclass_units=peers)
                text = outcomes[-1].text
                record["operators"] = [op.value for op in ops]
                record["outcomes"] = [
                    {
                        "operator": o.operator.value,
                        "applied": o.applied,
                        "sites": o.sites,
                        "notes": o.notes,
                    }
                    for o in outcomes
                ]
            except CodeScrubError as exc:
                record["status"] = "error"
                record["error"] = f"{type(exc).__name__}: {exc}"
                summary.failures.append(
                    {"unit_id": unit.id, "chain": label, "error": record["error"]}
                )
            (chain_dir / "code.txt").write_text(text, encoding="utf-8")
            _write_json(chain_dir / "outcome.json", record)
    _write_json(
        out / "run.json",
        {
            "seed": seed,
            "chains": labels,
            "unit_ids": summary.unit_ids,
            "failures": summary.failures,
            "tool_version": __version__,
        },
    )
    return summary


@dataclass
class UnitArtifacts:
    unit_id: str
    meta: dict
    original_text: str
    variants: dict[str, tuple[str, dict]]  # label -> (text, outcome record)


def load_artifacts(artifacts_dir: str | Path) -> list[UnitArtifacts]:
    root = Path(artifacts_dir)
    if not root.is_dir():
        raise ConfigError(f"artifact directory {root} does not exist")
    loaded = []
    for unit_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        meta_path = unit_dir / "unit.json"
        orig_path = unit_dir / ORIGINAL / "code.txt"
        if not meta_path.is_file() or not orig_path.is_file():
            continue
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        variants = {}
        for chain_dir in sorted(p for p in unit_dir.iterdir() if p.is_dir()):
            if chain_dir.name == ORIGINAL:
                continue
            code = chain_dir / "code.txt"
            outcome = chain_dir / "outcome.json"
            if code.is_file():
                record = (
                    json.loads(outcome.read_text(encoding="utf-8"))
                    if outcome.is_file()
                    else {"status": "ok"}
                )
                variants[chain_dir.name] = (code.read_text(encoding="utf-8"), record)
        loaded.append(
            UnitArtifacts(unit_dir.name, meta, orig_path.read_text(encoding="utf-8"), variants)
        )
    if not loaded:
        raise ConfigError(f"no unit artifacts under {root}")
    return loaded


@dataclass
class RunReport:
    rows: list[dict]
    chain_medians: dict[str, float]
    chain_mean_drops: dict[str, float]
    model_aggregates: list[dict]
    best_trial: dict
    missing_traces: list[str]
    warnings: list[str]
    environment: dict

    def to_json(self) -> str:
        return json.dumps(
            {
                "rows": self.rows,
                "chain_medians": self.chain_medians,
                "chain_mean_drops": self.chain_mean_drops,
                "model_aggregates": self.model_aggregates,
                "best_trial": self.best_trial,
                "missing_traces": self.missing_traces,
                "warnings": self.warnings,
                "environment": self.environment,
            },
            indent=2,
            sort_keys=True,
        )

    def to_csv(self) -> str:
        """Row per (unit, variant); metric columns blank without traces."""
        columns = [
            "unit_id",
            "chain",
            "total_chars",
            "overlapped_chars",
            "ratio",
            "ppl",
            "mink",
            "ppl_delta",
            "mink_delta",
            "status",
        ]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({c: row.get(c, "") for c in columns})
        return buf.getvalue()


def _group_traces(traces: list[LogProbTrace], warnings: list[str]):
    grouped: dict[tuple[str, str, str], LogProbTrace] = {}
    for trace in traces:
        key = (trace.model_id, trace.unit_id, trace.variant)
        if key in grouped:
            warnings.append(f"duplicate trace for {key}; keeping the first")
            continue
        grouped[key] = trace
    return grouped


def _mean(values: list[float]) -> float | str:
    return statistics.fmean(values) if values else ""


def _variant_labels(ua: UnitArtifacts) -> list[str]:
    return [ORIGINAL] + sorted(ua.variants)


def overlap_stage(units: list[UnitArtifacts], sketch: NgramSketch) -> dict:
    """Overlap ratio for every (unit, variant), with per-chain summaries."""
    rows: list[dict] = []
    per_chain_ratios: dict[str, list[float]] = {}
    per_chain_drops: dict[str, list[float]] = {}
    for ua in units:
        texts = {ORIGINAL: (ua.original_text, {"status": "ok"})}
        texts.update(ua.variants)
        original_ratio = 0.0
        for label in _variant_labels(ua):
            text, record = texts[label]
            rep = overlap(text, sketch)
            rows.append(
                {
                    "unit_id": ua.unit_id,
                    "chain": label,
                    "total_chars": rep.total_chars,
                    "overlapped_chars": rep.overlapped_chars,
                    "ratio": rep.ratio,
                    "status": record.get("status", "ok"),
                }
            )
            per_chain_ratios.setdefault(label, []).append(rep.ratio)
            if label == ORIGINAL:
                original_ratio = rep.ratio
            else:
                per_chain_drops.setdefault(label, []).append(original_ratio - rep.ratio)
    return {
        "rows": rows,
        "chain_medians": {
            label: statistics.median(vals)
            for label, vals in sorted(per_chain_ratios.items())
        },
        "chain_mean_drops": {
            label: statistics.fmean(vals)
            for label, vals in sorted(per_chain_drops.items())
        },
        "sketch_digest": sketch.params_digest.hex(),
    }


def metrics_stage(
    units: list[UnitArtifacts], traces: list[LogProbTrace], mink_k: float = 20.0
) -> dict:
    """Familiarity metrics for every (unit, variant, model) a trace covers.

    Variants missing a trace, or missing their original counterpart, are
    listed under "missing" rather than failing the stage.
    """
    warnings: list[str] = []
    grouped = _group_traces(traces, warnings)
    models = sorted({model for model, _, _ in grouped})
    rows: list[dict] = []
    missing: list[str] = []
    pairs: list[tuple[LogProbTrace, LogProbTrace]] = []
    for ua in units:
        for label in _variant_labels(ua):
            for model in models:
                trace = grouped.get((model, ua.unit_id, label))
                if trace is None:
                    missing.append(f"{model}/{ua.unit_id}/{label}")
                    continue
                row = {
                    "unit_id": ua.unit_id,
                    "chain": label,
                    "model_id": model,
                    "ppl": perplexity(trace),
                    "mink": min_k_prob(trace, mink_k),
                    "ppl_delta": "",
                    "mink_delta": "",
                }
                if label != ORIGINAL:
                    base = grouped.get((model, ua.unit_id, ORIGINAL))
                    if base is None:
                        missing.append(f"{model}/{ua.unit_id}/{ORIGINAL}")
                    else:
                        delta = metric_delta(base, trace, mink_k)
                        row["ppl_delta"] = delta.ppl_delta
                        row["mink_delta"] = delta.mink_delta
                        pairs.append((base, trace))
                rows.append(row)
    aggregates = [
        {
            "variant": variant,
            "model_id": model,
            "ppl_delta_mean": d.ppl_delta,
            "mink_delta_mean": d.mink_delta,
        }
        for (variant, model), d in sorted(aggregate(pairs, mink_k).items())
    ] if pairs else []
    return {
        "rows": rows,
        "aggregates": aggregates,
        "missing": sorted(set(missing)),
        "warnings": warnings,
        "k": mink_k,
    }


def assemble_report(
    overlap_data: dict,
    metrics_data: dict | None = None,
    seed: int | None = None,
) -> RunReport:
    """Merge stage outputs into one report.

    Metric columns on a merged row average across models when several
    scored the same variant; the per-model breakdown stays available in
    model_aggregates and the metrics stage rows.
    """
    by_key: dict[tuple[str, str], dict] = {}
    rows: list[dict] = []
    for src in overlap_data["rows"]:
        row = dict(src)
        row.setdefault("ppl", "")
        row.setdefault("mink", "")
        row.setdefault("ppl_delta", "")
        row.setdefault("mink_delta", "")
        by_key[(row["unit_id"], row["chain"])] = row
        rows.append(row)

    model_aggregates: list[dict] = []
    missing: list[str] = []
    warnings: list[str] = []
    if metrics_data:
        merged: dict[tuple[str, str], dict[str, list[float]]] = {}
        for mrow in metrics_data["rows"]:
            key = (mrow["unit_id"], mrow["chain"])
            bucket = merged.setdefault(key, {"ppl": [], "mink": [], "ppl_delta": [], "mink_delta": []})
            for col in bucket:
                value = mrow.get(col, "")
                if value != "":
                    bucket[col].append(value)
        for key, bucket in merged.items():
            row = by_key.get(key)
            if row is None:
                warnings.append(f"metrics for unknown artifact {key[0]}/{key[1]}")
                continue
            for col, values in bucket.items():
                row[col] = _mean(values)
        model_aggregates = metrics_data.get("aggregates", [])
        missing = metrics_data.get("missing", [])
        warnings.extend(metrics_data.get("warnings", []))

    chain_medians = overlap_data["chain_medians"]
    best_trial: dict = {}
    if "ALL" in chain_medians:
        best_trial = {
            "chain": "ALL",
            "original_median_ratio": chain_medians.get(ORIGINAL),
            "refactored_median_ratio": chain_medians["ALL"],
        }
        for agg in model_aggregates:
            if agg["variant"] == "ALL":
                best_trial.setdefault("models", []).append(agg)

    environment = {
        "seed": seed,
        "sketch_digest": overlap_data.get("sketch_digest"),
        "tool_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    return RunReport(
        rows=rows,
        chain_medians=chain_medians,
        chain_mean_drops=overlap_data.get("chain_mean_drops", {}),
        model_aggregates=model_aggregates,
        best_trial=best_trial,
        missing_traces=missing,
        warnings=warnings,
        environment=environment,
    )


def run_evaluation(
    artifacts_dir: str | Path,
    sketch: NgramSketch,
    traces: list[LogProbTrace] | None = None,
    mink_k: float = 20.0,
    seed: int | None = None,
) -> RunReport:
    """Score the artifact tree: overlap always, model metrics when traces exist."""
    units = load_artifacts(artifacts_dir)
    overlap_data = overlap_stage(units, sketch)
    metrics_data = metrics_stage(units, traces, mink_k) if traces else None
    if seed is None:
        run_path = Path(artifacts_dir) / "run.json"
        if run_path.is_file():
            seed = json.loads(run_path.read_text(encoding="utf-8")).get("seed")
    return assemble_report(overlap_data, metrics_data, seed=seed)


def load_traces_arg(path: str | Path) -> list[LogProbTrace]:
    """Accept either one JSONL file or a directory of them."""
    p = Path(path)
    if p.is_dir():
        traces = []
        for f in sorted(p.glob("*.jsonl")):
            traces.extend(read_traces(f))
        return traces
    return read_traces(p)
