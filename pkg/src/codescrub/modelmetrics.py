"""Familiarity metrics over token log-probability traces.

Perplexity and Min-K% are order-free statistics of a trace's log-probs;
deltas are reported refactored-minus-original so that a positive value
always reads "the model got less familiar".
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptyTrace, PairMismatch


@dataclass(frozen=True)
class TraceToken:
    text: str
    logprob: float


@dataclass
class LogProbTrace:
    model_id: str
    unit_id: str
    variant: str  # operator-chain label or "original"
    tokens: list[TraceToken]

    def logprobs(self) -> np.ndarray:
        if not self.tokens:
            raise EmptyTrace(f"trace {self.unit_id}/{self.variant} has no tokens")
        return np.array([t.logprob for t in self.tokens], dtype=np.float64)

    def to_json(self) -> str:
        return json.dumps(
            {
                "model_id": self.model_id,
                "unit_id": self.unit_id,
                "variant": self.variant,
                "tokens": [{"t": t.text, "lp": t.logprob} for t in self.tokens],
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str) -> "LogProbTrace":
        obj = json.loads(line)
        tokens = []
        for entry in obj["tokens"]:
            lp = float(entry["lp"])
            if lp > 0:
                raise ValueError(
                    f"log-probability {lp} > 0 in trace {obj.get('unit_id')!r}"
                )
            tokens.append(TraceToken(entry["t"], lp))
        return cls(
            model_id=obj["model_id"],
            unit_id=obj["unit_id"],
            variant=obj["variant"],
            tokens=tokens,
        )


@dataclass
class DeltaReport:
    ppl_delta: float
    mink_delta: float


@dataclass
class MetricsReport:
    ppl: float
    mink_scores: dict[float, float] = field(default_factory=dict)
    deltas: DeltaReport | None = None


def perplexity(trace: LogProbTrace) -> float:
    """exp of the mean negative log-likelihood."""
    lps = trace.logprobs()
    return float(np.exp(-lps.mean()))


def min_k_prob(trace: LogProbTrace, k_percent: float, surprisal: bool = True) -> float:
    """Mean NLL of the k% least-probable tokens (higher = more surprised).

    surprisal=False flips the sign, giving the mean log-likelihood form of
    the original membership-inference statistic.
    """
    if not 0 < k_percent <= 100:
        raise ValueError(f"k_percent must be in (0, 100], got {k_percent}")
    lps = trace.logprobs()
    m = max(1, math.ceil(k_percent / 100 * len(lps)))
    lowest = np.sort(lps)[:m]
    mean_ll = float(lowest.mean())
    return -mean_ll if surprisal else mean_ll


def compute_report(trace: LogProbTrace, ks: tuple[float, ...] = (20.0,)) -> MetricsReport:
    return MetricsReport(
        ppl=perplexity(trace),
        mink_scores={k: min_k_prob(trace, k) for k in ks},
    )


def metric_delta(
    original: LogProbTrace, refactored: LogProbTrace, k: float = 20.0
) -> DeltaReport:
    """Refactored score minus original score; positive = less familiar."""
    if original.model_id != refactored.model_id:
        raise PairMismatch(
            f"model mismatch: {original.model_id!r} vs {refactored.model_id!r}"
        )
    if original.unit_id != refactored.unit_id:
        raise PairMismatch(
            f"unit mismatch: {original.unit_id!r} vs {refactored.unit_id!r}"
        )
    return DeltaReport(
        ppl_delta=perplexity(refactored) - perplexity(original),
        mink_delta=min_k_prob(refactored, k) - min_k_prob(original, k),
    )


def aggregate(
    pairs: list[tuple[LogProbTrace, LogProbTrace]], k: float = 20.0
) -> dict[tuple[str, str], DeltaReport]:
    """Mean deltas grouped by (operator label, model), plus an Average row.

    The Average row per model is the mean of that model's per-operator means,
    mirroring the usual summary-table convention.
    """
    groups: dict[tuple[str, str], list[DeltaReport]] = {}
    for original, refactored in pairs:
        d = metric_delta(original, refactored, k)
        groups.setdefault((refactored.variant, refactored.model_id), []).append(d)
    out: dict[tuple[str, str], DeltaReport] = {}
    per_model: dict[str, list[DeltaReport]] = {}
    for (op, model), deltas in sorted(groups.items()):
        mean = DeltaReport(
            ppl_delta=float(np.mean([d.ppl_delta for d in deltas])),
            mink_delta=float(np.mean([d.mink_delta for d in deltas])),
        )
        out[(op, model)] = mean
        per_model.setdefault(model, []).append(mean)
    for model, means in per_model.items():
        out[("Average", model)] = DeltaReport(
            ppl_delta=float(np.mean([m.ppl_delta for m in means])),
            mink_delta=float(np.mean([m.mink_delta for m in means])),
        )
    return out


def read_traces(path: str | Path) -> list[LogProbTrace]:
    traces = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                traces.append(LogProbTrace.from_json(line))
    return traces


def write_traces(traces: list[LogProbTrace], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for trace in traces:
            fh.write(trace.to_json() + "\n")
