"""Forced-decoding scorer: artifact tree in, log-prob trace lines out.

The whole unit is scored unconditionally (no prompt prefix); there is no
sampling anywhere, so repeated runs over the same weights are bit-identical.
Texts longer than the configured maximum are truncated and flagged; files
that cannot be scored at all become recorded skip entries rather than
aborting the run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import torch
from transformers import AutoModelForCausalLM, AutoTokenizer


@dataclass
class ScorerConfig:
    """Where to read code, which model scores it, and where traces go."""

    model: str
    artifacts: str | Path
    out: str | Path
    device: str = "cpu"
    max_length: int = 1024
    batch_size: int = 8

    def __post_init__(self):
        # One conditioning token plus one scored token is the minimum trace.
        if self.max_length < 2:
            raise ValueError(f"max_length must be >= 2, got {self.max_length}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")


@dataclass(frozen=True)
class SkipEntry:
    unit_id: str
    variant: str
    reason: str


@dataclass
class ScoreRun:
    """Summary of one scoring pass, mirrored into the sidecar JSON."""

    model_id: str
    traces_written: int
    truncated: list[tuple[str, str]]
    skipped: list[SkipEntry]


def discover(artifacts: str | Path) -> list[tuple[str, str, str]]:
    """All (unit_id, variant, text) triples in the tree, original first."""
    root = Path(artifacts)
    run_file = root / "run.json"
    if not run_file.is_file():
        raise FileNotFoundError(f"no run.json under {root}")
    unit_ids = sorted(json.loads(run_file.read_text(encoding="utf-8"))["unit_ids"])
    triples = []
    for unit_id in unit_ids:
        unit_dir = root / unit_id
        variants = sorted(
            (p.parent.name for p in unit_dir.glob("*/code.txt")),
            key=lambda v: (v != "original", v),
        )
        for variant in variants:
            text = (unit_dir / variant / "code.txt").read_text(encoding="utf-8")
            triples.append((unit_id, variant, text))
    return triples


def score_tree(config: ScorerConfig) -> ScoreRun:
    """Score every code text in the tree and write traces plus a sidecar."""
    triples = discover(config.artifacts)
    tokenizer = AutoTokenizer.from_pretrained(config.model)
    if tokenizer.pad_token is None:
        tokenizer.pad_token = tokenizer.eos_token
    model = AutoModelForCausalLM.from_pretrained(config.model)
    model.to(config.device)
    model.eval()

    truncated: list[tuple[str, str]] = []
    skipped: list[SkipEntry] = []
    prepared: list[tuple[str, str, list[int]]] = []
    for unit_id, variant, text in triples:
        ids = tokenizer(text)["input_ids"]
        if len(ids) > config.max_length:
            ids = ids[: config.max_length]
            truncated.append((unit_id, variant))
        if len(ids) < 2:
            skipped.append(
                SkipEntry(unit_id, variant, f"{len(ids)} token(s); need 2 to score")
            )
            continue
        prepared.append((unit_id, variant, ids))

    lines: list[str] = []
    for start in range(0, len(prepared), config.batch_size):
        batch = prepared[start : start + config.batch_size]
        try:
            scored = _score_batch(model, tokenizer, batch, config.device)
        except RuntimeError:
            # Retry one at a time so one oversized file cannot sink its
            # batch mates; an item that still fails becomes a skip entry.
            scored = []
            for item in batch:
                try:
                    scored.extend(_score_batch(model, tokenizer, [item], config.device))
                except RuntimeError as exc:
                    skipped.append(SkipEntry(item[0], item[1], f"scoring failed: {exc}"))
        for unit_id, variant, tokens in scored:
            lines.append(_trace_line(config.model, unit_id, variant, tokens))

    out_path = Path(config.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.writelines(line + "\n" for line in lines)

    run = ScoreRun(config.model, len(lines), truncated, skipped)
    _write_sidecar(out_path, run)
    return run


def _score_batch(model, tokenizer, batch, device):
    pad_id = tokenizer.pad_token_id
    width = max(len(ids) for _, _, ids in batch)
    input_ids = torch.full((len(batch), width), pad_id, dtype=torch.long)
    mask = torch.zeros((len(batch), width), dtype=torch.long)
    for row, (_, _, ids) in enumerate(batch):
        input_ids[row, : len(ids)] = torch.tensor(ids, dtype=torch.long)
        mask[row, : len(ids)] = 1
    with torch.no_grad():
        logits = model(
            input_ids=input_ids.to(device), attention_mask=mask.to(device)
        ).logits
    logprobs = torch.log_softmax(logits.float(), dim=-1).cpu()

    scored = []
    for row, (unit_id, variant, ids) in enumerate(batch):
        texts = tokenizer.convert_ids_to_tokens(ids)
        tokens = [
            # Clamp: log-softmax can round to +0.0 but must never exceed it.
            (texts[i], min(logprobs[row, i - 1, ids[i]].item(), 0.0))
            for i in range(1, len(ids))
        ]
        scored.append((unit_id, variant, tokens))
    return scored


def _trace_line(model_id: str, unit_id: str, variant: str, tokens) -> str:
    return json.dumps(
        {
            "model_id": model_id,
            "unit_id": unit_id,
            "variant": variant,
            "tokens": [{"t": text, "lp": lp} for text, lp in tokens],
        },
        ensure_ascii=False,
    )


def _write_sidecar(out_path: Path, run: ScoreRun) -> None:
    sidecar = out_path.with_name(out_path.stem + ".scoring.json")
    summary = {
        "model_id": run.model_id,
        "traces_written": run.traces_written,
        "truncated": [
            {"unit_id": u, "variant": v} for u, v in run.truncated
        ],
        "skipped": [
            {"unit_id": s.unit_id, "variant": s.variant, "reason": s.reason}
            for s in run.skipped
        ],
    }
    sidecar.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
