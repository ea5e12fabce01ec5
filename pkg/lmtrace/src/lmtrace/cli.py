"""Command-line front end: ``lmtrace --artifacts A --model M --out T.jsonl``.

Exit codes follow the pipeline convention: 0 clean, 2 when some files were
skipped, 1 on fatal errors (bad arguments, unreadable tree, unloadable model).
"""

from __future__ import annotations

import argparse
import sys

from .scorer import ScorerConfig, score_tree


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lmtrace",
        description="Score artifact-tree code units with a causal LM and "
        "emit per-token log-probability traces as JSON lines.",
    )
    parser.add_argument("--artifacts", required=True, help="artifact tree root")
    parser.add_argument("--model", required=True, help="model name or local path")
    parser.add_argument("--out", required=True, help="output trace .jsonl path")
    parser.add_argument("--device", default="cpu", help="torch device hint")
    parser.add_argument("--max-length", type=int, default=1024)
    parser.add_argument("--batch-size", type=int, default=8)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1

    try:
        config = ScorerConfig(
            model=args.model,
            artifacts=args.artifacts,
            out=args.out,
            device=args.device,
            max_length=args.max_length,
            batch_size=args.batch_size,
        )
        run = score_tree(config)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    print(f"wrote {run.traces_written} traces to {args.out}")
    if run.truncated:
        print(f"truncated {len(run.truncated)} over-length texts", file=sys.stderr)
    for entry in run.skipped:
        print(f"skipped {entry.unit_id}/{entry.variant}: {entry.reason}", file=sys.stderr)
    return 2 if run.skipped else 0


if __name__ == "__main__":
    sys.exit(main())
