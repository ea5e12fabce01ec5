"""Causal-LM scorer for refactoring artifact trees.

Walks an artifact tree (``run.json`` plus ``<unit_id>/<variant>/code.txt``
files), scores every code text with a causal language model, and writes one
JSON line per (unit, variant) in the log-prob trace format: token i scored
given tokens before i, first token excluded, natural-log probabilities.
"""

from .scorer import ScoreRun, ScorerConfig, SkipEntry, score_tree

__all__ = ["ScoreRun", "ScorerConfig", "SkipEntry", "score_tree"]
