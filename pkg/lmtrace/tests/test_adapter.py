"""Scorer behavior over hand-written artifact trees."""

import json

import pytest
from conftest import write_tree

from lmtrace import ScorerConfig, score_tree
from lmtrace.cli import main

CODE = "def add(a, b):\n    return a + b\n"
VARIANT = "def add(a, b):\n    return b + a\n"


def _score(tmp_path, tiny_model_dir, units, **overrides):
    tree = write_tree(tmp_path / "tree", units)
    out = tmp_path / "traces.jsonl"
    config = ScorerConfig(model=tiny_model_dir, artifacts=tree, out=out, **overrides)
    return score_tree(config), out


def test_first_token_is_excluded(tmp_path, tiny_model_dir):
    # A two-token text has no context for token 0, so exactly one token scores.
    run, out = _score(tmp_path, tiny_model_dir, {"u0": {"original": "ab"}})
    (line,) = out.read_text().splitlines()
    assert run.traces_written == 1
    assert len(json.loads(line)["tokens"]) == 1


def test_trace_lines_match_schema(tmp_path, tiny_model_dir):
    _, out = _score(
        tmp_path, tiny_model_dir, {"u0": {"original": CODE, "RENM": VARIANT}}
    )
    for line in out.read_text().splitlines():
        obj = json.loads(line)
        assert set(obj) == {"model_id", "unit_id", "variant", "tokens"}
        assert obj["tokens"]
        for token in obj["tokens"]:
            assert set(token) == {"t", "lp"}
            assert token["lp"] <= 0.0


def test_rescoring_is_bit_identical(tmp_path, tiny_model_dir):
    units = {"u0": {"original": CODE, "RENM": VARIANT}, "u1": {"original": VARIANT}}
    _, first = _score(tmp_path / "a", tiny_model_dir, units)
    _, second = _score(tmp_path / "b", tiny_model_dir, units)
    assert first.read_bytes() == second.read_bytes()


def test_truncation_is_applied_and_recorded(tmp_path, tiny_model_dir):
    run, out = _score(
        tmp_path, tiny_model_dir, {"u0": {"original": CODE}}, max_length=4
    )
    (line,) = out.read_text().splitlines()
    assert len(json.loads(line)["tokens"]) == 3  # 4 kept tokens, first unscored
    assert run.truncated == [("u0", "original")]
    sidecar = json.loads((out.parent / "traces.scoring.json").read_text())
    assert sidecar["truncated"] == [{"unit_id": "u0", "variant": "original"}]


def test_unscorable_text_becomes_skip_entry(tmp_path, tiny_model_dir):
    run, out = _score(
        tmp_path, tiny_model_dir, {"u0": {"original": CODE, "RENM": "a"}}
    )
    assert run.traces_written == 1
    (entry,) = run.skipped
    assert (entry.unit_id, entry.variant) == ("u0", "RENM")
    assert "token" in entry.reason
    sidecar = json.loads((out.parent / "traces.scoring.json").read_text())
    assert len(sidecar["skipped"]) == 1
    # Every (unit, variant) in the tree is accounted for: trace or skip.
    traced = {
        (json.loads(l)["unit_id"], json.loads(l)["variant"])
        for l in out.read_text().splitlines()
    }
    assert traced | {("u0", "RENM")} == {("u0", "original"), ("u0", "RENM")}


def test_batch_size_does_not_change_scores(tmp_path, tiny_model_dir):
    units = {
        f"u{i}": {"original": f"def f{i}(x):\n    return x + {i}\n"} for i in range(6)
    }
    _, singles = _score(tmp_path / "a", tiny_model_dir, units, batch_size=1)
    _, batched = _score(tmp_path / "b", tiny_model_dir, units, batch_size=4)
    for one, many in zip(
        singles.read_text().splitlines(), batched.read_text().splitlines()
    ):
        a, b = json.loads(one), json.loads(many)
        assert [t["t"] for t in a["tokens"]] == [t["t"] for t in b["tokens"]]
        for ta, tb in zip(a["tokens"], b["tokens"]):
            assert ta["lp"] == pytest.approx(tb["lp"], abs=1e-5)


def test_config_rejects_degenerate_values(tmp_path):
    with pytest.raises(ValueError):
        ScorerConfig(model="m", artifacts=tmp_path, out=tmp_path / "t", max_length=1)
    with pytest.raises(ValueError):
        ScorerConfig(model="m", artifacts=tmp_path, out=tmp_path / "t", batch_size=0)


def test_cli_clean_run_exits_zero(tmp_path, tiny_model_dir):
    tree = write_tree(tmp_path / "tree", {"u0": {"original": CODE}})
    out = tmp_path / "traces.jsonl"
    code = main(
        ["--artifacts", str(tree), "--model", tiny_model_dir, "--out", str(out)]
    )
    assert code == 0
    assert out.is_file()


def test_cli_skips_exit_two_and_missing_tree_exits_one(tmp_path, tiny_model_dir):
    tree = write_tree(tmp_path / "tree", {"u0": {"original": "a"}})
    out = tmp_path / "traces.jsonl"
    args = ["--artifacts", str(tree), "--model", tiny_model_dir, "--out", str(out)]
    assert main(args) == 2
    missing = ["--artifacts", str(tmp_path / "nope"), "--model", tiny_model_dir, "--out", str(out)]
    assert main(missing) == 1
    assert main(["--bogus"]) == 1
