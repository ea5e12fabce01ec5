"""Shared fixtures: a tiny local causal LM and a hand-written artifact tree.

The model is built in-process (byte-level tokenizer, two-layer GPT-2 with
seeded random weights) and saved to disk, so tests exercise the same
from_pretrained loading path as a published checkpoint without any download.
"""

import json

import pytest
import torch
from tokenizers import Tokenizer, decoders, models, pre_tokenizers
from transformers import GPT2Config, GPT2LMHeadModel, PreTrainedTokenizerFast


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    path = tmp_path_factory.mktemp("tinylm")
    alphabet = sorted(pre_tokenizers.ByteLevel.alphabet())
    vocab = {ch: i for i, ch in enumerate(alphabet)}
    vocab["<|endoftext|>"] = len(vocab)
    inner = Tokenizer(models.BPE(vocab=vocab, merges=[]))
    inner.pre_tokenizer = pre_tokenizers.ByteLevel(add_prefix_space=False)
    inner.decoder = decoders.ByteLevel()
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=inner, eos_token="<|endoftext|>", pad_token="<|endoftext|>"
    )

    torch.manual_seed(0)
    config = GPT2Config(
        vocab_size=len(vocab),
        n_positions=2048,
        n_embd=32,
        n_layer=2,
        n_head=2,
        bos_token_id=vocab["<|endoftext|>"],
        eos_token_id=vocab["<|endoftext|>"],
    )
    GPT2LMHeadModel(config).save_pretrained(path)
    tokenizer.save_pretrained(path)
    return str(path)


def write_tree(root, units):
    """Lay out run.json plus <unit>/<variant>/code.txt for the given texts.

    units maps unit_id -> {variant_name: code_text}.
    """
    root.mkdir(parents=True, exist_ok=True)
    run = {
        "seed": 0,
        "chains": [],
        "unit_ids": sorted(units),
        "failures": [],
        "tool_version": "test",
    }
    (root / "run.json").write_text(json.dumps(run, indent=2, sort_keys=True))
    for unit_id, variants in units.items():
        for variant, text in variants.items():
            vdir = root / unit_id / variant
            vdir.mkdir(parents=True)
            (vdir / "code.txt").write_text(text)
    return root
