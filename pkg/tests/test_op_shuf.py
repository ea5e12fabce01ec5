import re

import pytest

from codescrub.errors import PreconditionError
from codescrub.ops.base import OperatorId, RefactorConfig, apply_operator
from codescrub.ops.shuf import shuffle_methods
from codescrub.pytree import parses
from codescrub.units import Granularity, unit_from_text

CLASS_SOURCE = (
    "class Stack:\n"
    "    def push(self, v):\n"
    "        self.items.append(v)\n"
    "\n"
    "    def pop(self):\n"
    "        return self.items.pop()\n"
    "\n"
    "    def peek(self):\n"
    "        return self.items[-1]\n"
    "\n"
    "    def size(self):\n"
    "        return len(self.items)\n"
)


def _method_order(text):
    return re.findall(r"def (\w+)\(", text)


def test_shuffle_permutes_method_order():
    shuffled, moved = shuffle_methods(CLASS_SOURCE, seed=1)
    assert moved > 0
    assert _method_order(shuffled) != _method_order(CLASS_SOURCE)
    assert sorted(_method_order(shuffled)) == sorted(_method_order(CLASS_SOURCE))
    assert parses(shuffled)


def test_shuffle_is_seed_deterministic():
    a, _ = shuffle_methods(CLASS_SOURCE, seed=5)
    b, _ = shuffle_methods(CLASS_SOURCE, seed=5)
    assert a == b


def test_different_seeds_reach_different_orders():
    orders = {tuple(_method_order(shuffle_methods(CLASS_SOURCE, seed=s)[0])) for s in range(8)}
    assert len(orders) > 1


def test_methods_keep_their_bodies():
    shuffled, _ = shuffle_methods(CLASS_SOURCE, seed=1)
    env_a, env_b = {}, {}
    exec(compile(CLASS_SOURCE, "<orig>", "exec"), env_a)
    exec(compile(shuffled, "<shuf>", "exec"), env_b)
    for cls_env in (env_a, env_b):
        stack = cls_env["Stack"]()
        stack.items = []
        stack.push(3)
        stack.push(7)
        assert stack.peek() == 7
        assert stack.size() == 2
        assert stack.pop() == 7


def test_class_docstring_and_attributes_stay_put():
    source = (
        "class Box:\n"
        '    """Holds one value."""\n'
        "    DEFAULT = 0\n"
        "\n"
        "    def get(self):\n"
        "        return self.v\n"
        "\n"
        "    def set(self, v):\n"
        "        self.v = v\n"
        "\n"
        "    def clear(self):\n"
        "        self.v = self.DEFAULT\n"
    )
    shuffled, _ = shuffle_methods(source, seed=1)
    lines = shuffled.splitlines()
    assert lines[1].strip() == '"""Holds one value."""'
    assert lines[2].strip() == "DEFAULT = 0"


def test_decorated_methods_travel_with_their_decorators():
    source = (
        "class Tools:\n"
        "    @staticmethod\n"
        "    def double(x):\n"
        "        return x * 2\n"
        "\n"
        "    def triple(self, x):\n"
        "        return x * 3\n"
        "\n"
        "    @classmethod\n"
        "    def make(cls):\n"
        "        return cls()\n"
    )
    shuffled, _ = shuffle_methods(source, seed=1)
    assert parses(shuffled)
    assert "@staticmethod\n    def double" in shuffled.replace("\n\n", "\n")
    env: dict = {}
    exec(compile(shuffled, "<shuf>", "exec"), env)
    assert env["Tools"].double(4) == 8
    assert env["Tools"]().triple(2) == 6


def test_single_method_class_rejected():
    source = "class One:\n    def only(self):\n        return 1\n"
    with pytest.raises(PreconditionError):
        shuffle_methods(source, seed=0)


def test_no_class_rejected():
    with pytest.raises(PreconditionError):
        shuffle_methods("def f():\n    return 1\n", seed=0)


def test_operator_wrapper_routes_by_granularity():
    unit = unit_from_text(CLASS_SOURCE, granularity=Granularity.CLASS)
    outcome = apply_operator(unit, OperatorId.SHUF, RefactorConfig(seed=1))
    assert outcome.applied
    assert sorted(_method_order(outcome.text)) == sorted(_method_order(CLASS_SOURCE))
