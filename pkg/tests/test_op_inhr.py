import re

import pytest

from codescrub.errors import PreconditionError
from codescrub.ops.base import RefactorConfig
from codescrub.ops.inhr import apply_inhr
from codescrub.pytree import parses
from codescrub.units import Granularity, unit_from_text


def _class_unit(text, unit_id):
    return unit_from_text(text, granularity=Granularity.CLASS, unit_id=unit_id)


ANIMAL = _class_unit(
    "class Animal:\n"
    "    def __init__(self):\n"
    "        self.alive = True\n"
    "\n"
    "    def breathe(self):\n"
    "        return 'air'\n"
    "\n"
    "    def move(self):\n"
    "        return 'walk'\n",
    "animal",
)

BIRD = _class_unit(
    "class Bird(Animal):\n"
    "    def move(self):\n"
    "        return 'fly'\n"
    "\n"
    "    def sing(self):\n"
    "        return 'tweet'\n",
    "bird",
)

SPARROW = _class_unit(
    "class Sparrow(Bird):\n"
    "    def color(self):\n"
    "        return 'brown'\n"
    "\n"
    "    def nest(self):\n"
    "        return 'tree'\n",
    "sparrow",
)


def _methods(text):
    return re.findall(r"def (\w+)\(", text)


def _instance(text, class_name):
    env: dict = {}
    exec(compile(text, "<inhr>", "exec"), env)
    return env[class_name]()


def test_closest_ancestor_wins_the_name():
    outcome = apply_inhr(SPARROW, [ANIMAL, BIRD], seed=0, config=RefactorConfig())
    assert outcome.applied
    full = ANIMAL.text + "\n" + BIRD.text + "\n" + outcome.text
    sparrow = _instance(full, "Sparrow")
    # Bird.move shadows Animal.move on the path.
    assert sparrow.move() == "fly"
    assert sparrow.breathe() == "air"
    assert sparrow.sing() == "tweet"
    assert sparrow.color() == "brown"


def test_init_never_copied():
    outcome = apply_inhr(SPARROW, [ANIMAL, BIRD], seed=0, config=RefactorConfig())
    assert "__init__" not in outcome.text
    assert any("skipped Animal.__init__" in n for n in outcome.notes)


def test_abstract_methods_never_copied():
    shape = _class_unit(
        "class Shape:\n"
        "    @abstractmethod\n"
        "    def area(self):\n"
        "        ...\n"
        "\n"
        "    def describe(self):\n"
        "        return 'shape'\n",
        "shape",
    )
    square = _class_unit(
        "class Square(Shape):\n"
        "    def side(self):\n"
        "        return 2\n"
        "\n"
        "    def corners(self):\n"
        "        return 4\n",
        "square",
    )
    outcome = apply_inhr(square, [shape], seed=0, config=RefactorConfig())
    assert "area" not in outcome.text
    assert "describe" in outcome.text
    assert any("skipped Shape.area" in n for n in outcome.notes)


def test_cap_limits_copied_methods():
    outcome = apply_inhr(
        SPARROW, [ANIMAL, BIRD], seed=0, config=RefactorConfig(max_inherited_methods=1)
    )
    assert outcome.sites == 1
    inherited = set(_methods(outcome.text)) - {"color", "nest"}
    assert len(inherited) == 1


def test_cap_sample_is_seeded():
    config = RefactorConfig(max_inherited_methods=1)
    a = apply_inhr(SPARROW, [ANIMAL, BIRD], seed=3, config=config)
    b = apply_inhr(SPARROW, [ANIMAL, BIRD], seed=3, config=config)
    assert a.text == b.text
    picks = {
        tuple(sorted(set(_methods(apply_inhr(SPARROW, [ANIMAL, BIRD], seed=s, config=config).text))))
        for s in range(8)
    }
    assert len(picks) > 1


def test_own_methods_never_duplicated():
    outcome = apply_inhr(SPARROW, [ANIMAL, BIRD], seed=0, config=RefactorConfig())
    names = _methods(outcome.text)
    assert sorted(names) == sorted(set(names))


def test_shuffle_follows_the_append():
    outcome = apply_inhr(SPARROW, [ANIMAL, BIRD], seed=0, config=RefactorConfig())
    # Plain appending would leave the unit's own methods first.
    orders = set()
    for seed in range(6):
        text = apply_inhr(SPARROW, [ANIMAL, BIRD], seed=seed, config=RefactorConfig()).text
        orders.add(tuple(_methods(text)))
    assert len(orders) > 1
    assert parses(outcome.text)


def test_unresolvable_superclass_rejected():
    orphan = _class_unit(
        "class Lone(Mystery):\n    def a(self):\n        return 1\n\n    def b(self):\n        return 2\n",
        "lone",
    )
    with pytest.raises(PreconditionError):
        apply_inhr(orphan, [ANIMAL], seed=0, config=RefactorConfig())


def test_fully_overridden_parent_is_a_no_op():
    parent = _class_unit(
        "class Base:\n    def work(self):\n        return 'base'\n",
        "base",
    )
    child = _class_unit(
        "class Kid(Base):\n"
        "    def work(self):\n"
        "        return 'kid'\n"
        "\n"
        "    def play(self):\n"
        "        return 'fun'\n",
        "kid",
    )
    outcome = apply_inhr(child, [parent], seed=0, config=RefactorConfig())
    assert not outcome.applied
    assert any("no inheritable methods" in n for n in outcome.notes)


def test_no_class_in_unit_rejected():
    plain = unit_from_text("def f():\n    return 1\n", granularity=Granularity.CLASS)
    with pytest.raises(PreconditionError):
        apply_inhr(plain, [ANIMAL], seed=0, config=RefactorConfig())
