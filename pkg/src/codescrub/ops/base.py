"""Operator identities, configuration, outcomes, and dispatch."""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from enum import Enum

from ..errors import ConfigError, UnsupportedOperator
from ..units import CodeUnit, Language


class OperatorId(Enum):
    IFF = "IFF"
    LOOP = "LOOP"
    ITER = "ITER"
    COMM = "COMM"
    SHUF = "SHUF"
    DECO = "DECO"
    PARAM = "PARAM"
    INHR = "INHR"
    RENM = "RENM"
    NORM = "NORM"
    STYL = "STYL"

    @classmethod
    def parse(cls, name: str) -> "OperatorId":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ConfigError(f"unknown operator {name!r}") from None


PYTHON_OPERATORS = frozenset(OperatorId)
JAVA_OPERATORS = frozenset(
    {OperatorId.IFF, OperatorId.LOOP, OperatorId.RENM, OperatorId.NORM}
)


def supported_operators(language: Language) -> frozenset:
    return PYTHON_OPERATORS if language is Language.PYTHON else JAVA_OPERATORS


@dataclass
class RefactorConfig:
    seed: int = 0
    max_renames: int = 3
    max_inherited_methods: int = 3
    synonym_lexicon_path: str | None = None  # None -> packaged default table
    operator_order: list[OperatorId] = field(default_factory=list)
    rename_function_names: bool = False

    def __post_init__(self):
        if self.max_renames < 0:
            raise ConfigError("max_renames must be >= 0")
        if self.max_inherited_methods < 0:
            raise ConfigError("max_inherited_methods must be >= 0")
        if (
            self.operator_order
            and OperatorId.NORM in self.operator_order
            and self.operator_order[0] is not OperatorId.NORM
        ):
            raise ConfigError("operator_order must begin with NORM when NORM is chained")


@dataclass
class OperatorOutcome:
    operator: OperatorId
    applied: bool
    sites: int
    text: str
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.applied != (self.sites > 0):
            raise ValueError("applied must hold exactly when sites > 0")

    @classmethod
    def unchanged(cls, operator: OperatorId, text: str, note: str | None = None):
        return cls(operator, False, 0, text, [note] if note else [])


def derive_seed(seed: int, *labels: str) -> int:
    """Stable per-(unit, operator) seed so batch order never matters."""
    h = hashlib.sha256(str(seed).encode())
    for label in labels:
        h.update(b"\x00")
        h.update(label.encode("utf-8"))
    return int.from_bytes(h.digest()[:8], "little")


def rng_for(seed: int, *labels: str) -> random.Random:
    return random.Random(derive_seed(seed, *labels))


def apply_operator(
    unit: CodeUnit,
    operator: OperatorId,
    config: RefactorConfig | None = None,
    superclass_units: list[CodeUnit] | None = None,
) -> OperatorOutcome:
    """Apply one operator to one unit, routing by language."""
    config = config or RefactorConfig()
    if operator not in supported_operators(unit.language):
        raise UnsupportedOperator(
            f"{operator.value} is not available for {unit.language.value}"
        )
    if unit.language is Language.JAVA:
        from . import java_ops

        return java_ops.apply(unit, operator, config)
    seed = derive_seed(config.seed, unit.id, operator.value)
    if operator is OperatorId.IFF:
        from .iff import apply_iff

        return apply_iff(unit)
    if operator is OperatorId.LOOP:
        from .loop import apply_loop

        return apply_loop(unit)
    if operator is OperatorId.ITER:
        from .iter import apply_iter

        return apply_iter(unit)
    if operator is OperatorId.COMM:
        from .comm import apply_comm

        return apply_comm(unit, seed)
    if operator is OperatorId.SHUF:
        from .shuf import apply_shuf

        return apply_shuf(unit, seed)
    if operator is OperatorId.DECO:
        from .deco import apply_deco

        return apply_deco(unit)
    if operator is OperatorId.PARAM:
        from .param import apply_param

        return apply_param(unit)
    if operator is OperatorId.INHR:
        from .inhr import apply_inhr

        return apply_inhr(unit, superclass_units or [], seed, config)
    if operator is OperatorId.RENM:
        from .lexicon import load_lexicon
        from .renm import apply_renm

        lexicon = load_lexicon(config.synonym_lexicon_path)
        return apply_renm(unit, lexicon, seed, config)
    if operator is OperatorId.NORM:
        from .norm import apply_norm

        return apply_norm(unit)
    if operator is OperatorId.STYL:
        from .styl import apply_styl

        return apply_styl(unit)
    raise ConfigError(f"no implementation for {operator}")
