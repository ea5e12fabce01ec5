"""Sequential operator application with per-step rollback."""

from __future__ import annotations

import dataclasses

from ..errors import ConfigError, PreconditionError
from ..javasrc import java_parses
from ..pytree import parses
from ..units import CodeUnit, Language
from .base import OperatorId, OperatorOutcome, RefactorConfig, apply_operator, supported_operators


def _is_valid(text: str, language: Language) -> bool:
    return parses(text) if language is Language.PYTHON else java_parses(text)


def apply_chain(
    unit: CodeUnit,
    ops: list[OperatorId],
    config: RefactorConfig | None = None,
    superclass_units: list[CodeUnit] | None = None,
) -> list[OperatorOutcome]:
    """Apply operators in order, each consuming the previous output.

    An operator whose output no longer parses is rolled back and flagged;
    inapplicable operators (failed preconditions) become no-op outcomes.
    """
    config = config or RefactorConfig()
    if OperatorId.NORM in ops and ops[0] is not OperatorId.NORM:
        raise ConfigError("NORM must come first in an operator chain")
    unsupported = [op for op in ops if op not in supported_operators(unit.language)]
    if unsupported:
        from ..errors import UnsupportedOperator

        raise UnsupportedOperator(
            f"{unsupported[0].value} is not available for {unit.language.value}"
        )
    outcomes: list[OperatorOutcome] = []
    current = unit
    for op in ops:
        try:
            outcome = apply_operator(current, op, config, superclass_units)
        except PreconditionError as exc:
            outcome = OperatorOutcome.unchanged(op, current.text, f"precondition: {exc}")
        if outcome.applied and not _is_valid(outcome.text, unit.language):
            outcome = OperatorOutcome(
                op,
                False,
                0,
                current.text,
                outcome.notes + ["rolled back: output failed to re-parse"],
            )
        outcomes.append(outcome)
        if outcome.applied:
            current = dataclasses.replace(current, text=outcome.text)
    return outcomes
