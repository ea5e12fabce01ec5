from .base import (
    JAVA_OPERATORS,
    PYTHON_OPERATORS,
    OperatorId,
    OperatorOutcome,
    RefactorConfig,
    apply_operator,
    supported_operators,
)
from .chain import apply_chain

__all__ = [
    "OperatorId",
    "OperatorOutcome",
    "RefactorConfig",
    "JAVA_OPERATORS",
    "PYTHON_OPERATORS",
    "apply_operator",
    "apply_chain",
    "supported_operators",
]
