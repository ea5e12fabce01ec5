from .sampling import SampleConfig, allocate_proportional, sample_size, sample_units
from .runner import run_evaluation, run_refactor

__all__ = [
    "SampleConfig",
    "allocate_proportional",
    "run_evaluation",
    "run_refactor",
    "sample_size",
    "sample_units",
]
