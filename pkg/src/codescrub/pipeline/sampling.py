"""Seeded unit sampling with size filters and optional stratification.

The population is every unit extracted from the manifest's files, filtered
down to units that parse and clear a minimum line count. Sampling is uniform
within the whole population, or proportional across strata when a metadata
key is given.
"""

from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass

from ..errors import PopulationTooSmall
from ..javasrc import java_parses
from ..pytree import parses
from ..sketch.manifest import CorpusManifest, read_documents
from ..units import CodeUnit, Granularity, Language, SourceFile, extract_units


@dataclass
class SampleConfig:
    n: int
    seed: int = 0
    min_loc: int = 4
    granularity: Granularity = Granularity.METHOD
    language: Language | None = None
    metadata_filters: dict | None = None
    strata_key: str | None = None


def sample_size(
    population: int | None = None, confidence: float = 0.95, margin: float = 0.05
) -> int:
    """Sample size for a proportion at the given confidence and margin.

    n = z^2 * 0.25 / e^2, with finite-population correction when a
    population size is supplied. 95%/5% over a large population gives 384.
    """
    if not 0 < confidence < 1:
        raise ValueError("confidence must be in (0, 1)")
    if not 0 < margin < 1:
        raise ValueError("margin must be in (0, 1)")
    z = statistics.NormalDist().inv_cdf((1 + confidence) / 2)
    n = z * z * 0.25 / (margin * margin)
    if population is not None:
        if population < 1:
            raise ValueError("population must be positive")
        n = n / (1 + (n - 1) / population)
    return max(1, round(n))


def allocate_proportional(sizes: dict[str, int], n: int) -> dict[str, int]:
    """Split n across strata proportionally, largest remainders first.

    Ties in remainder break by stratum label so the split is deterministic.
    """
    total = sum(sizes.values())
    if total <= 0:
        raise PopulationTooSmall("no units in any stratum")
    if n > total:
        raise PopulationTooSmall(f"requested {n} from a population of {total}")
    quotas = {label: n * size / total for label, size in sizes.items()}
    counts = {label: math.floor(q) for label, q in quotas.items()}
    leftover = n - sum(counts.values())
    by_remainder = sorted(
        quotas, key=lambda label: (counts[label] - quotas[label], label)
    )
    for label in by_remainder[:leftover]:
        counts[label] += 1
    return counts


def unit_is_eligible(unit: CodeUnit, min_loc: int = 4) -> bool:
    """Parse-valid and at least min_loc non-blank lines."""
    if unit.loc < min_loc:
        return False
    if unit.language is Language.PYTHON:
        return parses(unit.text)
    return java_parses(unit.text)


def population_from_manifest(
    manifest: CorpusManifest, config: SampleConfig
) -> tuple[list[CodeUnit], list[str]]:
    """Extract every candidate unit from the manifest's files.

    Unreadable or unparseable files are skipped with a warning; the caller
    decides whether an empty population is fatal.
    """
    docs, warnings = read_documents(manifest)
    population: list[CodeUnit] = []
    for entry, text in docs:
        if config.language and entry.language is not config.language:
            continue
        if config.metadata_filters:
            meta = entry.metadata
            if any(str(meta.get(k)) != str(v) for k, v in config.metadata_filters.items()):
                continue
        source = SourceFile(entry.path, entry.language, text, entry.metadata)
        try:
            units = extract_units(source, config.granularity)
        except Exception as exc:
            warnings.append(f"skipped {entry.path}: {exc}")
            continue
        if config.strata_key:
            label = str(entry.metadata.get(config.strata_key, ""))
            for unit in units:
                unit.stratum = label
        population.extend(units)
    return population, warnings


def sample_population(
    population: list[CodeUnit], config: SampleConfig
) -> list[CodeUnit]:
    """Seeded sample of eligible units, stratified when strata labels exist."""
    eligible = [u for u in population if unit_is_eligible(u, config.min_loc)]
    # Sort by id so the draw depends only on the seed and the population,
    # not on extraction order.
    eligible.sort(key=lambda u: u.id)
    if config.n > len(eligible):
        raise PopulationTooSmall(
            f"requested {config.n} units but only {len(eligible)} are eligible"
        )
    rng = random.Random(config.seed)
    if config.strata_key:
        strata: dict[str, list[CodeUnit]] = {}
        for unit in eligible:
            strata.setdefault(unit.stratum, []).append(unit)
        counts = allocate_proportional(
            {label: len(us) for label, us in strata.items()}, config.n
        )
        chosen: list[CodeUnit] = []
        for label in sorted(strata):
            chosen.extend(rng.sample(strata[label], counts[label]))
    else:
        chosen = rng.sample(eligible, config.n)
    chosen.sort(key=lambda u: u.id)
    return chosen


def sample_units(
    manifest: CorpusManifest, config: SampleConfig
) -> tuple[list[CodeUnit], list[str]]:
    population, warnings = population_from_manifest(manifest, config)
    return sample_population(population, config), warnings
