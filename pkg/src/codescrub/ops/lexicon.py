"""Offline synonym lexicon backing the identifier renaming operator.

The lexicon is a UTF-8 TSV file with one entry per line::

    word<TAB>syn1,syn2,...

Words and synonyms are lowercase single words; synonyms are listed in
preference order. A curated default table ships with the package and is
used whenever no explicit path is configured.
"""

from __future__ import annotations

import functools
import importlib.resources
import re
from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigError

# Entries must splice into identifiers: one lowercase word, no separators.
_WORD_RE = re.compile(r"[a-z][a-z0-9]*\Z")


@dataclass(frozen=True)
class SynonymLexicon:
    """Read-only mapping from a word to its ranked synonyms."""

    entries: dict[str, tuple[str, ...]]

    def synonyms(self, word: str) -> tuple[str, ...]:
        """Ranked synonyms for ``word`` (case-insensitive), or () if absent."""
        return self.entries.get(word.lower(), ())

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def parse_lexicon(text: str, source: str = "<string>") -> SynonymLexicon:
    """Parse TSV lexicon text, validating every entry.

    Blank lines are ignored. Anything else must be
    ``word<TAB>syn1,syn2,...`` with lowercase identifier-safe words;
    violations raise ConfigError naming the offending line.
    """
    entries: dict[str, tuple[str, ...]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        word, sep, rest = line.partition("\t")
        if not sep:
            raise ConfigError(f"{source}:{lineno}: expected word<TAB>synonyms")
        if not _WORD_RE.match(word):
            raise ConfigError(f"{source}:{lineno}: bad word {word!r}")
        synonyms = tuple(s.strip() for s in rest.split(","))
        if not synonyms or any(not _WORD_RE.match(s) for s in synonyms):
            raise ConfigError(f"{source}:{lineno}: bad synonym list {rest!r}")
        if word in entries:
            raise ConfigError(f"{source}:{lineno}: duplicate entry {word!r}")
        entries[word] = synonyms
    return SynonymLexicon(entries)


@functools.lru_cache(maxsize=8)
def load_lexicon(path: str | Path | None = None) -> SynonymLexicon:
    """Load a lexicon from ``path``, or the packaged default when None.

    Results are cached so batch runs share one read-only table.
    """
    if path is None:
        resource = importlib.resources.files("codescrub").joinpath(
            "data/synonyms.tsv"
        )
        return parse_lexicon(resource.read_text(encoding="utf-8"), "synonyms.tsv")
    file = Path(path)
    try:
        text = file.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read lexicon {file}: {exc}") from exc
    return parse_lexicon(text, str(file))
