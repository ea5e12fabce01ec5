"""Corpus manifests: the file lists that sketches and samples are built from.

A manifest is a JSON file naming source files with a language and free-form
metadata each. Relative paths resolve against the manifest's own directory,
so a corpus checkout can move without rewriting the manifest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigError
from ..units import Language
from .membership import DEFAULT_GRAM_WIDTH, DEFAULT_TARGET_FP, NgramSketch, build_sketch


@dataclass
class ManifestEntry:
    path: str
    language: Language
    metadata: dict = field(default_factory=dict)


@dataclass
class CorpusManifest:
    entries: list[ManifestEntry]
    total_bytes: int = 0
    base_dir: str = ""

    def resolve(self, entry: ManifestEntry) -> Path:
        p = Path(entry.path)
        if p.is_absolute() or not self.base_dir:
            return p
        return Path(self.base_dir) / p


def load_manifest(path: str | Path) -> CorpusManifest:
    """Parse a manifest file; duplicate paths and unknown languages are fatal."""
    p = Path(path)
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read manifest {p}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"manifest {p} is not valid JSON: {exc}") from exc
    if isinstance(raw, dict):
        items = raw.get("entries", [])
    elif isinstance(raw, list):
        items = raw
    else:
        raise ConfigError(f"manifest {p}: expected an object or a list")
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    for i, item in enumerate(items):
        if not isinstance(item, dict) or "path" not in item:
            raise ConfigError(f"manifest {p} entry {i}: needs a 'path' field")
        epath = str(item["path"])
        if epath in seen:
            raise ConfigError(f"manifest {p}: duplicate path {epath!r}")
        seen.add(epath)
        lang_raw = item.get("language")
        try:
            lang = Language(lang_raw) if lang_raw else Language.from_path(epath)
        except ValueError as exc:
            raise ConfigError(f"manifest {p} entry {epath!r}: {exc}") from exc
        meta = item.get("metadata") or {}
        if not isinstance(meta, dict):
            raise ConfigError(f"manifest {p} entry {epath!r}: metadata must be an object")
        entries.append(ManifestEntry(epath, lang, meta))
    manifest = CorpusManifest(entries=entries, base_dir=str(p.parent))
    manifest.total_bytes = sum(
        manifest.resolve(e).stat().st_size
        for e in entries
        if manifest.resolve(e).is_file()
    )
    return manifest


def read_documents(
    manifest: CorpusManifest,
) -> tuple[list[tuple[ManifestEntry, str]], list[str]]:
    """Read every manifest file; unreadable ones are skipped with a warning."""
    docs: list[tuple[ManifestEntry, str]] = []
    warnings: list[str] = []
    for entry in manifest.entries:
        target = manifest.resolve(entry)
        try:
            docs.append((entry, target.read_text(encoding="utf-8")))
        except (OSError, UnicodeDecodeError) as exc:
            warnings.append(f"skipped {entry.path}: {exc}")
    return docs, warnings


def build_from_manifest(
    manifest: CorpusManifest,
    gram_width: int = DEFAULT_GRAM_WIDTH,
    target_fp: float = DEFAULT_TARGET_FP,
    exact: bool = False,
) -> tuple[NgramSketch, list[str]]:
    docs, warnings = read_documents(manifest)
    sketch = build_sketch(
        (text for _, text in docs), gram_width=gram_width, target_fp=target_fp, exact=exact
    )
    return sketch, warnings
