from .manifest import CorpusManifest, ManifestEntry, build_from_manifest, load_manifest
from .membership import NgramSketch, build_sketch
from .normalize import NormalizedText, normalize

__all__ = [
    "CorpusManifest",
    "ManifestEntry",
    "NgramSketch",
    "NormalizedText",
    "build_from_manifest",
    "build_sketch",
    "load_manifest",
    "normalize",
]
