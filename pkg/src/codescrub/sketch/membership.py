"""N-gram membership index over a normalized corpus.

Two storage modes share one interface: a k-hash bit-array filter for large
corpora, and an exact gram set for desk-scale corpora where oracle-equal
overlap answers are wanted. Neither mode ever returns a false negative.

File layout (version 1, little-endian):
    magic "NGSK" | version u16 | gram_width u16 | hash_count u8 (0 = exact)
    | bit_count u64 (exact: payload byte length) | inserted_grams u64
    | params_digest 16 bytes | payload | crc32 u32
Payload is the raw bit array, or newline-joined sorted grams in exact mode
(grams never contain whitespace, so newline is a safe separator).
"""

from __future__ import annotations

import hashlib
import math
import mmap
import struct
import zlib
from pathlib import Path
from typing import Iterable

from ..errors import LengthError, ParamMismatch, VersionMismatch
from .normalize import normalize

MAGIC = b"NGSK"
VERSION = 1
_HEADER = struct.Struct("<4sHHBQQ16s")

DEFAULT_GRAM_WIDTH = 50
DEFAULT_TARGET_FP = 1e-6


def _digest(gram_width: int, hash_count: int, bit_count: int, exact: bool) -> bytes:
    tag = "exact" if exact else f"blake2b:k={hash_count}:m={bit_count}"
    raw = f"NGSK:v{VERSION}:gram={gram_width}:{tag}".encode()
    return hashlib.blake2b(raw, digest_size=16).digest()


def _gram_hashes(gram: str, hash_count: int, bit_count: int):
    h = hashlib.blake2b(gram.encode("utf-8"), digest_size=16).digest()
    h1 = int.from_bytes(h[:8], "little")
    h2 = int.from_bytes(h[8:], "little") | 1
    mask = bit_count - 1
    for i in range(hash_count):
        yield (h1 + i * h2) & mask


class NgramSketch:
    def __init__(
        self,
        gram_width: int = DEFAULT_GRAM_WIDTH,
        bit_count: int = 8,
        hash_count: int = 1,
        exact: bool = False,
        _bits=None,
        _grams: set | None = None,
        inserted_grams: int = 0,
    ):
        if not exact and (bit_count <= 0 or bit_count & (bit_count - 1)):
            raise ValueError("bit_count must be a power of two")
        self.gram_width = gram_width
        self.exact = exact
        self.hash_count = 0 if exact else hash_count
        self.bit_count = 0 if exact else bit_count
        self.inserted_grams = inserted_grams
        self.grams = (_grams if _grams is not None else set()) if exact else None
        self.bits = None if exact else (_bits if _bits is not None else bytearray(bit_count // 8))
        self.params_digest = _digest(gram_width, self.hash_count, self.bit_count, exact)

    # -- insertion -----------------------------------------------------------

    def add(self, gram: str) -> None:
        if len(gram) != self.gram_width:
            raise LengthError(f"gram length {len(gram)} != width {self.gram_width}")
        if self.exact:
            self.grams.add(gram)
        else:
            for pos in _gram_hashes(gram, self.hash_count, self.bit_count):
                self.bits[pos >> 3] |= 1 << (pos & 7)
        self.inserted_grams += 1

    def add_document(self, text: str) -> int:
        """Insert every stride-1 window of the normalized text; returns count."""
        chars = normalize(text).chars
        w = self.gram_width
        count = 0
        for i in range(len(chars) - w + 1):
            self.add(chars[i : i + w])
            count += 1
        return count

    # -- queries ---------------------------------------------------------------

    def contains(self, gram: str) -> bool:
        if len(gram) != self.gram_width:
            raise LengthError(f"gram length {len(gram)} != width {self.gram_width}")
        if self.exact:
            return gram in self.grams
        for pos in _gram_hashes(gram, self.hash_count, self.bit_count):
            if not (self.bits[pos >> 3] >> (pos & 7)) & 1:
                return False
        return True

    @property
    def estimated_fp(self) -> float:
        if self.exact or self.bit_count == 0:
            return 0.0
        load = 1.0 - math.exp(-self.hash_count * self.inserted_grams / self.bit_count)
        return load**self.hash_count

    # -- merge -------------------------------------------------------------------

    def merge(self, other: "NgramSketch") -> "NgramSketch":
        if self.params_digest != other.params_digest:
            raise ParamMismatch("sketches built with different parameters")
        inserted = self.inserted_grams + other.inserted_grams
        if self.exact:
            return NgramSketch(
                self.gram_width,
                exact=True,
                _grams=set(self.grams) | other.grams,
                inserted_grams=inserted,
            )
        merged = bytearray(len(self.bits))
        for i, (a, b) in enumerate(zip(self.bits, other.bits)):
            merged[i] = a | b
        return NgramSketch(
            self.gram_width,
            bit_count=self.bit_count,
            hash_count=self.hash_count,
            _bits=merged,
            inserted_grams=inserted,
        )

    # -- persistence ---------------------------------------------------------------

    def save(self, path: str | Path) -> None:
        if self.exact:
            payload = "\n".join(sorted(self.grams)).encode("utf-8")
            size_field = len(payload)
        else:
            payload = bytes(self.bits)
            size_field = self.bit_count
        header = _HEADER.pack(
            MAGIC,
            VERSION,
            self.gram_width,
            self.hash_count,
            size_field,
            self.inserted_grams,
            self.params_digest,
        )
        crc = zlib.crc32(payload, zlib.crc32(header))
        Path(path).write_bytes(header + payload + struct.pack("<I", crc))

    @classmethod
    def load(cls, path: str | Path, use_mmap: bool = False) -> "NgramSketch":
        if use_mmap:
            f = open(path, "rb")
            buf = mmap.mmap(f.fileno(), 0, access=mmap.ACCESS_READ)
        else:
            buf = Path(path).read_bytes()
        if len(buf) < _HEADER.size + 4:
            raise VersionMismatch("file too short to be a sketch")
        magic, version, gram_width, hash_count, size_field, inserted, digest = _HEADER.unpack(
            buf[: _HEADER.size]
        )
        if magic != MAGIC:
            raise VersionMismatch("bad magic")
        if version != VERSION:
            raise VersionMismatch(f"unsupported sketch version {version}")
        exact = hash_count == 0
        payload_len = size_field if exact else size_field // 8
        expected_len = _HEADER.size + payload_len + 4
        if len(buf) != expected_len:
            raise VersionMismatch(f"size mismatch: {len(buf)} bytes, expected {expected_len}")
        body = memoryview(buf)[: _HEADER.size + payload_len]
        (stored_crc,) = struct.unpack("<I", buf[_HEADER.size + payload_len :])
        if zlib.crc32(body) != stored_crc:
            raise VersionMismatch("checksum mismatch: file corrupt or truncated")
        payload = memoryview(buf)[_HEADER.size : _HEADER.size + payload_len]
        if exact:
            text = bytes(payload).decode("utf-8")
            grams = set(text.split("\n")) if text else set()
            sketch = cls(gram_width, exact=True, _grams=grams, inserted_grams=inserted)
        else:
            bits = payload if use_mmap else bytearray(payload)
            sketch = cls(
                gram_width,
                bit_count=size_field,
                hash_count=hash_count,
                _bits=bits,
                inserted_grams=inserted,
            )
        if sketch.params_digest != digest:
            raise VersionMismatch("parameter digest mismatch")
        return sketch


def _filter_geometry(n_grams: int, target_fp: float) -> tuple[int, int]:
    """Size a filter: smallest power-of-two bit count meeting the fp target."""
    n = max(1, n_grams)
    ideal_m = -n * math.log(target_fp) / (math.log(2) ** 2)
    m = 8
    while m < ideal_m:
        m *= 2
    k = max(1, round(m / n * math.log(2)))
    return m, k


def build_sketch(
    texts: Iterable[str],
    gram_width: int = DEFAULT_GRAM_WIDTH,
    target_fp: float = DEFAULT_TARGET_FP,
    exact: bool = False,
) -> NgramSketch:
    """Insert every stride-1 normalized window of every document."""
    if not 0 < target_fp < 0.5:
        raise ValueError("target_fp must be in (0, 0.5)")
    docs = [normalize(t).chars for t in texts]
    if exact:
        sketch = NgramSketch(gram_width, exact=True)
    else:
        n = sum(max(0, len(d) - gram_width + 1) for d in docs)
        m, k = _filter_geometry(n, target_fp)
        sketch = NgramSketch(gram_width, bit_count=m, hash_count=k)
    for chars in docs:
        for i in range(len(chars) - gram_width + 1):
            sketch.add(chars[i : i + gram_width])
    return sketch
