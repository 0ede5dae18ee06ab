"""Versioned binary export format for created voices (".evvf").

Layout, all little-endian:

    offset        size  field
    0             4     magic "EVVF"
    4             4     u32 version (currently 1)
    8             4     u32 k (coefficient count)
    12            4     u32 generations
    16            8     u64 rng seed
    24            8     i64 created_at, unix epoch milliseconds UTC
    32            2     u16 backend hint length L
    34            L     backend hint, UTF-8
    34+L          2048  256 x f64 embedding
    34+L+2048     8k    k x f64 coefficients
    trailer       4     u32 CRC32 of all preceding bytes

The embedding is authoritative for consumers; the coefficients are carried
redundantly for auditability and always reconstruct the embedding through the
owning PCA model to within 1e-9 per element.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, IntegrityError, ValidationError
from .pca import EMBEDDING_DIM, PcaModel, as_coefficients, as_embedding, inverse

MAGIC = b"EVVF"
VERSION = 1
_FIXED_HEAD = struct.Struct("<4sIIIQqH")
_MAX_HINT_BYTES = 0xFFFF
EXPORT_CONSISTENCY_TOL = 1e-9


@dataclass(frozen=True)
class VoiceFile:
    embedding: np.ndarray
    pca_coeffs: np.ndarray
    generations: int
    rng_seed: int
    created_at_ms: int
    backend_hint: str
    version: int = VERSION

    def __post_init__(self):
        object.__setattr__(self, "embedding", as_embedding(self.embedding))
        coeffs = np.asarray(self.pca_coeffs, dtype=np.float64)
        object.__setattr__(self, "pca_coeffs", as_coefficients(coeffs, coeffs.shape[0]))
        if self.generations < 0:
            raise ValidationError("generations must be nonnegative")
        if not 0 <= self.rng_seed < 2**64:
            raise ValidationError("rng_seed must be a 64-bit unsigned integer")
        if len(self.backend_hint.encode("utf-8")) > _MAX_HINT_BYTES:
            raise ValidationError("backend_hint too long")
        if self.version != VERSION:
            raise ValidationError(f"unsupported version {self.version}")


def check_export_consistency(vf: VoiceFile, model: PcaModel) -> None:
    """Raise unless the stored embedding matches the coefficient reconstruction."""
    recon = inverse(model, vf.pca_coeffs)
    err = float(np.max(np.abs(recon - vf.embedding)))
    if err > EXPORT_CONSISTENCY_TOL:
        raise ValidationError(
            f"embedding disagrees with coefficient reconstruction by {err:.3e}"
        )


def encode_voicefile(vf: VoiceFile) -> bytes:
    hint = vf.backend_hint.encode("utf-8")
    head = _FIXED_HEAD.pack(
        MAGIC,
        vf.version,
        vf.pca_coeffs.shape[0],
        vf.generations,
        vf.rng_seed,
        vf.created_at_ms,
        len(hint),
    )
    body = (
        head
        + hint
        + vf.embedding.astype("<f8").tobytes()
        + vf.pca_coeffs.astype("<f8").tobytes()
    )
    return body + struct.pack("<I", zlib.crc32(body))


def decode_voicefile(payload: bytes) -> VoiceFile:
    if len(payload) < _FIXED_HEAD.size:
        raise FormatError("truncated header", offset=len(payload))
    magic, version, k, generations, rng_seed, created_at_ms, hint_len = (
        _FIXED_HEAD.unpack_from(payload)
    )
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}", offset=0)
    if version != VERSION:
        raise FormatError(f"unknown version {version}", offset=4)
    if not 1 <= k <= EMBEDDING_DIM:
        raise FormatError(f"implausible coefficient count {k}", offset=8)
    expected = _FIXED_HEAD.size + hint_len + 8 * EMBEDDING_DIM + 8 * k + 4
    if len(payload) != expected:
        raise FormatError(
            f"payload is {len(payload)} bytes, layout requires {expected}",
            offset=min(len(payload), expected),
        )
    checksum_offset = expected - 4
    (stored_crc,) = struct.unpack_from("<I", payload, checksum_offset)
    actual_crc = zlib.crc32(payload[:checksum_offset])
    if stored_crc != actual_crc:
        raise IntegrityError(
            f"checksum mismatch: stored {stored_crc:#010x}, computed {actual_crc:#010x}",
            offset=checksum_offset,
        )
    pos = _FIXED_HEAD.size
    try:
        hint = payload[pos : pos + hint_len].decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"backend hint is not valid UTF-8: {exc}", offset=pos) from exc
    pos += hint_len
    embedding = np.frombuffer(payload, dtype="<f8", count=EMBEDDING_DIM, offset=pos)
    pos += 8 * EMBEDDING_DIM
    coeffs = np.frombuffer(payload, dtype="<f8", count=k, offset=pos)
    if not np.all(np.isfinite(embedding)):
        raise FormatError("embedding region contains non-finite values", offset=pos - 8 * EMBEDDING_DIM)
    if not np.all(np.isfinite(coeffs)):
        raise FormatError("coefficient region contains non-finite values", offset=pos)
    return VoiceFile(
        embedding=embedding.copy(),
        pca_coeffs=coeffs.copy(),
        generations=generations,
        rng_seed=rng_seed,
        created_at_ms=created_at_ms,
        backend_hint=hint,
    )
