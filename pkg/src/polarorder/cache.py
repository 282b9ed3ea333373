"""On-disk formats and a small cache for PO matrices and rankings.

PO matrix file layout (all big-endian)::

    b"PORP" | u8 version | u8 n | rows i = 2..N | u32 crc32(rows)

Row ``i`` carries the ``i - 1`` entries ``rel(i, 1) .. rel(i, i - 1)``, three
bits each (two value bits, then one source bit), most significant bit first,
zero padded to a byte boundary.  Value bits are ``00`` unknown, ``01`` higher
index better, ``10`` higher index worse; the source bit is 1 for DR.
"""

import os
import struct
import tempfile
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError
from .partial_order import RelationMatrix, po_relation_matrix
from .reliability import (
    RANKING_FORMAT_VERSION,
    evaluator_id,
    export_ranking,
    import_ranking,
    rank_channels,
)

MAGIC = b"PORP"
MATRIX_FORMAT_VERSION = 1
CACHE_ENV = "POLARORDER_CACHE"


def _row_bytes(r):
    return (3 * r + 7) // 8


def dump_matrix(R):
    """Serialize a :class:`RelationMatrix` to bytes."""
    values = R.values()
    sources = R.sources()
    triples = np.stack([(values >> 1) & 1, values & 1, sources], axis=1).astype(np.uint8)
    chunks = []
    start = 0
    for r in range(1, R.N):
        chunks.append(np.packbits(triples[start : start + r].ravel()).tobytes())
        start += r
    payload = b"".join(chunks)
    header = MAGIC + struct.pack(">BB", MATRIX_FORMAT_VERSION, R.n)
    return header + payload + struct.pack(">I", zlib.crc32(payload))


def load_matrix(data):
    """Parse bytes produced by :func:`dump_matrix`, checking magic, version and CRC."""
    data = bytes(data)
    if len(data) < 10 or data[:4] != MAGIC:
        raise FormatError("not a PO matrix file (bad magic)")
    version, n = struct.unpack(">BB", data[4:6])
    if version != MATRIX_FORMAT_VERSION:
        raise FormatError(f"unsupported matrix format version {version}")
    if n < 1:
        raise FormatError(f"bad block-length exponent {n}")
    N = 1 << n
    expected = sum(_row_bytes(r) for r in range(1, N))
    payload = data[6:-4]
    if len(payload) != expected:
        raise FormatError(f"payload has {len(payload)} bytes, expected {expected}")
    (crc,) = struct.unpack(">I", data[-4:])
    if zlib.crc32(payload) != crc:
        raise FormatError("checksum mismatch")
    raw = np.frombuffer(payload, dtype=np.uint8)
    parts = []
    pos = 0
    for r in range(1, N):
        nb = _row_bytes(r)
        bits = np.unpackbits(raw[pos : pos + nb])
        if bits[3 * r :].any():
            raise FormatError(f"non-zero padding in row {r + 1}")
        parts.append(bits[: 3 * r])
        pos += nb
    triples = np.concatenate(parts).reshape(-1, 3) if parts else np.zeros((0, 3), np.uint8)
    values = (triples[:, 0] << 1) | triples[:, 1]
    if np.any(values == 3):
        raise FormatError("invalid relation code 11")
    return RelationMatrix.from_flat(n, values, triples[:, 2])


@dataclass
class CacheEntry:
    kind: str  # "po_matrix" or "ranking"
    key: tuple
    payload: bytes
    format_version: int

    @property
    def filename(self):
        if self.kind == "po_matrix":
            (n,) = self.key
            return f"po_n{n}.porp"
        model, n_u, evaluator = self.key
        return f"ranking_{model.kind}_{model.param!r}_nu{n_u}_{evaluator}.json"


def atomic_write(path, data):
    """Write ``data`` next to ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def default_cache_dir():
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "polarorder"


class Cache:
    """Directory-backed cache.  Deleting the directory never changes results."""

    def __init__(self, directory=None):
        self.directory = Path(directory) if directory is not None else default_cache_dir()

    def _path(self, entry):
        return self.directory / entry.filename

    def po_matrix(self, n):
        entry = CacheEntry("po_matrix", (n,), b"", MATRIX_FORMAT_VERSION)
        path = self._path(entry)
        if path.exists():
            R = load_matrix(path.read_bytes())
            if R.n != n:
                raise FormatError(f"cache file {path} holds n={R.n}, expected {n}")
            return R
        R = po_relation_matrix(n)
        entry.payload = dump_matrix(R)
        atomic_write(path, entry.payload)
        return R

    def ranking(self, model, n_u):
        entry = CacheEntry("ranking", (model, n_u, evaluator_id(model)), b"", RANKING_FORMAT_VERSION)
        path = self._path(entry)
        if path.exists():
            ranking = import_ranking(path.read_text())
            if ranking.n_u != n_u or ranking.model != model:
                raise FormatError(f"cache file {path} does not match its key")
            return ranking
        ranking = rank_channels(model, n_u)
        entry.payload = export_ranking(ranking).encode()
        atomic_write(path, entry.payload)
        return ranking
