"""Binary cache and CSV export for representation tables.

Cache layout (little endian): magic "QFRT", format version u16, X u64,
z u64, element width u8 (= 2), then u16 counts for n = 1..X.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .arith import ShapeZ
from .errors import InvariantViolation
from .sieve import RepTable

__all__ = ["MAGIC", "FORMAT_VERSION", "table_bytes", "write_table", "read_table", "cache_path", "write_csv"]

MAGIC = b"QFRT"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHQQB")


def table_bytes(table: RepTable) -> bytes:
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, table.X, table.z.z, 2)
    return header + table.counts[1:].astype("<u2").tobytes()


def write_table(table: RepTable, path: str | os.PathLike) -> None:
    Path(path).write_bytes(table_bytes(table))


def read_table(path: str | os.PathLike) -> RepTable:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise InvariantViolation(f"cache file {path} is truncated")
    magic, version, X, z, width = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise InvariantViolation(f"cache file {path} has bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise InvariantViolation(f"cache file {path} has unsupported version {version}")
    if width != 2:
        raise InvariantViolation(f"cache file {path} has unsupported element width {width}")
    body = raw[_HEADER.size :]
    if len(body) != 2 * X:
        raise InvariantViolation(f"cache file {path} has wrong payload length")
    counts = np.zeros(X + 1, dtype=np.uint16)
    counts[1:] = np.frombuffer(body, dtype="<u2")
    return RepTable(X=int(X), z=ShapeZ(int(z)), counts=counts)


def cache_path(cache_dir: str | os.PathLike, X: int, z: int) -> Path:
    return Path(cache_dir) / f"rep_z{z}_x{X}.qfrt"


def write_csv(table: RepTable, stream) -> None:
    stream.write("n,r\n")
    for n in range(1, table.X + 1):
        stream.write(f"{n},{int(table.counts[n])}\n")
