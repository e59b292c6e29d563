"""File formats: binary PGM images and subband archives.

Subband archive layout (all integers little-endian)::

    8 bytes   magic  b"LWSUBBND"
    4 bytes   uint32 header length in bytes
    n bytes   UTF-8 JSON header
    payload   four float64 grids (ll, lh, hl, hh), row-major, little-endian

The header carries ``format_version``, ``rows``/``cols`` of one subband,
``steps``, ``params`` and ``alignment``; writers may add extra keys such as
``maxval`` of the source image.
"""
from __future__ import annotations

import json
import math
import re
import struct
from pathlib import Path

import numpy as np

from .dwt2d import Subbands

ARCHIVE_MAGIC = b"LWSUBBND"
ARCHIVE_VERSION = 1


class FormatError(ValueError):
    pass


_PGM_TOKEN = re.compile(rb"(?:\s|#[^\n\r]*[\n\r])*(\S+)")


def parse_pgm(data: bytes) -> tuple[np.ndarray, int]:
    """Decode a binary (P5) PGM with ``maxval`` up to 65535."""
    pos = 0
    fields = []
    for _ in range(4):
        m = _PGM_TOKEN.match(data, pos)
        if m is None:
            raise FormatError("truncated PGM header")
        fields.append(m.group(1))
        pos = m.end()
    if fields[0] != b"P5":
        raise FormatError(f"not a binary PGM (magic {fields[0]!r}, expected b'P5')")
    try:
        width, height, maxval = (int(f) for f in fields[1:])
    except ValueError:
        raise FormatError("malformed PGM header") from None
    if width <= 0 or height <= 0 or not 0 < maxval < 65536:
        raise FormatError(f"invalid PGM header values {width}x{height} maxval {maxval}")
    pos += 1  # single whitespace byte before the raster
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    n = width * height * dtype.itemsize
    raster = data[pos:pos + n]
    if len(raster) != n:
        raise FormatError(f"PGM raster has {len(raster)} bytes, expected {n}")
    img = np.frombuffer(raster, dtype=dtype).reshape(height, width).astype(np.int64)
    if img.max(initial=0) > maxval:
        raise FormatError("PGM sample exceeds maxval")
    return img, maxval


def read_pgm(path) -> tuple[np.ndarray, int]:
    """Return ``(integer image, maxval)``."""
    return parse_pgm(Path(path).read_bytes())


def encode_pgm(img, maxval: int = 255) -> bytes:
    img = np.asarray(img)
    if img.ndim != 2:
        raise FormatError("PGM images are 2D")
    if img.min(initial=0) < 0 or img.max(initial=0) > maxval:
        raise FormatError(f"samples must lie in [0, {maxval}]")
    dtype = ">u2" if maxval > 255 else "u1"
    header = f"P5\n{img.shape[1]} {img.shape[0]}\n{maxval}\n".encode("ascii")
    return header + img.astype(dtype).tobytes()


def write_pgm(path, img, maxval: int = 255):
    Path(path).write_bytes(encode_pgm(img, maxval))


def to_unit_range(img, maxval: int = 255) -> np.ndarray:
    return np.asarray(img, dtype=float) / maxval


def quantize(x, maxval: int = 255) -> np.ndarray:
    """Map ``[0, 1]`` floats to integers, rounding half away from zero."""
    v = np.asarray(x, dtype=float) * maxval
    q = np.sign(v) * np.floor(np.abs(v) + 0.5)
    return np.clip(q, 0, maxval).astype(np.int64)


def encode_archive(s: Subbands, extra: dict | None = None) -> bytes:
    rows, cols = s.shape
    header = dict(extra or {})
    header |= {
        "format_version": ARCHIVE_VERSION,
        "rows": rows,
        "cols": cols,
        "steps": s.steps,
        "params": list(s.params),
        "alignment": s.alignment,
    }
    hbytes = json.dumps(header, sort_keys=True).encode("utf-8")
    payload = s.as_array().astype("<f8").tobytes()
    return ARCHIVE_MAGIC + struct.pack("<I", len(hbytes)) + hbytes + payload


def decode_archive(data: bytes) -> tuple[Subbands, dict]:
    if data[:8] != ARCHIVE_MAGIC:
        raise FormatError("bad archive magic")
    if len(data) < 12:
        raise FormatError("truncated archive")
    (hlen,) = struct.unpack("<I", data[8:12])
    try:
        header = json.loads(data[12:12 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise FormatError(f"corrupt archive header: {e}") from None
    if not isinstance(header, dict):
        raise FormatError("archive header must be a JSON object")
    if header.get("format_version") != ARCHIVE_VERSION:
        raise FormatError(f"unsupported archive version {header.get('format_version')!r}")
    try:
        rows, cols = int(header["rows"]), int(header["cols"])
        steps = int(header["steps"])
        params = tuple(float(v) for v in header["params"])
        alignment = int(header["alignment"])
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"incomplete archive header: {e}") from None
    if len(params) != steps or not all(math.isfinite(v) for v in params):
        raise FormatError("archive params do not match steps")
    payload = data[12 + hlen:]
    expected = 4 * rows * cols * 8
    if len(payload) != expected:
        raise FormatError(f"archive payload has {len(payload)} bytes, expected {expected}")
    grids = np.frombuffer(payload, dtype="<f8").reshape(4, rows, cols).astype(float)
    return Subbands(*grids, steps=steps, params=params, alignment=alignment), header


def write_archive(path, s: Subbands, extra: dict | None = None):
    Path(path).write_bytes(encode_archive(s, extra))


def read_archive(path) -> tuple[Subbands, dict]:
    return decode_archive(Path(path).read_bytes())
