"""Binary PGM (P5) and PPM (P6) reading and writing, 8- or 16-bit."""

from __future__ import annotations

from pathlib import Path

import numpy as np


class PNMError(ValueError):
    pass


def _header(magic: str, width: int, height: int, maxval: int) -> bytes:
    return f"{magic}\n{width} {height}\n{maxval}\n".encode("ascii")


def _dtype(maxval: int):
    if not 0 < maxval < 65536:
        raise PNMError(f"maxval must lie in 1..65535, got {maxval}")
    return np.dtype(np.uint8) if maxval < 256 else np.dtype(">u2")


def write_pgm(path, pixels, maxval: int = 255):
    """Write an integer ``(H, W)`` array as binary PGM."""
    pixels = np.asarray(pixels)
    if pixels.ndim != 2:
        raise PNMError("PGM data must be 2-D")
    if pixels.min(initial=0) < 0 or pixels.max(initial=0) > maxval:
        raise PNMError("pixel values outside 0..maxval")
    h, w = pixels.shape
    data = pixels.astype(_dtype(maxval)).tobytes()
    Path(path).write_bytes(_header("P5", w, h, maxval) + data)


def write_ppm(path, pixels, maxval: int = 255):
    """Write an integer ``(H, W, 3)`` array as binary PPM."""
    pixels = np.asarray(pixels)
    if pixels.ndim != 3 or pixels.shape[2] != 3:
        raise PNMError("PPM data must have shape (H, W, 3)")
    if pixels.min(initial=0) < 0 or pixels.max(initial=0) > maxval:
        raise PNMError("pixel values outside 0..maxval")
    h, w, _ = pixels.shape
    data = pixels.astype(_dtype(maxval)).tobytes()
    Path(path).write_bytes(_header("P6", w, h, maxval) + data)


def _tokens(buf: bytes, count: int, pos: int):
    out = []
    while len(out) < count:
        while pos < len(buf) and buf[pos:pos + 1].isspace():
            pos += 1
        if pos < len(buf) and buf[pos:pos + 1] == b"#":
            while pos < len(buf) and buf[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(buf) and not buf[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise PNMError("truncated header")
        out.append(buf[start:pos])
    # exactly one whitespace byte separates the header from the raster
    return out, pos + 1


def read_pnm(path):
    """Read a P5/P6 file. Returns ``(pixels, maxval)``."""
    buf = Path(path).read_bytes()
    (magic, w, h, maxval), pos = _tokens(buf, 4, 0)
    if magic not in (b"P5", b"P6"):
        raise PNMError(f"unsupported magic {magic!r}")
    try:
        w, h, maxval = int(w), int(h), int(maxval)
    except ValueError:
        raise PNMError("malformed header") from None
    dtype = _dtype(maxval)
    channels = 3 if magic == b"P6" else 1
    n = w * h * channels
    raster = buf[pos:pos + n * dtype.itemsize]
    if len(raster) != n * dtype.itemsize:
        raise PNMError(f"truncated raster in {path}")
    pixels = np.frombuffer(raster, dtype=dtype).astype(np.int64)
    shape = (h, w, 3) if channels == 3 else (h, w)
    return pixels.reshape(shape), maxval
