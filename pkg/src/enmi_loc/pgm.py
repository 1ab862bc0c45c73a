"""Minimal 8-bit grayscale PGM reader/writer (P2 ASCII and P5 binary)."""
from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from ._io import atomic_write


class PGMError(ValueError):
    pass


_TOKEN = re.compile(rb"#[^\n\r]*|\S+")


def _header_tokens(data: bytes, count: int):
    """First ``count`` whitespace-separated header tokens, skipping comments.

    Returns the tokens and the offset just past the last one.
    """
    tokens, pos = [], 0
    for m in _TOKEN.finditer(data):
        if m.group().startswith(b"#"):
            continue
        tokens.append(m.group())
        pos = m.end()
        if len(tokens) == count:
            break
    if len(tokens) < count:
        raise PGMError("truncated PGM header")
    return tokens, pos


def parse_pgm(data: bytes) -> np.ndarray:
    """Decode a PGM into a ``(height, width)`` uint8 array."""
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PGMError(f"not a P2/P5 PGM (magic {magic!r})")
    (_, w, h, maxval), pos = _header_tokens(data, 4)
    try:
        width, height, maxval = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise PGMError("malformed PGM header") from exc
    if width <= 0 or height <= 0:
        raise PGMError("PGM dimensions must be positive")
    if not 0 < maxval < 256:
        raise PGMError(f"only 8-bit PGM is supported (maxval {maxval})")
    n = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        raster = data[pos + 1 : pos + 1 + n]
        if len(raster) != n:
            raise PGMError("truncated P5 raster")
        pixels = np.frombuffer(raster, dtype=np.uint8)
    else:
        body = re.sub(rb"#[^\n\r]*", b" ", data[pos:]).split()
        if len(body) < n:
            raise PGMError("truncated P2 raster")
        pixels = np.array([int(t) for t in body[:n]])
        if pixels.min() < 0 or pixels.max() > maxval:
            raise PGMError("P2 sample out of range")
        pixels = pixels.astype(np.uint8)
    return pixels.reshape(height, width).copy()


def read_pgm(path) -> np.ndarray:
    return parse_pgm(Path(path).read_bytes())


def encode_pgm(image, binary: bool = True) -> bytes:
    img = np.asarray(image)
    if img.ndim != 2:
        raise PGMError("expected a 2-D image")
    if img.min(initial=0) < 0 or img.max(initial=0) > 255:
        raise PGMError("pixel values must lie in [0, 255]")
    img = img.astype(np.uint8)
    h, w = img.shape
    if binary:
        return b"P5\n%d %d\n255\n" % (w, h) + img.tobytes()
    rows = [" ".join(str(int(v)) for v in row) for row in img]
    return (f"P2\n{w} {h}\n255\n" + "\n".join(rows) + "\n").encode()


def write_pgm(path, image, binary: bool = True) -> None:
    with atomic_write(path, "wb") as fh:
        fh.write(encode_pgm(image, binary))
