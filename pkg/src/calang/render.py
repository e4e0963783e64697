"""Space-time diagrams as ASCII text or binary PGM images.

Row ``t`` shows configuration ``G^t(c0)`` over a fixed viewport of grid
indices.  In ASCII the quiescent symbol is drawn as ``.``; single-character
tokens are drawn as themselves and longer tokens get letters ``a``, ``b``, …
in alphabet order unless a glyph map says otherwise.  In PGM the quiescent
symbol is white and the other symbols are spread evenly down to black.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field

import numpy as np

from .core import Alphabet, FiniteConfiguration

ASCII = "ascii"
PGM = "pgm"
FORMATS = (ASCII, PGM)
BOTTOM_GLYPH = "."


@dataclass(frozen=True)
class RenderSpec:
    format: str = ASCII
    steps: int = 10
    viewport: tuple | None = None  # (left, right) inclusive, or None for auto
    glyphs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.steps < 0:
            raise ValueError("steps must be non-negative")
        if self.viewport is not None and self.viewport[0] > self.viewport[1]:
            raise ValueError(f"empty viewport {self.viewport}")


def parse_glyphs(text: str | None) -> dict:
    """``'a-1=x,a-2=y'`` -> ``{'a-1': 'x', 'a-2': 'y'}``."""
    out: dict = {}
    if not text:
        return out
    for item in text.split(","):
        tok, sep, glyph = item.rpartition("=")
        if not sep or not tok or not glyph:
            raise ValueError(f"glyph entries look like token=glyph, got {item!r}")
        out[tok.strip()] = glyph.strip()
    return out


def parse_viewport(text: str | None) -> tuple | None:
    """``'auto'``, ``'-5:12'`` or ``'-5,12'``."""
    if text is None or text == "auto":
        return None
    sep = ":" if ":" in text else ","
    left, _, right = text.partition(sep)
    return int(left), int(right)


def ascii_glyphs(alphabet: Alphabet, overrides: dict | None = None) -> dict:
    """Total map from tokens to one-character glyphs."""
    overrides = dict(overrides or {})
    for tok, g in overrides.items():
        alphabet.index(tok)
        if len(g) != 1:
            raise ValueError(f"glyph for {tok!r} must be a single character, got {g!r}")
    glyphs = {alphabet.bottom: BOTTOM_GLYPH}
    active = alphabet.decode(alphabet.active)
    if alphabet.single_char:
        glyphs.update({s: s for s in active})
    else:
        letters = iter(string.ascii_lowercase)
        for s in active:
            if s in overrides:
                continue
            try:
                glyphs[s] = next(letters)
            except StopIteration:
                raise ValueError("too many symbols for automatic glyphs; pass a glyph map") from None
    glyphs.update(overrides)
    return glyphs


def gray_levels(alphabet: Alphabet, overrides: dict | None = None) -> dict:
    """Token -> gray level, quiescent white, the last symbol black."""
    k = len(alphabet) - 1
    levels = {s: 255 - round(255 * j / k) if k else 255 for j, s in enumerate(alphabet.symbols)}
    levels[alphabet.bottom] = 255
    for tok, g in (overrides or {}).items():
        alphabet.index(tok)
        level = int(g)
        if not 0 <= level <= 255:
            raise ValueError(f"gray level for {tok!r} must be within 0..255")
        levels[tok] = level
    return levels


def auto_viewport(rows: list) -> tuple:
    """Smallest window containing every row's active interval."""
    spans = [c.interval for c in rows if not c.is_empty]
    if not spans:
        return (0, 0)
    return min(a for a, _ in spans), max(b for _, b in spans)


def grid(rows: list, viewport: tuple) -> np.ndarray:
    """Symbol indices of ``rows`` over ``viewport``, shape ``(len(rows), width)``."""
    left, right = viewport
    out = np.zeros((len(rows), right - left + 1), dtype=np.int64)
    for t, c in enumerate(rows):
        out[t] = [c.cell(z) for z in range(left, right + 1)]
    return out


def render_ascii(rows: list, alphabet: Alphabet, viewport: tuple | None = None,
                 glyphs: dict | None = None) -> str:
    table = ascii_glyphs(alphabet, glyphs)
    lut = [table[s] for s in alphabet.symbols]
    g = grid(rows, viewport or auto_viewport(rows))
    return "".join("".join(lut[v] for v in row) + "\n" for row in g)


def render_pgm(rows: list, alphabet: Alphabet, viewport: tuple | None = None,
               glyphs: dict | None = None) -> bytes:
    levels = gray_levels(alphabet, glyphs)
    lut = np.array([levels[s] for s in alphabet.symbols], dtype=np.uint8)
    g = grid(rows, viewport or auto_viewport(rows))
    h, w = g.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + lut[g].tobytes()


def render(rows: list, alphabet: Alphabet, spec: RenderSpec):
    """Text for ASCII, bytes for PGM."""
    if spec.format == ASCII:
        return render_ascii(rows, alphabet, spec.viewport, spec.glyphs)
    return render_pgm(rows, alphabet, spec.viewport, spec.glyphs)


def read_pgm(data: bytes) -> np.ndarray:
    """Inverse of :func:`render_pgm` for the header layout it writes."""
    magic, dims, maxval, rest = data.split(b"\n", 3)
    if magic != b"P5" or maxval != b"255":
        raise ValueError("not an 8-bit binary PGM")
    w, h = (int(x) for x in dims.split())
    return np.frombuffer(rest, dtype=np.uint8).reshape(h, w)


__all__ = [
    "ASCII",
    "FORMATS",
    "PGM",
    "RenderSpec",
    "ascii_glyphs",
    "auto_viewport",
    "gray_levels",
    "grid",
    "parse_glyphs",
    "parse_viewport",
    "read_pgm",
    "render",
    "render_ascii",
    "render_pgm",
]
