"""Visual neighbor tables: the builtin homoglyph map, external table files,
and a brute-force kNN builder over 24x24 glyph bitmaps (Euclidean pixel
distance stands in for a learned visual embedding space)."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import CorpusParseError, DuplicateCodepointError, TooFewGlyphsError

BITMAP_SIZE = 24
DEFAULT_K = 20


def _parse_codepoint(text: str, lineno: int) -> str:
    if not text.upper().startswith("U+"):
        raise CorpusParseError(f"expected U+XXXX codepoint, got {text!r}", lineno)
    try:
        value = int(text[2:], 16)
        char = chr(value)
    except (ValueError, OverflowError) as exc:
        raise CorpusParseError(f"bad codepoint {text!r}: {exc}", lineno) from None
    if 0xD800 <= value <= 0xDFFF:
        raise CorpusParseError(f"{text} is a surrogate, not a scalar value", lineno)
    return char


def _parse_neighbor_lines(lines) -> dict[str, list[str]]:
    table: dict[str, list[str]] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise CorpusParseError("expected U+XXXX<TAB>U+XXXX ...", lineno)
        char = _parse_codepoint(parts[0], lineno)
        if char in table:
            raise CorpusParseError(f"duplicate codepoint {parts[0]}", lineno)
        neighbors = [_parse_codepoint(tok, lineno) for tok in parts[1].split()]
        if any(n == char for n in neighbors):
            raise CorpusParseError(f"{parts[0]} lists itself as a neighbor", lineno)
        table[char] = neighbors
    return table


def load_neighbor_table(path: str) -> dict[str, list[str]]:
    """Parse a neighbor-table file: one `U+XXXX<TAB>U+XXXX U+XXXX ...` per line."""
    with open(path, encoding="utf-8") as fh:
        return _parse_neighbor_lines(fh)


def write_neighbor_table(table: dict[str, list[str]], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for char in sorted(table):
            row = " ".join(f"U+{ord(n):04X}" for n in table[char])
            fh.write(f"U+{ord(char):04X}\t{row}\n")


@lru_cache(maxsize=1)
def builtin_table() -> dict[str, list[str]]:
    """Compiled-in homoglyph table covering at least [a-zA-Z0-9]."""
    text = resources.files("zeroe.resources").joinpath("visual_neighbors.txt").read_text("utf-8")
    return _parse_neighbor_lines(text.splitlines())


def load_bitmaps(path: str) -> list[tuple[str, np.ndarray]]:
    """Parse glyph bitmap records: `U+XXXX` header then 24 rows of 24 ints.

    Records are separated by blank lines; intensities are 0..255.
    """
    glyphs: list[tuple[str, np.ndarray]] = []
    seen: set[str] = set()
    header: str | None = None
    rows: list[list[int]] = []
    header_line = 0

    def flush(lineno: int) -> None:
        nonlocal header, rows
        if header is None:
            return
        if len(rows) != BITMAP_SIZE:
            raise CorpusParseError(
                f"glyph {header!r} has {len(rows)} rows, expected {BITMAP_SIZE}",
                lineno,
            )
        glyphs.append((header, np.array(rows, dtype=np.float64)))
        header, rows = None, []

    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                flush(lineno)
                continue
            if line.upper().startswith("U+"):
                flush(lineno)
                char = _parse_codepoint(line, lineno)
                if char in seen:
                    raise DuplicateCodepointError(
                        f"duplicate glyph U+{ord(char):04X} at line {lineno}"
                    )
                seen.add(char)
                header = char
                header_line = lineno
                continue
            if header is None:
                raise CorpusParseError("pixel row outside a glyph record", lineno)
            try:
                values = [int(tok) for tok in line.split()]
            except ValueError:
                raise CorpusParseError("pixel rows must be integers", lineno) from None
            if len(values) != BITMAP_SIZE or not all(0 <= v <= 255 for v in values):
                raise CorpusParseError(
                    f"expected {BITMAP_SIZE} intensities in 0..255", lineno
                )
            rows.append(values)
        flush(header_line + BITMAP_SIZE + 1)
    return glyphs


def build_neighbors(
    bitmaps: list[tuple[str, np.ndarray]], k: int = DEFAULT_K
) -> dict[str, list[str]]:
    """k nearest glyphs per glyph by Euclidean pixel distance.

    Ties break by ascending codepoint, so the result is independent of the
    input order of ``bitmaps``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if len(bitmaps) < 2:
        raise TooFewGlyphsError("need at least 2 glyphs to build neighbors")
    chars = [c for c, _ in bitmaps]
    if len(set(chars)) != len(chars):
        raise DuplicateCodepointError("bitmap list repeats a codepoint")

    order = np.argsort([ord(c) for c in chars], kind="stable")
    chars = [chars[i] for i in order]
    vectors = np.stack([bitmaps[i][1].reshape(-1) for i in order])

    sq = np.sum(vectors**2, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (vectors @ vectors.T)
    np.fill_diagonal(d2, np.inf)
    np.maximum(d2, 0.0, out=d2)

    table: dict[str, list[str]] = {}
    for i, char in enumerate(chars):
        # argsort on (distance, codepoint order): chars are codepoint-sorted,
        # so a stable sort on distance alone breaks ties correctly.
        nearest = np.argsort(d2[i], kind="stable")[: min(k, len(chars) - 1)]
        table[char] = [chars[j] for j in nearest]
    return table
