"""The ten character-level attack transforms.

Each word-level attack is a pure function of (word, phi, stream) plus any
bound resource table; segmentation works on whole samples.  Eligibility
thresholds (minimum word length and the like) are enforced by the selection
protocol, not here, but every transform degrades to identity on inputs below
its threshold so direct calls stay safe.

Draw order inside every transform is fixed and load-bearing: reordering any
``stream`` call changes generated corpora.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

from .errors import CorpusParseError
from .rng import RandomStream
from .sample import Sample

ATTACK_IDS = (
    "inner-shuffle",
    "full-shuffle",
    "intrude",
    "disemvowel",
    "truncate",
    "segment",
    "keyboard-typo",
    "natural-typo",
    "phonetic",
    "visual",
)

# Insertable intruder symbols, in draw order; space last.  Tagged corpora use
# INTRUDER_SYMBOLS_NO_SPACE so a token can never swallow the column format.
INTRUDER_SYMBOLS = tuple("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~ ")
INTRUDER_SYMBOLS_NO_SPACE = INTRUDER_SYMBOLS[:-1]

KEYBOARD_ROWS = ("qwertyuiop", "asdfghjkl", "zxcvbnm")

VOWELS = frozenset("aeiouAEIOU")

_SHUFFLE_REDRAWS = 16


def _build_keyboard_adjacency() -> dict[str, str]:
    pos = {}
    for r, row in enumerate(KEYBOARD_ROWS):
        for c, ch in enumerate(row):
            pos[ch] = (r, c)
    adj = {}
    for ch, (r, c) in pos.items():
        neighbors = []
        for r2, row in enumerate(KEYBOARD_ROWS):
            if abs(r2 - r) > 1:
                continue
            for c2 in range(max(0, c - 1), min(len(row), c + 2)):
                if (r2, c2) != (r, c):
                    neighbors.append(row[c2])
        adj[ch] = "".join(neighbors)
    return adj


KEYBOARD_ADJACENCY = _build_keyboard_adjacency()


def _fisher_yates(chars: list[str], stream: RandomStream) -> None:
    for i in range(len(chars) - 1, 0, -1):
        j = stream.below(i + 1)
        chars[i], chars[j] = chars[j], chars[i]


def _shuffle_nonidentity(part: str, stream: RandomStream, allow_identity: bool) -> str:
    """Uniform permutation of ``part``, redrawn while it reproduces the input."""
    chars = list(part)
    _fisher_yates(chars, stream)
    if allow_identity or len(set(part)) < 2:
        return "".join(chars)
    redraws = 0
    while "".join(chars) == part and redraws < _SHUFFLE_REDRAWS:
        chars = list(part)
        _fisher_yates(chars, stream)
        redraws += 1
    return "".join(chars)


def inner_shuffle(word: str, stream: RandomStream, allow_identity: bool = False) -> str:
    """Permute everything between the first and last character."""
    if len(word) < 3:
        return word
    return word[0] + _shuffle_nonidentity(word[1:-1], stream, allow_identity) + word[-1]


def full_shuffle(word: str, stream: RandomStream, allow_identity: bool = False) -> str:
    """Permute all characters."""
    if len(word) < 2:
        return word
    return _shuffle_nonidentity(word, stream, allow_identity)


def intrude(
    word: str,
    phi: float,
    stream: RandomStream,
    alphabet: tuple[str, ...] = INTRUDER_SYMBOLS,
) -> str:
    """Insert one randomly chosen symbol into inter-character gaps.

    The symbol is drawn from the alphabet minus the characters already in the
    word (so stripping it recovers the input); each of the len-1 gaps fires
    independently with probability phi, and at least one insertion is forced.
    """
    if len(word) < 3:
        return word
    candidates = [s for s in alphabet if s not in word] or list(alphabet)
    symbol = candidates[stream.below(len(candidates))]
    gaps = len(word) - 1
    fired = [stream.uniform() < phi for _ in range(gaps)]
    if not any(fired):
        fired[stream.below(gaps)] = True
    pieces = [word[0]]
    for i in range(1, len(word)):
        if fired[i - 1]:
            pieces.append(symbol)
        pieces.append(word[i])
    return "".join(pieces)


def disemvowel(word: str) -> str:
    """Strip a, e, i, o, u (either case).

    Words of length <= 3 or made only of vowels pass through unchanged (the
    latter would otherwise vanish entirely).
    """
    if len(word) <= 3 or all(ch in VOWELS for ch in word):
        return word
    return "".join(ch for ch in word if ch not in VOWELS)


def truncate(word: str) -> str:
    """Drop the final character."""
    if len(word) < 3:
        return word
    return word[:-1]


def keyboard_typo(word: str, phi: float, stream: RandomStream) -> str:
    """Replace letters with adjacent keys, each firing with probability phi."""
    out = []
    for ch in word:
        lower = ch.lower()
        neighbors = KEYBOARD_ADJACENCY.get(lower)
        if neighbors is None:
            out.append(ch)
            continue
        if stream.uniform() < phi:
            pick = neighbors[stream.below(len(neighbors))]
            out.append(pick.upper() if ch.isupper() else pick)
        else:
            out.append(ch)
    return "".join(out)


def natural_typo(word: str, typo_dict: dict[str, list[str]], stream: RandomStream) -> str:
    """Swap the whole token for a recorded human misspelling, if one exists."""
    variants = typo_dict.get(word.lower())
    if not variants:
        return word
    return variants[stream.below(len(variants))]


def phonetic_attack(word: str, backend, stream: RandomStream) -> str:
    """Respell the word, keeping only near-identical-sounding candidates.

    ``backend`` supplies candidate respellings and the similarity filter; see
    the phonetics module.  Unfilterable words pass through unchanged.
    """
    survivors = backend.similar_respellings(word)
    if not survivors:
        return word
    return survivors[stream.below(len(survivors))]


def visual_attack(
    word: str,
    phi: float,
    table: dict[str, list[str]],
    stream: RandomStream,
    misses: list[int] | None = None,
) -> str:
    """Replace characters with visual neighbors, each firing with probability phi."""
    out = []
    for ch in word:
        if stream.uniform() < phi:
            neighbors = table.get(ch)
            if neighbors:
                out.append(neighbors[stream.below(len(neighbors))])
            else:
                if misses is not None:
                    misses[0] += 1
                out.append(ch)
        else:
            out.append(ch)
    return "".join(out)


def _merge_run(tokens: list[str], phi: float, stream: RandomStream) -> tuple[list[str], list[int]]:
    if len(tokens) < 2:
        return list(tokens), []
    out = [tokens[0]]
    merged = []
    exponent = 1
    for i, tok in enumerate(tokens[1:], start=1):
        if stream.uniform() < phi**exponent:
            out[-1] = out[-1] + tok
            merged.append(i)
            exponent += 1
        else:
            out.append(tok)
            exponent = 1
    return out, merged


def segment(sample: Sample, phi: float, stream: RandomStream) -> tuple[Sample, list[int]]:
    """Merge adjacent tokens; the k-th consecutive merge fires at phi**k.

    Pair samples are merged per side, never across the pair boundary.
    Returns the new sample and the flat indices of the absorbed tokens.
    """
    left, merged = _merge_run(sample.tokens, phi, stream)
    if sample.pair_tokens is not None:
        offset = len(sample.tokens)
        right, merged_right = _merge_run(sample.pair_tokens, phi, stream)
        merged += [offset + i for i in merged_right]
        return replace(sample, tokens=left, pair_tokens=right), merged
    return replace(sample, tokens=left), merged


def load_typo_dictionary(path: str) -> dict[str, list[str]]:
    """Parse `word<TAB>variant` lines; repeated words accumulate variants."""
    table: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise CorpusParseError("expected word<TAB>variant", lineno)
            word, variant = parts[0].lower(), parts[1]
            if variant == word:
                raise CorpusParseError(f"variant equals its key {word!r}", lineno)
            table.setdefault(word, []).append(variant)
    return table


@dataclass(frozen=True)
class AttackSpec:
    """Registry entry: how the protocol should treat one attack."""

    attack_id: str
    eligible: Callable[[str], bool]
    sample_level: bool = False
    tagged_ok: bool = True
    needs: tuple[str, ...] = ()


def _always(_word: str) -> bool:
    return True


REGISTRY: dict[str, AttackSpec] = {
    "inner-shuffle": AttackSpec("inner-shuffle", lambda w: len(w) >= 3),
    "full-shuffle": AttackSpec("full-shuffle", lambda w: len(w) >= 2),
    "intrude": AttackSpec("intrude", lambda w: len(w) >= 3),
    "disemvowel": AttackSpec(
        "disemvowel", lambda w: len(w) > 3 and any(c not in VOWELS for c in w)
    ),
    "truncate": AttackSpec("truncate", lambda w: len(w) >= 3),
    "segment": AttackSpec("segment", _always, sample_level=True, tagged_ok=False),
    "keyboard-typo": AttackSpec("keyboard-typo", _always),
    "natural-typo": AttackSpec("natural-typo", _always, needs=("typo-dict",)),
    "phonetic": AttackSpec(
        "phonetic", _always, needs=("phon-dict", "homophones")
    ),
    "visual": AttackSpec("visual", _always, needs=("visual-table",)),
}
