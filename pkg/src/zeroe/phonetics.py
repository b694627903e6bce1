"""Phoneme-level similarity: grapheme-to-phoneme lookup with a rule fallback,
normalized phoneme edit distance, and the four-class similarity binning the
phonetic attack filters with.

Words are compared through their phoneme sequences: distance d is the
unit-cost edit distance over phoneme symbols, delta = d / min(|p1|, |p2|)
its normalized form (the similarity value is 1 - delta).  Bins are read over
delta: 0 is identical, below 0.1 very similar, below 0.3 similar, otherwise
different; boundary points fall into the coarser class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

from .errors import CorpusParseError, EmptySequenceError, EmptyWordError
from .metrics import levenshtein

VOWELS = "aeiou"
CONSONANTS = frozenset("bcdfghjklmnpqrstvwxyz")


class SimilarityClass(IntEnum):
    IDENTICAL = 0
    VERY_SIMILAR = 1
    SIMILAR = 2
    DIFFERENT = 3

    def __str__(self) -> str:
        return self.name.lower()


def classify(delta: float) -> SimilarityClass:
    """Bin a normalized phoneme distance into the four similarity classes."""
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if delta == 0:
        return SimilarityClass.IDENTICAL
    if delta < 0.1:
        return SimilarityClass.VERY_SIMILAR
    if delta < 0.3:
        return SimilarityClass.SIMILAR
    return SimilarityClass.DIFFERENT


def phoneme_distance(p1: list[str], p2: list[str]) -> tuple[int, float]:
    """Edit distance between phoneme sequences and its normalized form.

    Returns (d, delta) with delta = d / min(|p1|, |p2|); delta can exceed 1
    for sequences of very different lengths.
    """
    if not p1 or not p2:
        raise EmptySequenceError("phoneme sequences must be non-empty")
    d = levenshtein(p1, p2)
    return d, d / min(len(p1), len(p2))


def _strip_stress(symbol: str) -> str:
    return symbol.rstrip("0123456789").upper()


def load_phonetic_dictionary(path: str) -> dict[str, list[str]]:
    """Parse `WORD  PH1 PH2 ...` lines (tab or multi-space separated).

    Stress digits and case are normalized away; the first pronunciation of a
    word wins; `;;;` comment lines and alternate entries like `WORD(1)` are
    skipped.
    """
    table: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith(";;;") or line.startswith("#"):
                continue
            fields = line.split()
            if len(fields) < 2:
                raise CorpusParseError("expected WORD PH1 [PH2 ...]", lineno)
            word = fields[0].lower()
            if word.endswith(")"):
                continue
            if word in table:
                continue
            table[word] = [_strip_stress(s) for s in fields[1:]]
    return table


def load_homophones(path: str) -> dict[str, list[str]]:
    """Parse comma-separated homophone groups, one group per line."""
    groups: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            words = [w.strip().lower() for w in line.split(",")]
            if len(words) < 2 or any(not w for w in words):
                raise CorpusParseError("expected word,word[,word...]", lineno)
            for w in words:
                groups.setdefault(w, [])
                for other in words:
                    if other != w and other not in groups[w]:
                        groups[w].append(other)
    return groups


class G2pRules:
    """Longest-match grapheme-to-phoneme fallback table."""

    def __init__(self, rules: list[tuple[str, list[str]]]):
        self._by_length: list[tuple[int, dict[str, list[str]]]] = []
        lengths = sorted({len(p) for p, _ in rules}, reverse=True)
        for n in lengths:
            self._by_length.append((n, {p: out for p, out in rules if len(p) == n}))

    def apply(self, word: str) -> list[str]:
        phonemes: list[str] = []
        i = 0
        n = len(word)
        while i < n:
            for length, table in self._by_length:
                out = table.get(word[i : i + length])
                if out is not None:
                    phonemes.extend(out)
                    i += length
                    break
            else:
                i += 1  # no rule: character contributes nothing
        return phonemes


def load_g2p_rules(path: str) -> G2pRules:
    """Parse `pattern<TAB>PH1 [PH2 ...]` lines."""
    rules: list[tuple[str, list[str]]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0]:
                raise CorpusParseError("expected pattern<TAB>phonemes", lineno)
            rules.append((parts[0].lower(), [_strip_stress(s) for s in parts[1].split()]))
    return G2pRules(rules)


@dataclass
class RespellRules:
    """Substitution sites for respelling candidates.

    Literal rules are (pattern, replacement) pairs, each occurrence yielding
    one candidate; a trailing `$` anchors the pattern at the word end.  Two
    named directives cover the context-sensitive rules: `@silent_e_drop`
    (final e after consonant+vowel+consonant) and
    `@double_consonant_collapse` (any doubled consonant loses one copy).
    """

    literal: list[tuple[str, str, bool]] = field(default_factory=list)
    silent_e_drop: bool = False
    double_consonant_collapse: bool = False

    def respellings(self, word: str) -> set[str]:
        out: set[str] = set()
        for pattern, replacement, anchored in self.literal:
            if anchored:
                if word.endswith(pattern):
                    out.add(word[: -len(pattern)] + replacement)
            else:
                start = word.find(pattern)
                while start >= 0:
                    out.add(word[:start] + replacement + word[start + len(pattern) :])
                    start = word.find(pattern, start + 1)
        if self.double_consonant_collapse:
            for i in range(len(word) - 1):
                if word[i] == word[i + 1] and word[i] in CONSONANTS:
                    out.add(word[:i] + word[i + 1 :])
        if (
            self.silent_e_drop
            and len(word) >= 4
            and word[-1] == "e"
            and word[-2] in CONSONANTS
            and word[-3] in VOWELS
            and word[-4] in CONSONANTS
        ):
            out.add(word[:-1])
        out.discard(word)
        out.discard("")
        return out


def load_respell_rules(path: str) -> RespellRules:
    rules = RespellRules()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line or line.startswith("#"):
                continue
            if line.startswith("@"):
                name = line[1:].strip()
                if name == "silent_e_drop":
                    rules.silent_e_drop = True
                elif name == "double_consonant_collapse":
                    rules.double_consonant_collapse = True
                else:
                    raise CorpusParseError(f"unknown directive @{name}", lineno)
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0]:
                raise CorpusParseError("expected pattern<TAB>replacement", lineno)
            pattern, replacement = parts
            anchored = pattern.endswith("$")
            if anchored:
                pattern = pattern[:-1]
            rules.literal.append((pattern, replacement, anchored))
    return rules


class PhoneticBackend:
    """Bound phonetic resources: dictionary, homophone groups, rule tables."""

    def __init__(
        self,
        dictionary: dict[str, list[str]],
        homophones: dict[str, list[str]],
        g2p_rules: G2pRules,
        respell_rules: RespellRules,
    ):
        self.dictionary = dictionary
        self.homophones = homophones
        self.g2p_rules = g2p_rules
        self.respell_rules = respell_rules
        self._cache: dict[str, list[str]] = {}

    def g2p(self, word: str) -> list[str]:
        """Phoneme sequence for a word: dictionary hit or rule fallback."""
        if not word:
            raise EmptyWordError("cannot transcribe an empty word")
        key = word.lower()
        hit = self.dictionary.get(key)
        if hit is not None:
            return list(hit)
        phonemes = self.g2p_rules.apply(key)
        if not phonemes:
            # No rule matched anything (digits, punctuation); keep it total.
            return [word.upper()]
        return phonemes

    def candidates(self, word: str) -> list[str]:
        """Candidate respellings: homophone co-members plus rule respellings."""
        key = word.lower()
        cands = set(self.homophones.get(key, ()))
        cands |= self.respell_rules.respellings(key)
        cands.discard(key)
        cands.discard(word)
        return sorted(cands)

    def similarity_class(self, w1: str, w2: str) -> SimilarityClass:
        _, delta = phoneme_distance(self.g2p(w1), self.g2p(w2))
        return classify(delta)

    def similar_respellings(self, word: str) -> list[str]:
        """Candidates that sound identical or very similar to the word."""
        key = word.lower()
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        cands = self.candidates(key)
        survivors = []
        if cands:
            base = self.g2p(key)
            for cand in cands:
                _, delta = phoneme_distance(base, self.g2p(cand))
                if classify(delta) <= SimilarityClass.VERY_SIMILAR:
                    survivors.append(cand)
        self._cache[key] = survivors
        return survivors
