"""Evaluation arithmetic: relative scores, defense deltas, edit distance,
corpus perturbation magnitude, and adversarial-training mixtures."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import zip_longest
from typing import Iterable, Iterator, Sequence

from .errors import (
    ExcludedAttackerAbsentError,
    MisalignmentError,
    MissingShieldedScoreError,
    ZeroCleanScoreError,
)
from .rng import RandomStream
from .sample import Sample


@dataclass
class ScoreRecord:
    """Task scores at one attack level: clean s(0), attacked s(p), shielded sigma(p)."""

    clean: float
    attacked: float
    shielded: float | None = None
    level: float | None = None


def relative_score(rec: ScoreRecord) -> float:
    """Attacked score relative to clean performance: s(p) / s(0)."""
    if rec.clean <= 0:
        raise ZeroCleanScoreError("clean score must be positive")
    return rec.attacked / rec.clean


def defense_delta(rec: ScoreRecord) -> float:
    """Improvement from shielding: sigma(p)/s(0) - s(p)/s(0)."""
    if rec.clean <= 0:
        raise ZeroCleanScoreError("clean score must be positive")
    if rec.shielded is None:
        raise MissingShieldedScoreError("defense delta needs a shielded score")
    return rec.shielded / rec.clean - rec.attacked / rec.clean


def levenshtein(a: Sequence, b: Sequence) -> int:
    """Unit-cost edit distance; works on strings or phoneme-symbol lists."""
    # Trim the common prefix and suffix first; perturbations are usually
    # local, which shrinks the quadratic part a lot.
    i = 0
    na, nb = len(a), len(b)
    while i < na and i < nb and a[i] == b[i]:
        i += 1
    while na > i and nb > i and a[na - 1] == b[nb - 1]:
        na -= 1
        nb -= 1
    a, b = a[i:na], b[i:nb]
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        append = cur.append
        for j, cb in enumerate(b, start=1):
            append(min(prev[j] + 1, cur[-1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


_MISSING = object()


def corpus_stats(clean: Iterable[Sample], perturbed: Iterable[Sample]) -> dict:
    """One-pass comparison of two sample-aligned corpora.

    Returns the mean normalized edit distance over sample texts plus a
    token-level modification rate.  Where a sample's token count changed
    (segmentation, whitespace intruders) all its clean tokens count as
    modified.
    """
    samples = 0
    distance_total = 0.0
    tokens_total = 0
    tokens_modified = 0
    for c, q in zip_longest(clean, perturbed, fillvalue=_MISSING):
        if c is _MISSING or q is _MISSING:
            raise MisalignmentError("corpora differ in sample count")
        samples += 1
        c_text = c.text()
        distance_total += levenshtein(c_text, q.text()) / max(1, len(c_text))
        c_tokens, q_tokens = c.all_tokens(), q.all_tokens()
        tokens_total += len(c_tokens)
        if len(c_tokens) == len(q_tokens):
            tokens_modified += sum(a != b for a, b in zip(c_tokens, q_tokens))
        else:
            tokens_modified += len(c_tokens)
    return {
        "samples": samples,
        "corpus_magnitude": distance_total / samples if samples else 0.0,
        "tokens_total": tokens_total,
        "tokens_modified": tokens_modified,
        "token_modification_rate": tokens_modified / tokens_total if tokens_total else 0.0,
    }


def corpus_magnitude(clean: Iterable[Sample], perturbed: Iterable[Sample]) -> float:
    """Mean per-sample edit distance between corpora, normalized by clean length.

    Sample text is the space-joined token sequence.  Both corpora must be
    sample-aligned (same count, same order).
    """
    return corpus_stats(clean, perturbed)["corpus_magnitude"]


def build_mixture(
    corpora: Sequence[tuple[str, float, Iterable[Sample]]],
    mode: str,
    stream: RandomStream,
    exclude: str | None = None,
) -> Iterator[tuple[Sample, tuple[str, float]]]:
    """Per-sample uniform mix of aligned attacked corpora.

    ``corpora`` is a list of (attack_id, level, samples).  In ``levels`` mode
    every entry is a candidate; in ``loo`` mode entries for ``exclude`` are
    dropped first.  Yields (sample, (attack_id, level)) pairs, the second
    element being the provenance of the chosen version.
    """
    if mode not in ("levels", "loo"):
        raise ValueError(f"unknown mixture mode {mode!r}")
    pool = list(corpora)
    if mode == "loo":
        if exclude is None:
            raise ValueError("loo mode needs the excluded attacker")
        if not any(attack_id == exclude for attack_id, _, _ in pool):
            raise ExcludedAttackerAbsentError(
                f"attacker {exclude!r} not among the mixture inputs"
            )
        pool = [entry for entry in pool if entry[0] != exclude]
    if not pool:
        raise ValueError("no corpora to mix")

    def generate() -> Iterator[tuple[Sample, tuple[str, float]]]:
        tags = [(attack_id, level) for attack_id, level, _ in pool]
        for versions in zip_longest(*(samples for _, _, samples in pool), fillvalue=_MISSING):
            if any(v is _MISSING for v in versions):
                raise MisalignmentError("mixture inputs differ in sample count")
            choice = stream.below(len(pool))
            yield versions[choice], tags[choice]

    return generate()
