"""Corpus sample model.

A sample is a token sequence plus whatever task annotation the corpus format
carries: per-token tags (sequence tagging), a second token sequence and a
relation label (sentence pairs), or a label set (multilabel classification).
Tokens are plain strings; a token's index is its list position.  All lengths
and positions are counted in Unicode scalar values, which is exactly what
Python strings index.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

PLAIN = "plain"
TAGGED = "tagged"
PAIR = "pair"
MULTILABEL = "multilabel"

FORMATS = (PLAIN, TAGGED, PAIR, MULTILABEL)


@dataclass
class Sample:
    """One attackable unit of a corpus.

    ``tokens`` is the primary sequence (the premise side for pairs);
    ``pair_tokens`` is the hypothesis side of a pair sample; ``tags`` holds
    one tag per token for tagged samples; ``labels`` holds the pair relation
    label (exactly one) or the multilabel set (possibly empty).
    """

    kind: str = PLAIN
    tokens: list[str] = field(default_factory=list)
    pair_tokens: list[str] | None = None
    tags: list[str] | None = None
    labels: list[str] | None = None

    def validate(self) -> None:
        if self.kind not in FORMATS:
            raise ValueError(f"unknown sample kind {self.kind!r}")
        if self.kind == TAGGED:
            if self.tags is None or len(self.tags) != len(self.tokens):
                raise ValueError("tagged sample needs one tag per token")
        if self.kind == PAIR:
            if not self.tokens or not self.pair_tokens:
                raise ValueError("pair sample needs two non-empty sides")
        if any(t == "" for t in self.all_tokens()):
            raise ValueError("empty token")

    def all_tokens(self) -> list[str]:
        """Flat token list; pair samples expose premise then hypothesis."""
        if self.pair_tokens is not None:
            return self.tokens + self.pair_tokens
        return self.tokens

    def with_all_tokens(self, tokens: list[str]) -> "Sample":
        """Copy with the flat token list replaced, preserving pair split."""
        if self.pair_tokens is not None:
            n = len(self.tokens)
            return replace(self, tokens=tokens[:n], pair_tokens=tokens[n:])
        return replace(self, tokens=tokens)

    def text(self) -> str:
        """Space-joined token text (both sides for pairs)."""
        return " ".join(self.all_tokens())


@dataclass
class AttackReport:
    """Corpus-level counters for one perturbation run."""

    samples_total: int = 0
    tokens_total: int = 0
    tokens_attacked: int = 0
    tokens_modified: int = 0
    mean_norm_edit_distance: float = 0.0


@dataclass
class PerturbationConfig:
    """Everything needed to reproduce a perturbation run."""

    attack_id: str
    p: float
    phi: float | None = None
    seed: int = 0
    resources: dict[str, str] = field(default_factory=dict)
    allow_identity_shuffle: bool = False

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0,1], got {self.p}")
        if self.phi is None:
            self.phi = self.p
        if not 0.0 <= self.phi <= 1.0:
            raise ValueError(f"phi must be in [0,1], got {self.phi}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
