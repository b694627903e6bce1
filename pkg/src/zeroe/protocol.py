"""Token selection: which tokens of a sample actually get perturbed.

Indices are drawn uniformly without replacement; an independent coin with
tail probability p decides whether the drawn token is attacked.  Drawing
stops once the target count is perturbed or no indices remain.  Ineligible
tokens consume their draw and coin but never count toward the target.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .attacks import AttackSpec, segment
from .errors import SegmentOnTaggedError
from .rng import RandomStream
from .sample import TAGGED, Sample


@dataclass
class SelectionTrace:
    """What the protocol did to one sample."""

    drawn_indices: list[int] = field(default_factory=list)
    attacked_indices: list[int] = field(default_factory=list)
    modified_indices: list[int] = field(default_factory=list)
    target_count: int = 0


def target_count(n: int, p: float) -> int:
    """Number of tokens to perturb: p*n rounded half up."""
    if n < 0:
        raise ValueError("token count must be non-negative")
    return int(n * p + 0.5)


def run_protocol(
    sample: Sample,
    p: float,
    spec: AttackSpec,
    word_fn: Callable[[str, RandomStream], str] | None,
    stream: RandomStream,
    phi: float | None = None,
) -> tuple[Sample, SelectionTrace]:
    """Apply one attack to one sample under the selection protocol.

    ``word_fn`` is the bound word transform (phi and resources already
    applied); it is ignored for sample-level attacks.  Tags, labels and the
    pair split are preserved; only token text changes.
    """
    if sample.kind == TAGGED and not spec.tagged_ok:
        raise SegmentOnTaggedError(
            f"{spec.attack_id} cannot run on tagged corpora: merged tokens have no tag"
        )

    if spec.sample_level:
        # Segmentation replaces the per-token loop with its own boundary scan.
        new_sample, merged = segment(sample, p if phi is None else phi, stream)
        trace = SelectionTrace(
            attacked_indices=merged, modified_indices=list(merged), target_count=0
        )
        return new_sample, trace

    tokens = sample.all_tokens()
    n = len(tokens)
    target = target_count(n, p)
    trace = SelectionTrace(target_count=target)
    if target == 0 or n == 0:
        return sample, trace

    out = list(tokens)
    remaining = list(range(n))
    eligible = spec.eligible
    uniform = stream.uniform
    while remaining and len(trace.attacked_indices) < target:
        j = stream.below(len(remaining))
        idx = remaining[j]
        remaining[j] = remaining[-1]
        remaining.pop()
        trace.drawn_indices.append(idx)
        if uniform() < p and eligible(out[idx]):
            new_text = word_fn(out[idx], stream)
            trace.attacked_indices.append(idx)
            if new_text != out[idx]:
                trace.modified_indices.append(idx)
                out[idx] = new_text

    if trace.modified_indices:
        return sample.with_all_tokens(out), trace
    return sample, trace
