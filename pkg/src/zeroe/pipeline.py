"""Corpus-level perturbation runs: bind a config to its attack and resources,
stream samples through the protocol, and accumulate report counters.

Per-sample random streams are derived from (seed, sample index), so results
do not depend on processing order; the optional process pool reuses exactly
the same derivation and is byte-identical to a sequential run.
"""

from __future__ import annotations

import itertools
import logging
import multiprocessing
from typing import Callable, Iterable, Iterator

from . import attacks
from .errors import MissingResourceError
from .metrics import levenshtein
from .protocol import run_protocol
from .resource_loader import Resources, load_resources
from .rng import RandomStream, derive_stream
from .sample import TAGGED, AttackReport, PerturbationConfig, Sample

_CHUNK = 256


def bind_attack(
    config: PerturbationConfig, fmt: str, resources: Resources
) -> tuple[attacks.AttackSpec, Callable[[str, RandomStream], str] | None, list[int]]:
    """Resolve the word transform for a config; returns (spec, fn, miss counter)."""
    spec = attacks.REGISTRY.get(config.attack_id)
    if spec is None:
        raise ValueError(
            f"unknown attack {config.attack_id!r}; expected one of {attacks.ATTACK_IDS}"
        )
    phi = config.phi
    misses = [0]
    attack_id = config.attack_id
    if attack_id == "inner-shuffle":
        allow = config.allow_identity_shuffle
        fn = lambda w, s: attacks.inner_shuffle(w, s, allow)
    elif attack_id == "full-shuffle":
        allow = config.allow_identity_shuffle
        fn = lambda w, s: attacks.full_shuffle(w, s, allow)
    elif attack_id == "intrude":
        alphabet = (
            attacks.INTRUDER_SYMBOLS_NO_SPACE
            if fmt == TAGGED
            else attacks.INTRUDER_SYMBOLS
        )
        fn = lambda w, s: attacks.intrude(w, phi, s, alphabet)
    elif attack_id == "disemvowel":
        fn = lambda w, s: attacks.disemvowel(w)
    elif attack_id == "truncate":
        fn = lambda w, s: attacks.truncate(w)
    elif attack_id == "segment":
        fn = None
    elif attack_id == "keyboard-typo":
        fn = lambda w, s: attacks.keyboard_typo(w, phi, s)
    elif attack_id == "natural-typo":
        if resources.typo_dict is None:
            raise MissingResourceError("natural-typo needs a typo dictionary")
        table = resources.typo_dict
        fn = lambda w, s: attacks.natural_typo(w, table, s)
    elif attack_id == "phonetic":
        if resources.phonetic is None:
            raise MissingResourceError("phonetic needs a pronunciation dictionary")
        backend = resources.phonetic
        fn = lambda w, s: attacks.phonetic_attack(w, backend, s)
    elif attack_id == "visual":
        if resources.visual_table is None:
            raise MissingResourceError("visual needs a neighbor table")
        table = resources.visual_table
        fn = lambda w, s: attacks.visual_attack(w, phi, table, s, misses)
    else:  # pragma: no cover - registry and branches stay in sync
        raise AssertionError(attack_id)
    return spec, fn, misses


class PerturbationRun:
    """One configured attack over one corpus; reusable across sample batches."""

    def __init__(
        self,
        config: PerturbationConfig,
        fmt: str,
        track_distance: bool = False,
        resources: Resources | None = None,
    ):
        self.config = config
        self.fmt = fmt
        self.track_distance = track_distance
        if resources is None:
            resources = load_resources(
                attacks.REGISTRY[config.attack_id].needs
                if config.attack_id in attacks.REGISTRY
                else (),
                config.resources,
            )
        self.spec, self.word_fn, self.misses = bind_attack(config, fmt, resources)
        self.report = AttackReport()
        self._distance_total = 0.0

    def perturb_one(self, sample: Sample, index: int) -> Sample:
        stream = derive_stream(self.config.seed, index)
        result, trace = run_protocol(
            sample, self.config.p, self.spec, self.word_fn, stream, self.config.phi
        )
        rep = self.report
        rep.samples_total += 1
        rep.tokens_total += len(sample.all_tokens())
        rep.tokens_attacked += len(trace.attacked_indices)
        rep.tokens_modified += len(trace.modified_indices)
        if self.track_distance:
            clean_text = sample.text()
            if trace.modified_indices:
                self._distance_total += levenshtein(clean_text, result.text()) / max(
                    1, len(clean_text)
                )
            rep.mean_norm_edit_distance = self._distance_total / rep.samples_total
        return result

    def perturb(self, samples: Iterable[Sample], start_index: int = 0) -> Iterator[Sample]:
        for index, sample in enumerate(samples, start=start_index):
            yield self.perturb_one(sample, index)


_WORKER_RUN: PerturbationRun | None = None


def _worker_init(config: PerturbationConfig, fmt: str, track_distance: bool) -> None:
    global _WORKER_RUN
    _WORKER_RUN = PerturbationRun(config, fmt, track_distance)


def _worker_chunk(job: tuple[int, list[Sample]]):
    start, chunk = job
    run = _WORKER_RUN
    run.report = AttackReport()
    run._distance_total = 0.0
    run.misses[0] = 0
    out = [run.perturb_one(s, start + i) for i, s in enumerate(chunk)]
    return out, run.report, run._distance_total, run.misses[0]


def _chunked(samples: Iterable[Sample], size: int) -> Iterator[tuple[int, list[Sample]]]:
    it = iter(samples)
    start = 0
    while True:
        chunk = list(itertools.islice(it, size))
        if not chunk:
            return
        yield start, chunk
        start += len(chunk)


def perturb_corpus(
    samples: Iterable[Sample],
    config: PerturbationConfig,
    fmt: str,
    jobs: int = 1,
    track_distance: bool = False,
    resources: Resources | None = None,
) -> tuple[Iterator[Sample], Callable[[], AttackReport]]:
    """Perturb a sample stream; returns (perturbed iterator, report getter).

    The report getter is valid once the iterator is exhausted.  With jobs > 1
    chunks are fanned out to a process pool; outputs keep input order and are
    byte-identical to the sequential run.
    """
    if jobs <= 1:
        run = PerturbationRun(config, fmt, track_distance, resources)

        def finish() -> AttackReport:
            if run.misses[0]:
                logging.getLogger(__name__).warning(
                    "%d characters had no visual neighbors and were left unchanged",
                    run.misses[0],
                )
            return run.report

        return run.perturb(samples), finish

    total = AttackReport()
    state = {"distance": 0.0, "misses": 0}

    def generate() -> Iterator[Sample]:
        ctx = multiprocessing.get_context("spawn")
        with ctx.Pool(
            jobs, initializer=_worker_init, initargs=(config, fmt, track_distance)
        ) as pool:
            for out, rep, dist, misses in pool.imap(
                _worker_chunk, _chunked(samples, _CHUNK)
            ):
                total.samples_total += rep.samples_total
                total.tokens_total += rep.tokens_total
                total.tokens_attacked += rep.tokens_attacked
                total.tokens_modified += rep.tokens_modified
                state["distance"] += dist
                state["misses"] += misses
                yield from out

    def finish() -> AttackReport:
        if total.samples_total and track_distance:
            total.mean_norm_edit_distance = state["distance"] / total.samples_total
        if state["misses"]:
            logging.getLogger(__name__).warning(
                "%d characters had no visual neighbors and were left unchanged",
                state["misses"],
            )
        return total

    return generate(), finish
