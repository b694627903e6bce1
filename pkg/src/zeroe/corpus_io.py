"""Reading and writing the four corpus formats, plus machine-readable run
reports.

All formats are UTF-8 with tab-delimited columns; readers stream one sample
at a time so corpus size never bounds memory.  Output uses LF line endings;
CRLF input is tolerated.

    plain       one sample per line, tokens split on whitespace runs
    tagged      `token<TAB>tag` lines, blank line ends a sample
    pair        `premise<TAB>hypothesis<TAB>label`, one sample per line
    multilabel  `text<TAB>label1,label2,...`, one sample per line
"""

from __future__ import annotations

import json
from typing import IO, Iterable, Iterator

from .errors import CorpusParseError, DelimiterCollisionError
from .sample import FORMATS, MULTILABEL, PAIR, PLAIN, TAGGED, AttackReport, Sample


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise ValueError(f"unknown corpus format {fmt!r}; expected one of {FORMATS}")


def _iter_plain(fh: IO[str]) -> Iterator[Sample]:
    for line in fh:
        yield Sample(kind=PLAIN, tokens=line.split())


def _iter_tagged(fh: IO[str]) -> Iterator[Sample]:
    tokens: list[str] = []
    tags: list[str] = []
    open_sample = False
    for lineno, raw in enumerate(fh, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line:
            if not open_sample:
                raise CorpusParseError("blank line without an open sample", lineno)
            yield Sample(kind=TAGGED, tokens=tokens, tags=tags)
            tokens, tags, open_sample = [], [], False
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise CorpusParseError("expected token<TAB>tag", lineno)
        tokens.append(parts[0])
        tags.append(parts[1])
        open_sample = True
    if open_sample:
        yield Sample(kind=TAGGED, tokens=tokens, tags=tags)


def _iter_pair(fh: IO[str]) -> Iterator[Sample]:
    for lineno, raw in enumerate(fh, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        parts = line.split("\t")
        if len(parts) != 3:
            raise CorpusParseError(
                f"expected premise<TAB>hypothesis<TAB>label, got {len(parts)} columns",
                lineno,
            )
        premise, hypothesis = parts[0].split(), parts[1].split()
        if not premise or not hypothesis:
            raise CorpusParseError("pair sample with an empty side", lineno)
        yield Sample(
            kind=PAIR, tokens=premise, pair_tokens=hypothesis, labels=[parts[2]]
        )


def _iter_multilabel(fh: IO[str]) -> Iterator[Sample]:
    for lineno, raw in enumerate(fh, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        parts = line.split("\t")
        if len(parts) != 2:
            raise CorpusParseError(
                f"expected text<TAB>labels, got {len(parts)} columns", lineno
            )
        labels = [l for l in parts[1].split(",") if l] if parts[1] else []
        yield Sample(kind=MULTILABEL, tokens=parts[0].split(), labels=labels)


_READERS = {
    PLAIN: _iter_plain,
    TAGGED: _iter_tagged,
    PAIR: _iter_pair,
    MULTILABEL: _iter_multilabel,
}


def read_corpus(path: str, fmt: str) -> Iterator[Sample]:
    """Stream samples from a corpus file."""
    _check_format(fmt)
    with open(path, encoding="utf-8") as fh:
        yield from _READERS[fmt](fh)


def _no_tabs(cells: Iterable[str], index: int) -> None:
    for cell in cells:
        if "\t" in cell or "\n" in cell:
            raise DelimiterCollisionError(
                f"sample {index}: field {cell!r} contains the column delimiter"
            )


def format_sample(sample: Sample, index: int = 0) -> str:
    """Serialize one sample to its file representation (without trailing LF)."""
    if sample.kind == PLAIN:
        return " ".join(sample.tokens)
    if sample.kind == TAGGED:
        _no_tabs(sample.tokens, index)
        _no_tabs(sample.tags or (), index)
        lines = [f"{tok}\t{tag}" for tok, tag in zip(sample.tokens, sample.tags)]
        return "\n".join(lines)
    if sample.kind == PAIR:
        label = (sample.labels or [""])[0]
        cells = (" ".join(sample.tokens), " ".join(sample.pair_tokens or []), label)
        _no_tabs(cells, index)
        return "\t".join(cells)
    if sample.kind == MULTILABEL:
        cells = (" ".join(sample.tokens), ",".join(sample.labels or []))
        _no_tabs(cells, index)
        return "\t".join(cells)
    raise ValueError(f"unknown sample kind {sample.kind!r}")


def write_corpus(samples: Iterable[Sample], path: str, fmt: str) -> int:
    """Write samples to a corpus file; returns the sample count."""
    _check_format(fmt)
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for index, sample in enumerate(samples):
            if sample.kind != fmt:
                raise ValueError(
                    f"sample {index} has kind {sample.kind!r}, expected {fmt!r}"
                )
            fh.write(format_sample(sample, index))
            fh.write("\n")
            if fmt == TAGGED:
                fh.write("\n")
            count += 1
    return count


def report_dict(
    report: AttackReport, attack_id: str, p: float, phi: float, seed: int
) -> dict:
    """Report payload with a fixed key order for diff-stability."""
    return {
        "samples_total": report.samples_total,
        "tokens_total": report.tokens_total,
        "tokens_attacked": report.tokens_attacked,
        "tokens_modified": report.tokens_modified,
        "mean_norm_edit_distance": report.mean_norm_edit_distance,
        "attack_id": attack_id,
        "p": p,
        "phi": phi,
        "seed": seed,
    }


def write_report(
    report: AttackReport, path: str, attack_id: str, p: float, phi: float, seed: int
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report_dict(report, attack_id, p, phi, seed), fh, indent=2)
        fh.write("\n")
