"""Command-line toolkit.

Subcommands: attack (one perturbed corpus), sweep (the full attacker x level
benchmark), mix (adversarial-training mixtures), stats (perturbation
magnitude), metrics (score arithmetic), phon (similarity probe), and
build-neighbors (visual kNN tables from glyph bitmaps).

Exit codes: 0 success, 1 I/O or parse errors, 2 flag/validation errors,
3 sweep finished but skipped attackers with unloadable resources.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .attacks import ATTACK_IDS, REGISTRY
from .corpus_io import format_sample, read_corpus, write_corpus, write_report
from .errors import (
    CorpusParseError,
    DelimiterCollisionError,
    DuplicateCodepointError,
    EmptyWordError,
    ExcludedAttackerAbsentError,
    LengthMismatchError,
    MissingResourceError,
    MissingShieldedScoreError,
    SegmentOnTaggedError,
    TooFewGlyphsError,
    ZeroCleanScoreError,
)
from .metrics import (
    ScoreRecord,
    build_mixture,
    corpus_stats,
    defense_delta,
    relative_score,
)
from .phonetics import classify, phoneme_distance
from .pipeline import perturb_corpus
from .resource_loader import load_resources, resolve_resource
from .rng import derive_stream
from .sample import FORMATS, PLAIN, TAGGED, PerturbationConfig
from .visual import build_neighbors, load_bitmaps, write_neighbor_table

_RESOURCE_FLAGS = ("typo-dict", "phon-dict", "homophones", "visual-table")


def _add_resource_flags(parser: argparse.ArgumentParser) -> None:
    for flag in _RESOURCE_FLAGS:
        parser.add_argument(f"--{flag}", metavar="PATH", default=None)


def _resource_paths(args: argparse.Namespace) -> dict[str, str]:
    paths = {}
    for flag in _RESOURCE_FLAGS:
        value = getattr(args, flag.replace("-", "_"))
        if value:
            paths[flag] = value
    return paths


def _atomic_write(path: str, write_fn) -> None:
    tmp = path + ".part"
    try:
        write_fn(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def _write_manifest(out_path: str, payload: dict) -> None:
    with open(out_path + ".manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _make_config(args: argparse.Namespace, attacker: str, p: float) -> PerturbationConfig:
    return PerturbationConfig(
        attack_id=attacker,
        p=p,
        phi=args.phi,
        seed=args.seed,
        resources=_resource_paths(args),
        allow_identity_shuffle=args.allow_identity_shuffle,
    )


def _run_attack_file(
    config: PerturbationConfig,
    fmt: str,
    in_path: str,
    out_path: str,
    jobs: int,
    report_path: str | None = None,
    resources=None,
) -> int:
    t0 = time.perf_counter()
    samples = read_corpus(in_path, fmt)
    out_iter, finish = perturb_corpus(
        samples,
        config,
        fmt,
        jobs=jobs,
        track_distance=report_path is not None,
        resources=resources,
    )
    counted = [0]

    def write(tmp: str) -> None:
        counted[0] = write_corpus(out_iter, tmp, fmt)

    _atomic_write(out_path, write)
    report = finish()
    if report_path is not None:
        write_report(report, report_path, config.attack_id, config.p, config.phi, config.seed)
    resolved = {}
    for name in REGISTRY[config.attack_id].needs:
        resolved[name] = os.path.abspath(resolve_resource(name, config.resources))
    _write_manifest(
        out_path,
        {
            "tool": "zeroe",
            "version": __version__,
            "command": "attack",
            "attacker": config.attack_id,
            "p": config.p,
            "phi": config.phi,
            "seed": config.seed,
            "format": fmt,
            "allow_identity_shuffle": config.allow_identity_shuffle,
            "input": os.path.abspath(in_path),
            "output": os.path.abspath(out_path),
            "resources": resolved,
            "samples": counted[0],
            "duration_s": round(time.perf_counter() - t0, 3),
        },
    )
    return counted[0]


def cmd_attack(args: argparse.Namespace) -> int:
    if args.attacker not in ATTACK_IDS:
        raise ValueError(f"unknown attacker {args.attacker!r}; choose from {ATTACK_IDS}")
    if args.attacker == "segment" and args.format == TAGGED:
        raise SegmentOnTaggedError("segment cannot run on tagged corpora")
    config = _make_config(args, args.attacker, args.level)
    _run_attack_file(
        config, args.format, args.infile, args.out, args.jobs, args.report
    )
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    attackers = args.attackers.split(",") if args.attackers else list(ATTACK_IDS)
    for attacker in attackers:
        if attacker not in ATTACK_IDS:
            raise ValueError(f"unknown attacker {attacker!r}; choose from {ATTACK_IDS}")
    levels = [token.strip() for token in args.levels.split(",") if token.strip()]
    if not levels:
        raise ValueError("--levels must name at least one perturbation level")
    for token in levels:
        p = float(token)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"level {token} out of [0,1]")
    os.makedirs(args.out, exist_ok=True)
    ext = "txt" if args.format == PLAIN else "tsv"
    paths = _resource_paths(args)
    skipped = []
    for attacker in attackers:
        if attacker == "segment" and args.format == TAGGED:
            continue  # merged tokens would have no tag
        try:
            resources = load_resources(REGISTRY[attacker].needs, paths)
        except (MissingResourceError, CorpusParseError, OSError) as exc:
            print(f"warning: skipping {attacker}: {exc}", file=sys.stderr)
            skipped.append(attacker)
            continue
        for token in levels:
            config = _make_config(args, attacker, float(token))
            out_path = os.path.join(args.out, f"{attacker}.{token}.{ext}")
            _run_attack_file(
                config, args.format, args.infile, out_path, args.jobs,
                resources=resources,
            )
    return 3 if skipped else 0


def _scan_sweep_dir(sweep_dir: str) -> list[tuple[str, str, str]]:
    """(attacker, level string, path) triples found in a sweep directory."""
    entries = []
    for fname in sorted(os.listdir(sweep_dir)):
        if fname.endswith(".manifest.json"):
            continue
        for attacker in ATTACK_IDS:
            prefix = attacker + "."
            if fname.startswith(prefix):
                rest = fname[len(prefix):]
                level, dot, _ext = rest.rpartition(".")
                if dot and level:
                    entries.append((attacker, level, os.path.join(sweep_dir, fname)))
                break
    return entries


def cmd_mix(args: argparse.Namespace) -> int:
    if args.mode == "loo" and not args.exclude:
        raise ValueError("--mode loo needs --exclude <attacker>")
    if args.mode == "levels" and not args.attacker:
        raise ValueError("--mode levels needs --attacker <id>")
    t0 = time.perf_counter()
    found = _scan_sweep_dir(args.sweep_dir)
    if args.mode == "levels":
        found = [e for e in found if e[0] == args.attacker]
    if not found:
        raise FileNotFoundError(f"no sweep corpora found in {args.sweep_dir}")
    corpora = [
        (attacker, float(level), read_corpus(path, args.format))
        for attacker, level, path in found
    ]
    stream = derive_stream(args.seed, 0)
    mixed = build_mixture(corpora, args.mode, stream, exclude=args.exclude)
    sources_path = args.out + ".sources.tsv"
    blank = "\n" if args.format == TAGGED else ""
    counted = [0]

    def write(tmp: str) -> None:
        with open(tmp, "w", encoding="utf-8", newline="\n") as out_fh, open(
            sources_path + ".part", "w", encoding="utf-8", newline="\n"
        ) as src_fh:
            for index, (sample, (attacker, level)) in enumerate(mixed):
                out_fh.write(format_sample(sample, index) + "\n" + blank)
                src_fh.write(f"{attacker}\t{level}\n")
                counted[0] += 1

    try:
        _atomic_write(args.out, write)
        os.replace(sources_path + ".part", sources_path)
    finally:
        if os.path.exists(sources_path + ".part"):
            os.remove(sources_path + ".part")
    _write_manifest(
        args.out,
        {
            "tool": "zeroe",
            "version": __version__,
            "command": "mix",
            "mode": args.mode,
            "attacker": args.attacker,
            "exclude": args.exclude,
            "seed": args.seed,
            "format": args.format,
            "sweep_dir": os.path.abspath(args.sweep_dir),
            "inputs": [os.path.abspath(path) for _, _, path in found],
            "output": os.path.abspath(args.out),
            "samples": counted[0],
            "duration_s": round(time.perf_counter() - t0, 3),
        },
    )
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    stats = corpus_stats(
        read_corpus(args.clean, args.format), read_corpus(args.perturbed, args.format)
    )
    payload = {
        "samples": stats["samples"],
        "corpus_magnitude": float(f"{stats['corpus_magnitude']:.6g}"),
        "tokens_total": stats["tokens_total"],
        "tokens_modified": stats["tokens_modified"],
        "token_modification_rate": float(f"{stats['token_modification_rate']:.6g}"),
    }
    print(json.dumps(payload))
    return 0


def cmd_metrics(args: argparse.Namespace) -> int:
    rec = ScoreRecord(
        clean=args.clean,
        attacked=args.score,
        shielded=getattr(args, "shielded", None),
    )
    value = relative_score(rec) if args.metric == "rel-score" else defense_delta(rec)
    print(f"{value:.6f}")
    return 0


def cmd_phon(args: argparse.Namespace) -> int:
    resources = load_resources(("phon-dict", "homophones"), _resource_paths(args))
    backend = resources.phonetic
    p1, p2 = backend.g2p(args.word1), backend.g2p(args.word2)
    d, delta = phoneme_distance(p1, p2)
    print(
        json.dumps(
            {
                "word1": args.word1,
                "phonemes1": p1,
                "word2": args.word2,
                "phonemes2": p2,
                "distance": d,
                "delta": float(f"{delta:.6g}"),
                "class": str(classify(delta)),
            }
        )
    )
    return 0


def cmd_build_neighbors(args: argparse.Namespace) -> int:
    bitmaps = load_bitmaps(args.bitmaps)
    if args.k > len(bitmaps) - 1:
        print(
            f"warning: k={args.k} exceeds glyph count - 1; lists truncated to "
            f"{len(bitmaps) - 1}",
            file=sys.stderr,
        )
    table = build_neighbors(bitmaps, args.k)
    _atomic_write(args.out, lambda tmp: write_neighbor_table(table, tmp))
    return 0


def _uint64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError("probability must be in [0, 1]")
    return value


def _add_common_attack_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--phi", type=_probability, default=None)
    parser.add_argument("--seed", type=_uint64, default=0)
    parser.add_argument("--format", choices=FORMATS, default=PLAIN)
    parser.add_argument("--in", dest="infile", required=True, metavar="PATH")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--allow-identity-shuffle", action="store_true")
    _add_resource_flags(parser)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zeroe",
        description="Deterministic character-level adversarial text perturbation",
    )
    parser.add_argument("--version", action="version", version=f"zeroe {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_attack = sub.add_parser("attack", help="perturb one corpus with one attacker")
    p_attack.add_argument("--attacker", required=True)
    p_attack.add_argument("--level", type=_probability, required=True)
    p_attack.add_argument("--out", required=True, metavar="PATH")
    p_attack.add_argument("--report", default=None, metavar="PATH")
    _add_common_attack_flags(p_attack)
    p_attack.set_defaults(func=cmd_attack)

    p_sweep = sub.add_parser("sweep", help="emit one corpus per attacker and level")
    p_sweep.add_argument("--attackers", default=None, metavar="A,B,...")
    p_sweep.add_argument("--levels", default="0.2,0.5,0.8", metavar="P,P,...")
    p_sweep.add_argument("--out", required=True, metavar="DIR")
    _add_common_attack_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_mix = sub.add_parser("mix", help="build an adversarial-training mixture")
    p_mix.add_argument("--mode", choices=("levels", "loo"), required=True)
    p_mix.add_argument("--attacker", default=None, help="levels mode: whose levels to mix")
    p_mix.add_argument("--exclude", default=None, help="loo mode: attacker to leave out")
    p_mix.add_argument("--sweep-dir", required=True, metavar="DIR")
    p_mix.add_argument("--seed", type=_uint64, default=0)
    p_mix.add_argument("--format", choices=FORMATS, default=PLAIN)
    p_mix.add_argument("--out", required=True, metavar="PATH")
    p_mix.set_defaults(func=cmd_mix)

    p_stats = sub.add_parser("stats", help="perturbation magnitude of a corpus pair")
    p_stats.add_argument("--clean", required=True, metavar="PATH")
    p_stats.add_argument("--perturbed", required=True, metavar="PATH")
    p_stats.add_argument("--format", choices=FORMATS, default=PLAIN)
    p_stats.set_defaults(func=cmd_stats)

    p_metrics = sub.add_parser("metrics", help="relative score and defense delta")
    metrics_sub = p_metrics.add_subparsers(dest="metric", required=True)
    p_rel = metrics_sub.add_parser("rel-score")
    p_rel.add_argument("--clean", type=float, required=True)
    p_rel.add_argument("--score", type=float, required=True)
    p_rel.set_defaults(func=cmd_metrics)
    p_delta = metrics_sub.add_parser("delta")
    p_delta.add_argument("--clean", type=float, required=True)
    p_delta.add_argument("--score", type=float, required=True)
    p_delta.add_argument("--shielded", type=float, required=True)
    p_delta.set_defaults(func=cmd_metrics)

    p_phon = sub.add_parser("phon", help="phonetic similarity probe")
    phon_sub = p_phon.add_subparsers(dest="phon_command", required=True)
    p_sim = phon_sub.add_parser("sim")
    p_sim.add_argument("word1")
    p_sim.add_argument("word2")
    _add_resource_flags(p_sim)
    p_sim.set_defaults(func=cmd_phon)

    p_build = sub.add_parser(
        "build-neighbors", help="visual neighbor table from glyph bitmaps"
    )
    p_build.add_argument("--bitmaps", required=True, metavar="PATH")
    p_build.add_argument("--k", type=int, default=20)
    p_build.add_argument("--out", required=True, metavar="PATH")
    p_build.set_defaults(func=cmd_build_neighbors)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (
        SegmentOnTaggedError,
        ZeroCleanScoreError,
        MissingShieldedScoreError,
        ExcludedAttackerAbsentError,
        EmptyWordError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        CorpusParseError,
        DelimiterCollisionError,
        MissingResourceError,
        LengthMismatchError,
        DuplicateCodepointError,
        TooFewGlyphsError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
