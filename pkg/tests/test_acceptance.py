"""End-to-end acceptance checks, one test per criterion.

Run with `pytest tests/test_acceptance.py -v -s` to get one printed
pass/fail line per criterion alongside the pytest verdicts.
"""

import os
import random
import resource
import string
import subprocess
import sys
import time
from functools import lru_cache

import numpy as np
import pytest

from zeroe.attacks import (
    ATTACK_IDS,
    KEYBOARD_ADJACENCY,
    REGISTRY,
    disemvowel,
    full_shuffle,
    inner_shuffle,
    intrude,
    keyboard_typo,
    natural_typo,
    phonetic_attack,
    segment,
    truncate,
    visual_attack,
)
from zeroe.cli import main
from zeroe.metrics import (
    ScoreRecord,
    corpus_magnitude,
    defense_delta,
    relative_score,
)
from zeroe.phonetics import SimilarityClass, classify, phoneme_distance
from zeroe.pipeline import PerturbationRun
from zeroe.protocol import run_protocol, target_count
from zeroe.resource_loader import load_resources
from zeroe.rng import derive_stream
from zeroe.sample import PerturbationConfig, Sample
from zeroe.visual import build_neighbors, builtin_table


def _pass(number, text):
    print(f"\nACCEPTANCE {number} PASS: {text}")


@pytest.fixture(scope="module")
def phonetic_backend():
    return load_resources(("phon-dict", "homophones"), {}).phonetic


@pytest.fixture(scope="module")
def typo_dict():
    return load_resources(("typo-dict",), {}).typo_dict


def _make_corpus(n_sentences, seed, typo_words, homophone_words):
    """Fixed synthetic corpus mixing plain vocabulary with resource words."""
    rnd = random.Random(seed)
    vocab = (
        "the quick brown fox jumps over lazy dog cats run fast slowly "
        "green ideas sleep furiously under bright winter skies while "
        "children play outside near water and old trees grow tall"
    ).split()
    vocab = vocab + typo_words + homophone_words
    return [
        Sample(
            kind="plain",
            tokens=[rnd.choice(vocab) for _ in range(rnd.randint(6, 14))],
        )
        for _ in range(n_sentences)
    ]


# --------------------------------------------------------------- criterion 1


def test_acceptance_01_metric_oracle():
    t0 = time.perf_counter()
    rel_cases = [
        (96.65, 18.15, 0.187791),
        (0.93, 0.48, 0.516129),
        (96.65, 82.14, 0.849871),
        (90.41, 82.80, 0.915828),
        (0.93, 0.88, 0.946237),
        (90.41, 77.53, 0.857538),
        (96.65, 44.69, 0.462390),
        (90.41, 65.60, 0.725583),
    ]
    delta_cases = [
        (96.65, 18.15, 19.44, 0.013347),
        (90.41, 53.07, 70.77, 0.195775),
        (90.41, 44.16, 61.83, 0.195443),
        (0.93, 0.48, 0.75, 0.290323),
        (96.65, 50.06, 56.78, 0.069529),
        (96.65, 89.09, 87.82, -0.013140),
    ]
    for clean, attacked, expected in rel_cases:
        assert abs(relative_score(ScoreRecord(clean, attacked)) - expected) <= 1e-4
    for clean, attacked, shielded, expected in delta_cases:
        rec = ScoreRecord(clean, attacked, shielded)
        assert abs(defense_delta(rec) - expected) <= 1e-4
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    _pass(1, f"{len(rel_cases) + len(delta_cases)} table spot values within 1e-4 "
             f"({elapsed * 1000:.1f} ms)")


# --------------------------------------------------------------- criterion 2


def test_acceptance_02_deterministic_transforms():
    assert disemvowel("Adversarial") == "dvrsrl"
    assert disemvowel("harmless") == "hrmlss"
    assert truncate("Adversarial") == "Adversaria"
    _pass(2, "disemvowel/truncate match their documented example strings exactly")


# --------------------------------------------------------------- criterion 3


def test_acceptance_03_protocol_bound():
    t0 = time.perf_counter()
    spec = REGISTRY["keyboard-typo"]
    run = PerturbationRun(
        PerturbationConfig(attack_id="keyboard-typo", p=0.5, seed=0), "plain"
    )
    tokens = ["sample"] * 20
    runs = 10_000
    for p in (0.2, 0.5, 0.8):
        target = target_count(20, p)
        total_attacked = 0
        for seed in range(runs):
            stream = derive_stream(seed, 0)
            _, trace = run_protocol(
                Sample(kind="plain", tokens=list(tokens)), p, spec, run.word_fn, stream
            )
            attacked = len(trace.attacked_indices)
            assert attacked <= target
            total_attacked += attacked
        mean_fraction = total_attacked / (runs * 20)
        assert abs(mean_fraction - p) <= 0.05, (p, mean_fraction)
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    _pass(3, f"attacked count bounded by target over 3x{runs} runs, mean fraction "
             f"within 0.05 of p ({elapsed:.1f} s)")


# --------------------------------------------------------------- criterion 4


def test_acceptance_04_per_attack_invariants(phonetic_backend, typo_dict):
    t0 = time.perf_counter()
    rnd = random.Random(99)
    letters = string.ascii_letters
    visual = builtin_table()
    typo_keys = sorted(typo_dict)
    phon_keys = sorted(phonetic_backend.homophones) + ["phone", "photo", "attack"]

    def random_word():
        return "".join(rnd.choice(letters) for _ in range(rnd.randint(1, 12)))

    n = 1000
    violations = 0

    for i in range(n):
        word = random_word()
        stream = derive_stream(1000 + i, 0)

        if len(word) >= 3:
            out = inner_shuffle(word, stream)
            if out[0] != word[0] or out[-1] != word[-1]:
                violations += 1
            if sorted(out) != sorted(word):
                violations += 1
        if len(word) >= 2:
            out = full_shuffle(word, stream)
            if sorted(out) != sorted(word):
                violations += 1

        out = truncate(word)
        if len(word) >= 3 and not (len(out) == len(word) - 1 and word.startswith(out)):
            violations += 1

        out = disemvowel(word)
        if REGISTRY["disemvowel"].eligible(word):
            if set(out) & set("aeiouAEIOU"):
                violations += 1
            if out != "".join(c for c in word if c not in "aeiouAEIOU"):
                violations += 1
        elif out != word:
            violations += 1

        if len(word) >= 3:
            out = intrude(word, rnd.random(), stream)
            inserted = set(out) - set(word)
            if len(inserted) != 1 or out.replace(inserted.pop(), "") != word:
                violations += 1

        out = keyboard_typo(word, rnd.random(), stream)
        if len(out) != len(word):
            violations += 1
        for a, b in zip(word, out):
            if a != b and b.lower() not in KEYBOARD_ADJACENCY.get(a.lower(), ""):
                violations += 1

        out = visual_attack(word, rnd.random(), visual, stream)
        if len(out) != len(word):
            violations += 1
        for a, b in zip(word, out):
            if a != b and b not in visual.get(a, ()):
                violations += 1

        typo_word = rnd.choice(typo_keys) if i % 2 else word
        out = natural_typo(typo_word, typo_dict, stream)
        if out != typo_word and out not in typo_dict.get(typo_word.lower(), ()):
            violations += 1

        phon_word = rnd.choice(phon_keys) if i % 2 else word
        out = phonetic_attack(phon_word, phonetic_backend, stream)
        if out != phon_word:
            _, delta = phoneme_distance(
                phonetic_backend.g2p(phon_word), phonetic_backend.g2p(out)
            )
            if classify(delta) > SimilarityClass.VERY_SIMILAR:
                violations += 1

        tokens = [random_word() for _ in range(rnd.randint(2, 8))]
        merged, _ = segment(Sample(kind="plain", tokens=list(tokens)), rnd.random(), stream)
        if "".join(merged.tokens) != "".join(tokens):
            violations += 1

    elapsed = time.perf_counter() - t0
    assert violations == 0
    assert elapsed < 30.0
    _pass(4, f"zero invariant violations over {n} random words per attack "
             f"({elapsed:.1f} s)")


# --------------------------------------------------------------- criterion 5


def test_acceptance_05_phonetics_oracle(phonetic_backend):
    def brute(a, b):
        @lru_cache(maxsize=None)
        def go(i, j):
            if i == len(a):
                return len(b) - j
            if j == len(b):
                return len(a) - i
            return min(
                go(i + 1, j) + 1, go(i, j + 1) + 1, go(i + 1, j + 1) + (a[i] != b[j])
            )

        return go(0, 0)

    rnd = random.Random(55)
    symbols = ["AA", "AE", "AY", "B", "K", "T", "SH", "IY"]
    for _ in range(500):
        p1 = tuple(rnd.choice(symbols) for _ in range(rnd.randint(1, 6)))
        p2 = tuple(rnd.choice(symbols) for _ in range(rnd.randint(1, 6)))
        d, _ = phoneme_distance(list(p1), list(p2))
        assert d == brute(p1, p2)

    expected = {
        0.0: SimilarityClass.IDENTICAL,
        0.05: SimilarityClass.VERY_SIMILAR,
        0.1: SimilarityClass.SIMILAR,
        0.29: SimilarityClass.SIMILAR,
        0.3: SimilarityClass.DIFFERENT,
        1.2: SimilarityClass.DIFFERENT,
    }
    for delta, cls in expected.items():
        assert classify(delta) == cls, delta

    pairs = 0
    for word, others in phonetic_backend.homophones.items():
        for other in others:
            assert (
                phonetic_backend.similarity_class(word, other)
                == SimilarityClass.IDENTICAL
            )
            pairs += 1
    assert pairs > 0
    _pass(5, f"500 distance oracles, 6 boundary classes, {pairs} homophone pairs "
             f"identical")


# --------------------------------------------------------------- criterion 6


def test_acceptance_06_cli_determinism(tmp_path, typo_dict, phonetic_backend):
    corpus = _make_corpus(
        1000, seed=17, typo_words=sorted(typo_dict)[:40],
        homophone_words=sorted(phonetic_backend.homophones)[:20],
    )
    in_path = str(tmp_path / "in.txt")
    with open(in_path, "w", encoding="utf-8") as fh:
        for sample in corpus:
            fh.write(" ".join(sample.tokens) + "\n")

    texts = {}
    for label, extra in {
        "first": ["--jobs", "1"],
        "second": ["--jobs", "1"],
        "parallel": ["--jobs", "3"],
    }.items():
        out = str(tmp_path / f"{label}.txt")
        rc = main(["attack", "--attacker", "intrude", "--level", "0.5",
                   "--seed", "77", "--in", in_path, "--out", out] + extra)
        assert rc == 0
        texts[label] = open(out, encoding="utf-8").read()
    assert texts["first"] == texts["second"]
    assert texts["first"] == texts["parallel"]
    _pass(6, "repeat and parallel runs byte-identical on a 1000-sentence corpus")


# --------------------------------------------------------------- criterion 7


def test_acceptance_07_monotone_magnitude(tmp_path, typo_dict, phonetic_backend):
    clean = _make_corpus(
        1000, seed=23, typo_words=sorted(typo_dict)[:60],
        homophone_words=sorted(phonetic_backend.homophones)[:30],
    )
    levels = (0.2, 0.5, 0.8)
    failures = []
    for attacker in ATTACK_IDS:
        magnitudes = []
        for p in levels:
            run = PerturbationRun(
                PerturbationConfig(attack_id=attacker, p=p, seed=31), "plain"
            )
            perturbed = [run.perturb_one(s, i) for i, s in enumerate(clean)]
            magnitudes.append(corpus_magnitude(clean, perturbed))
        if attacker == "phonetic":
            ok = magnitudes[0] <= magnitudes[1] <= magnitudes[2]
        else:
            ok = magnitudes[0] < magnitudes[1] < magnitudes[2]
        if not ok:
            failures.append((attacker, magnitudes))
    assert not failures, failures
    _pass(7, "corpus magnitude strictly increases across 0.2/0.5/0.8 for every "
             "attacker (phonetic: non-decreasing)")


# --------------------------------------------------------------- criterion 8


def test_acceptance_08_knn_builder_oracle():
    rnd = random.Random(77)
    chars = rnd.sample(string.ascii_letters + string.digits, 10)
    bitmaps = [
        (
            c,
            np.array(
                [[rnd.randint(0, 255) for _ in range(24)] for _ in range(24)]
            ),
        )
        for c in chars
    ]
    expected = {}
    for char, grid in bitmaps:
        scored = sorted(
            (
                int(np.sum((grid.astype(object) - other.astype(object)) ** 2)),
                ord(o),
                o,
            )
            for o, other in bitmaps
            if o != char
        )
        expected[char] = [entry[2] for entry in scored[:3]]
    assert build_neighbors(bitmaps, 3) == expected
    _pass(8, "kNN builder matches brute-force all-pairs sort with codepoint ties")


# --------------------------------------------------------------- criterion 9


def test_acceptance_09_sweep_throughput(tmp_path, typo_dict, phonetic_backend):
    corpus = _make_corpus(
        10_000, seed=41, typo_words=sorted(typo_dict)[:60],
        homophone_words=sorted(phonetic_backend.homophones)[:30],
    )
    in_path = str(tmp_path / "big.txt")
    with open(in_path, "w", encoding="utf-8") as fh:
        for sample in corpus:
            fh.write(" ".join(sample.tokens) + "\n")
    out_dir = str(tmp_path / "sweep")

    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "zeroe.cli", "sweep", "--in", in_path,
         "--out", out_dir, "--seed", "3"],
        capture_output=True,
        text=True,
    )
    elapsed = time.perf_counter() - t0
    assert proc.returncode == 0, proc.stderr
    corpora = [f for f in os.listdir(out_dir) if not f.endswith(".manifest.json")]
    assert len(corpora) == 30
    for fname in corpora:
        assert sum(1 for _ in open(os.path.join(out_dir, fname), encoding="utf-8")) >= 10_000
    child_rss_mb = resource.getrusage(resource.RUSAGE_CHILDREN).ru_maxrss / 1024
    assert elapsed < 60.0, f"sweep took {elapsed:.1f}s"
    assert child_rss_mb < 800, f"sweep peak RSS {child_rss_mb:.0f} MiB"
    _pass(9, f"full sweep over 10k sentences in {elapsed:.1f} s, "
             f"peak RSS {child_rss_mb:.0f} MiB")
