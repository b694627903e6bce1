"""zeroe: deterministic character-level adversarial text perturbation.

Ten attacks (shuffles, intruders, disemvoweling, truncation, segmentation,
keyboard and natural typos, phonetic and visual substitutions), a seeded
selection protocol, corpus I/O for four task formats, evaluation arithmetic,
and adversarial-training data mixtures.
"""

__version__ = "0.1.0"

from .attacks import ATTACK_IDS
from .errors import ZeroeError
from .estimator import CorpusPerturber
from .metrics import (
    ScoreRecord,
    build_mixture,
    corpus_magnitude,
    defense_delta,
    levenshtein,
    relative_score,
)
from .phonetics import PhoneticBackend, SimilarityClass, classify, phoneme_distance
from .pipeline import PerturbationRun, perturb_corpus
from .protocol import run_protocol, target_count
from .rng import RandomStream, derive_stream
from .sample import AttackReport, PerturbationConfig, Sample
from .visual import build_neighbors, builtin_table, load_neighbor_table

__all__ = [
    "ATTACK_IDS",
    "AttackReport",
    "CorpusPerturber",
    "PerturbationConfig",
    "PerturbationRun",
    "PhoneticBackend",
    "RandomStream",
    "Sample",
    "ScoreRecord",
    "SimilarityClass",
    "ZeroeError",
    "build_mixture",
    "build_neighbors",
    "builtin_table",
    "classify",
    "corpus_magnitude",
    "defense_delta",
    "derive_stream",
    "levenshtein",
    "load_neighbor_table",
    "perturb_corpus",
    "phoneme_distance",
    "relative_score",
    "run_protocol",
    "target_count",
    "__version__",
]
