"""Scikit-learn style wrapper so perturbation composes with ML pipelines."""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .attacks import ATTACK_IDS, REGISTRY
from .pipeline import PerturbationRun
from .resource_loader import load_resources
from .sample import FORMATS, PLAIN, PerturbationConfig, Sample


class CorpusPerturber(BaseEstimator, TransformerMixin):
    """Deterministic character-level text perturber.

    Applies one of the ten catalogue attacks to each input at perturbation
    level ``p``.  Stateless in the learning sense: ``fit`` only validates
    parameters and loads resource tables, so the transformer can sit in a
    sklearn ``Pipeline`` in front of a tokenizer or vectorizer.

    Parameters
    ----------
    attacker : str (default: 'keyboard-typo')
        One of the ten attack ids: inner-shuffle, full-shuffle, intrude,
        disemvowel, truncate, segment, keyboard-typo, natural-typo,
        phonetic, visual.
    p : float (default: 0.5)
        Word-level perturbation probability in [0, 1]; the fraction of
        tokens per sample targeted for attack.
    phi : float or None (default: None)
        Character-level probability for the attacks that use one; defaults
        to ``p``.
    seed : int (default: 0)
        Global seed.  Sample i is perturbed with a stream derived from
        (seed, i), so results are reproducible and order-independent.
    fmt : str (default: 'plain')
        Corpus format of Sample inputs; plain strings are always treated
        as whitespace-tokenized plain samples.
    typo_dict, phon_dict, homophones, visual_table : str or None
        Resource file overrides; the builtin tables are used when None.
    allow_identity_shuffle : bool (default: False)
        Disable the non-identity redraw for the two shuffle attacks.

    Attributes
    ----------
    report_ : AttackReport
        Counters for the most recent ``transform`` call.
    """

    def __init__(
        self,
        attacker: str = "keyboard-typo",
        p: float = 0.5,
        phi: float | None = None,
        seed: int = 0,
        fmt: str = PLAIN,
        typo_dict: str | None = None,
        phon_dict: str | None = None,
        homophones: str | None = None,
        visual_table: str | None = None,
        allow_identity_shuffle: bool = False,
    ):
        self.attacker = attacker
        self.p = p
        self.phi = phi
        self.seed = seed
        self.fmt = fmt
        self.typo_dict = typo_dict
        self.phon_dict = phon_dict
        self.homophones = homophones
        self.visual_table = visual_table
        self.allow_identity_shuffle = allow_identity_shuffle

    def _config(self) -> PerturbationConfig:
        if self.attacker not in ATTACK_IDS:
            raise ValueError(
                f"attacker must be one of {ATTACK_IDS}, got {self.attacker!r}"
            )
        if self.fmt not in FORMATS:
            raise ValueError(f"fmt must be one of {FORMATS}, got {self.fmt!r}")
        paths = {
            "typo-dict": self.typo_dict,
            "phon-dict": self.phon_dict,
            "homophones": self.homophones,
            "visual-table": self.visual_table,
        }
        return PerturbationConfig(
            attack_id=self.attacker,
            p=self.p,
            phi=self.phi,
            seed=self.seed,
            resources={k: v for k, v in paths.items() if v},
            allow_identity_shuffle=self.allow_identity_shuffle,
        )

    def fit(self, X=None, y=None):
        """Validate parameters and load resource tables; returns self."""
        config = self._config()
        self.resources_ = load_resources(
            REGISTRY[config.attack_id].needs, config.resources
        )
        return self

    def transform(self, X):
        """Perturb a sequence of strings or Samples.

        Plain strings are whitespace-tokenized and returned as strings;
        Sample inputs come back as Samples.
        """
        if not hasattr(self, "resources_"):
            raise NotFittedError("call fit before transform")
        run = PerturbationRun(
            self._config(), self.fmt, track_distance=True, resources=self.resources_
        )
        out = []
        for index, item in enumerate(X):
            if isinstance(item, Sample):
                item.validate()
                out.append(run.perturb_one(item, index))
            else:
                sample = Sample(kind=PLAIN, tokens=str(item).split())
                out.append(" ".join(run.perturb_one(sample, index).all_tokens()))
        self.report_ = run.report
        return out
