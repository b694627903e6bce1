"""Resource resolution: explicit path, then the ZEROE_RESOURCES directory,
then the compiled-in defaults shipped with the package."""

from __future__ import annotations

import os
from contextlib import ExitStack
from dataclasses import dataclass
from importlib import resources as importlib_resources

from . import attacks, phonetics, visual
from .errors import MissingResourceError

# resource name -> filename looked up in ZEROE_RESOURCES and in the package
_FILENAMES = {
    "typo-dict": "natural_typos.txt",
    "phon-dict": "phonetic_dict.txt",
    "homophones": "homophones.txt",
    "visual-table": "visual_neighbors.txt",
    "g2p-rules": "g2p_rules.txt",
    "respell-rules": "respell_rules.txt",
}

RESOURCE_NAMES = tuple(_FILENAMES)


def resolve_resource(name: str, paths: dict[str, str]) -> str:
    """Filesystem path for a named resource.

    Raises MissingResourceError when an explicit or environment path does not
    exist; the builtin copy is the final fallback.
    """
    explicit = paths.get(name)
    if explicit:
        if not os.path.isfile(explicit):
            raise MissingResourceError(f"{name}: no such file: {explicit}")
        return explicit
    env_dir = os.environ.get("ZEROE_RESOURCES")
    if env_dir:
        candidate = os.path.join(env_dir, _FILENAMES[name])
        if os.path.isfile(candidate):
            return candidate
    with ExitStack() as stack:
        builtin = stack.enter_context(
            importlib_resources.as_file(
                importlib_resources.files("zeroe.resources").joinpath(_FILENAMES[name])
            )
        )
        if builtin.is_file():
            # Package data is materialized on disk for normal installs, so the
            # path stays valid after the context closes.
            return str(builtin)
    raise MissingResourceError(f"no builtin resource for {name}")


@dataclass
class Resources:
    """Loaded resource tables, immutable after construction."""

    typo_dict: dict[str, list[str]] | None = None
    phonetic: phonetics.PhoneticBackend | None = None
    visual_table: dict[str, list[str]] | None = None


def load_resources(needs: tuple[str, ...], paths: dict[str, str]) -> Resources:
    """Load exactly the tables an attack needs, honoring path overrides."""
    loaded = Resources()
    if "typo-dict" in needs:
        loaded.typo_dict = attacks.load_typo_dictionary(
            resolve_resource("typo-dict", paths)
        )
    if "phon-dict" in needs or "homophones" in needs:
        loaded.phonetic = phonetics.PhoneticBackend(
            dictionary=phonetics.load_phonetic_dictionary(
                resolve_resource("phon-dict", paths)
            ),
            homophones=phonetics.load_homophones(
                resolve_resource("homophones", paths)
            ),
            g2p_rules=phonetics.load_g2p_rules(resolve_resource("g2p-rules", paths)),
            respell_rules=phonetics.load_respell_rules(
                resolve_resource("respell-rules", paths)
            ),
        )
    if "visual-table" in needs:
        explicit = paths.get("visual-table") or (
            os.environ.get("ZEROE_RESOURCES")
            and os.path.join(
                os.environ["ZEROE_RESOURCES"], _FILENAMES["visual-table"]
            )
        )
        if explicit and os.path.isfile(explicit):
            loaded.visual_table = visual.load_neighbor_table(explicit)
        elif paths.get("visual-table"):
            raise MissingResourceError(
                f"visual-table: no such file: {paths['visual-table']}"
            )
        else:
            loaded.visual_table = visual.builtin_table()
    return loaded
