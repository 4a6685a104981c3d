"""The built-in verification corpus: small groups with known shapes.

Orders stay at or below 24 so the exhaustive oracles (closure counts,
regular-character decomposition, brute-force subgroup joins) remain fast.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import InputError
from .groups import DEFAULT_BOUND, PermGroup, parse_group_file

__all__ = ["CorpusEntry", "BUILTIN", "corpus_entries", "builtin_corpus_path"]

_SUITES = ("group-core", "characters", "lambda-adams", "monomial-brauer")


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    path: Path
    order: int
    suites: tuple[str, ...] = _SUITES

    def load(self, bound: int = DEFAULT_BOUND) -> PermGroup:
        desc = parse_group_file(self.path.read_text(), name=self.name)
        G = PermGroup(desc.generators, degree=desc.degree, bound=bound)
        if G.order != self.order:
            raise InputError(
                f"corpus group {self.name} has order {G.order}, expected {self.order}"
            )
        if G.order > bound:
            raise InputError(f"corpus group {self.name} exceeds the bound {bound}")
        return G

    def golden_table(self) -> dict | None:
        candidate = self.path.with_suffix(".table.json")
        if candidate.exists():
            return json.loads(candidate.read_text())
        return None


# name, file stem, expected order
_BUILTIN_SPEC = (
    ("C2", "c2", 2),
    ("C3", "c3", 3),
    ("C4", "c4", 4),
    ("C6", "c6", 6),
    ("C2xC2", "c2c2", 4),
    ("S3", "s3", 6),
    ("D4", "d4", 8),
    ("Q8", "q8", 8),
    ("A4", "a4", 12),
    ("D6", "d6", 12),
    ("S4", "s4", 24),
)


def builtin_corpus_path() -> Path:
    return Path(resources.files("brind") / "data")


def _builtin_entries() -> tuple[CorpusEntry, ...]:
    root = builtin_corpus_path()
    return tuple(
        CorpusEntry(name=name, path=root / f"{stem}.grp", order=order)
        for name, stem, order in _BUILTIN_SPEC
    )


BUILTIN = _builtin_entries()


def corpus_entries(corpus_dir: str | Path | None = None) -> tuple[CorpusEntry, ...]:
    """Built-in corpus, or every ``*.grp`` file of a user-supplied directory."""
    if corpus_dir is None:
        return BUILTIN
    root = Path(corpus_dir)
    if not root.is_dir():
        raise InputError(f"corpus directory {root} does not exist")
    entries = []
    for path in sorted(root.glob("*.grp")):
        desc = parse_group_file(path.read_text(), name=path.stem)
        G = PermGroup(desc.generators, degree=desc.degree)
        entries.append(CorpusEntry(name=path.stem, path=path, order=G.order))
    return tuple(entries)
