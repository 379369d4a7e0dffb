"""File-backed stores for lexicons and sub-corpora with optimistic
concurrency.

Each resource lives in its own JSON file under the state directory. Writers
are serialized per store; every mutation goes through an expected-version
check so a stale client gets a version conflict instead of silently
overwriting someone else's round.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Callable

from .curation import SubCorpus, subcorpus_from_dict, subcorpus_to_dict
from .errors import ConflictError, NotFoundError, VersionConflictError
from .lexicon import Lexicon, lexicon_from_dict, lexicon_to_dict


def _atomic_write(path: Path, payload: dict) -> None:
    tmp = path.with_suffix(".tmp")
    tmp.write_text(
        json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    os.replace(tmp, path)


class LexiconStore:
    def __init__(self, root: str | Path):
        self.root = Path(root) / "lexicons"
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, name: str) -> Path:
        return self.root / f"{name}.json"

    def names(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))

    def exists(self, name: str) -> bool:
        return self._path(name).is_file()

    def get(self, name: str) -> Lexicon:
        path = self._path(name)
        if not path.is_file():
            raise NotFoundError(f"no lexicon named {name!r}")
        return lexicon_from_dict(json.loads(path.read_text(encoding="utf-8")))

    def create(self, lexicon: Lexicon) -> Lexicon:
        with self._lock:
            if self.exists(lexicon.name):
                raise ConflictError(f"lexicon {lexicon.name!r} already exists")
            _atomic_write(self._path(lexicon.name), lexicon_to_dict(lexicon))
        return lexicon

    def update(
        self,
        name: str,
        expected_version: int | None,
        mutate: Callable[[Lexicon], None],
    ) -> Lexicon:
        """Load, version-check, mutate, persist; all under the store lock."""
        with self._lock:
            lexicon = self.get(name)
            if expected_version is not None and lexicon.version != expected_version:
                raise VersionConflictError(
                    f"lexicon {name!r} is at version {lexicon.version}, "
                    f"not {expected_version}",
                    current_version=lexicon.version,
                )
            mutate(lexicon)
            _atomic_write(self._path(name), lexicon_to_dict(lexicon))
            return lexicon


class SubCorpusStore:
    def __init__(self, root: str | Path):
        self.root = Path(root) / "subcorpora"
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, name: str) -> Path:
        return self.root / f"{name}.json"

    def names(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))

    def exists(self, name: str) -> bool:
        return self._path(name).is_file()

    def get(self, name: str) -> SubCorpus:
        path = self._path(name)
        if not path.is_file():
            raise NotFoundError(f"no sub-corpus named {name!r}")
        return subcorpus_from_dict(json.loads(path.read_text(encoding="utf-8")))

    def create(self, subcorpus: SubCorpus) -> SubCorpus:
        with self._lock:
            if self.exists(subcorpus.name):
                raise ConflictError(f"sub-corpus {subcorpus.name!r} already exists")
            _atomic_write(self._path(subcorpus.name), subcorpus_to_dict(subcorpus))
        return subcorpus

    def update(
        self,
        name: str,
        expected_version: int | None,
        mutate: Callable[[SubCorpus], SubCorpus],
    ) -> SubCorpus:
        """Like LexiconStore.update, but the mutator returns the replacement
        (SubCorpus is immutable)."""
        with self._lock:
            subcorpus = self.get(name)
            if expected_version is not None and subcorpus.version != expected_version:
                raise VersionConflictError(
                    f"sub-corpus {name!r} is at version {subcorpus.version}, "
                    f"not {expected_version}",
                    current_version=subcorpus.version,
                )
            updated = mutate(subcorpus)
            _atomic_write(self._path(name), subcorpus_to_dict(updated))
            return updated
