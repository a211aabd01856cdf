"""On-disk treebank store.

A store is a plain directory holding one append-only ``<lang>.anncorra``
file per language, with records written as a ``# id`` comment line
followed by the sentence's linear notation. An optional ``tagset.cfg``
extends the default tag registry for everything read through the store.
The layout is deliberately human-readable so dumps can be shipped as-is.

Contract: single writer, any number of readers. Opening read-write takes
a ``.lock`` file in the store directory; readers take a snapshot at open
and ignore the lock. Statistics are recomputed from current contents on
every call, never cached.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .anncorra import (
    DepTree,
    TagRegistry,
    default_registry,
    iter_sentences,
    load_tagset,
    parse_sentence,
    to_interchange,
)
from .diagnostics import Diagnostic, LerilError, has_errors, warning


class CorpusError(LerilError):
    """Store-level failure; ``diagnostics`` carries parse details if any."""

    def __init__(self, message: str, diagnostics: list[Diagnostic] | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class StoreLockedError(CorpusError):
    """Another writer holds the store lock."""


@dataclass
class CorpusRecord:
    id: str
    raw: str
    tree: DepTree
    language: str
    source: str | None = None


@dataclass(frozen=True)
class CorpusStats:
    sentences: int
    relation_counts: dict[str, int]
    node_counts: dict[str, int]
    average_depth: float


class CorpusStore:
    """Treebank store over a directory; use as a context manager."""

    def __init__(self, path: str | Path, mode: str = "r", registry: TagRegistry | None = None):
        if mode not in ("r", "rw"):
            raise ValueError(f"unknown store mode: {mode!r}")
        self.path = Path(path)
        self.mode = mode
        self._locked = False
        if mode == "rw":
            self.path.mkdir(parents=True, exist_ok=True)
        elif not self.path.is_dir():
            raise CorpusError(f"no store directory at {self.path}")

        if registry is not None:
            self.registry = registry
        else:
            tagset_path = self.path / "tagset.cfg"
            if tagset_path.is_file():
                self.registry = load_tagset(tagset_path.read_text(encoding="utf-8"))
            else:
                self.registry = default_registry()

        if mode == "rw":
            self._acquire_lock()
        self._records: dict[str, CorpusRecord] = {}
        self._order: list[str] = []
        try:
            self._load()
        except Exception:
            self.close()
            raise

    def _acquire_lock(self) -> None:
        lock = self.path / ".lock"
        try:
            fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise StoreLockedError(
                f"store {self.path} is locked by another writer ({lock} exists)"
            ) from None
        with os.fdopen(fd, "w") as fh:
            fh.write(str(os.getpid()))
        self._locked = True

    def close(self) -> None:
        if self._locked:
            (self.path / ".lock").unlink(missing_ok=True)
            self._locked = False

    def __enter__(self) -> "CorpusStore":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def _load(self) -> None:
        for data_file in sorted(self.path.glob("*.anncorra")):
            language = data_file.stem
            text = data_file.read_text(encoding="utf-8")
            auto = 0
            for sentence_id, lineno, line in iter_sentences(text):
                if sentence_id is None:
                    auto += 1
                    sentence_id = f"{language}-{auto}"
                try:
                    self._ingest(sentence_id, line, language, source=str(data_file))
                except CorpusError as exc:
                    raise CorpusError(
                        f"{data_file}:{lineno}: {exc}", exc.diagnostics
                    ) from None

    def _ingest(
        self, sentence_id: str, line: str, language: str, source: str | None
    ) -> CorpusRecord:
        if sentence_id in self._records:
            raise CorpusError(f"duplicate sentence id '{sentence_id}'")
        tree, diagnostics = parse_sentence(line, self.registry)
        if tree is None or has_errors(diagnostics):
            raise CorpusError(
                f"sentence '{sentence_id}' rejected: "
                + "; ".join(d.render() for d in diagnostics),
                diagnostics,
            )
        record = CorpusRecord(sentence_id, line, tree, language, source)
        self._records[sentence_id] = record
        self._order.append(sentence_id)
        return record

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, sentence_id: str) -> bool:
        return sentence_id in self._records

    def get(self, sentence_id: str) -> CorpusRecord | None:
        return self._records.get(sentence_id)

    def records(self) -> list[CorpusRecord]:
        return [self._records[sid] for sid in self._order]

    def add_sentence(
        self,
        sentence_id: str,
        line: str,
        language: str,
        source: str | None = None,
        diagnostics: list[Diagnostic] | None = None,
    ) -> CorpusRecord:
        """Validate, persist and index one sentence.

        Rejects duplicates and lines that do not parse and resolve
        cleanly. Parse warnings are appended to ``diagnostics`` when a
        list is supplied.
        """
        if self.mode != "rw":
            raise CorpusError("store opened read-only")
        if sentence_id in self._records:
            raise CorpusError(f"duplicate sentence id '{sentence_id}'")
        tree, parse_diags = parse_sentence(line, self.registry)
        if tree is None or has_errors(parse_diags):
            raise CorpusError(
                f"sentence '{sentence_id}' rejected: "
                + "; ".join(d.render() for d in parse_diags),
                parse_diags,
            )
        if diagnostics is not None:
            diagnostics.extend(parse_diags)
        record = CorpusRecord(sentence_id, line, tree, language, source)
        data_file = self.path / f"{language}.anncorra"
        with data_file.open("a", encoding="utf-8") as fh:
            fh.write(f"# {sentence_id}\n{line}\n")
        self._records[sentence_id] = record
        self._order.append(sentence_id)
        return record

    def query_by_relation(self, rel_tag: str) -> tuple[list[tuple[str, int]], list[Diagnostic]]:
        """All (record id, node position) pairs bearing the relation tag."""
        canonical = self.registry.canonical_relation(rel_tag)
        if canonical is None:
            return [], [warning(f"unknown relation tag '{rel_tag}'")]
        folded = canonical.lower()
        hits = [
            (record.id, node.position)
            for record in self.records()
            for node in record.tree.nodes
            if node.rel_tag is not None and node.rel_tag.lower() == folded
        ]
        return hits, []

    def stats(self) -> CorpusStats:
        """Exact counts over current contents, recomputed on every call."""
        relation_counts: Counter[str] = Counter()
        node_counts: Counter[str] = Counter()
        depths = []
        for record in self.records():
            for node in record.tree.nodes:
                if node.rel_tag is not None:
                    relation_counts[node.rel_tag] += 1
                if node.node_tag is not None:
                    node_counts[node.node_tag] += 1
            depths.append(_tree_depth(record.tree))
        average = sum(depths) / len(depths) if depths else 0.0
        return CorpusStats(
            sentences=len(self._order),
            relation_counts=dict(relation_counts),
            node_counts=dict(node_counts),
            average_depth=average,
        )

    def export(self, format: str = "linear") -> str:
        """Dump the store as text, either linear notation or interchange JSON."""
        if format == "linear":
            lines = []
            for record in self.records():
                lines.append(f"# {record.id}")
                lines.append(record.raw)
            return "\n".join(lines) + "\n" if lines else ""
        if format == "interchange":
            doc = {
                "format": "anncorra-corpus",
                "records": [
                    {
                        "id": record.id,
                        "language": record.language,
                        "source": record.source,
                        "raw": record.raw,
                        "tree": to_interchange(record.tree),
                    }
                    for record in self.records()
                ],
            }
            return json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
        raise ValueError(f"unknown export format: {format!r}")


def _tree_depth(tree: DepTree) -> int:
    depth = 0
    frontier = [(tree.root, 0)]
    while frontier:
        position, d = frontier.pop()
        depth = max(depth, d)
        frontier.extend((child, d + 1) for child in tree.nodes[position].children)
    return depth
