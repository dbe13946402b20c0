"""Offline substring-count backend: a reproducible stand-in for a web
search engine.

``count_documents`` answers "how many documents contain this pattern at
least once" with exact, case-sensitive, byte-level matching — no
tokenization, stemming or case folding, since SMILES fragments are
case-sensitive symbol strings.  ``naive_count`` is the reference
implementation the index must agree with.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from fraglead.errors import EmptyCorpus, EmptyPattern

_SEPARATOR = b"\x00"


@dataclass(frozen=True)
class Document:
    doc_id: str
    body: str


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]

    def __post_init__(self):
        ids = [d.doc_id for d in self.documents]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate doc_ids: {dupes}")

    def __len__(self) -> int:
        return len(self.documents)

    @classmethod
    def from_pairs(cls, pairs) -> "Corpus":
        return cls(tuple(Document(doc_id, body) for doc_id, body in pairs))

    @classmethod
    def from_directory(cls, path: str | os.PathLike) -> "Corpus":
        """Each regular file becomes a document; doc_id is the file name.
        Files are read as UTF-8 and taken in sorted-name order."""
        directory = Path(path)
        docs = []
        for entry in sorted(directory.iterdir()):
            if entry.is_file():
                docs.append(Document(entry.name, entry.read_text(encoding="utf-8")))
        return cls(tuple(docs))

    @classmethod
    def from_line_file(cls, path: str | os.PathLike) -> "Corpus":
        """Each line becomes a document; doc_id is the 1-based line number."""
        text = Path(path).read_text(encoding="utf-8")
        lines = text.splitlines()
        return cls(tuple(Document(str(i + 1), line) for i, line in enumerate(lines)))


def load_corpus(path: str | os.PathLike) -> Corpus:
    """Load a directory of text files or a single line-delimited file."""
    return (
        Corpus.from_directory(path)
        if Path(path).is_dir()
        else Corpus.from_line_file(path)
    )


def _suffix_array(data: bytes) -> np.ndarray:
    """Suffix array by prefix doubling (lexsort per round)."""
    n = len(data)
    rank = np.frombuffer(data, dtype=np.uint8).astype(np.int64)
    if n <= 1:
        return np.arange(n, dtype=np.int64)
    width = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        second[: n - width] = rank[width:]
        order = np.lexsort((second, rank))
        changed = (rank[order][1:] != rank[order][:-1]) | (
            second[order][1:] != second[order][:-1]
        )
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[order] = np.concatenate(([0], np.cumsum(changed)))
        rank = new_rank
        if rank[order[-1]] == n - 1:
            return order
        width *= 2


class SubstringIndex:
    """Suffix array over the sentinel-joined document bodies.

    Query results are defined to be identical to a naive scan of every
    document; patterns that themselves contain the NUL sentinel fall back
    to the naive scan so that guarantee holds unconditionally.
    """

    def __init__(self, corpus: Corpus):
        if len(corpus) == 0:
            raise EmptyCorpus("corpus has no documents")
        self._corpus = corpus
        bodies = [doc.body.encode("utf-8") for doc in corpus.documents]
        starts = []
        offset = 0
        for body in bodies:
            starts.append(offset)
            offset += len(body) + 1  # +1 for the separator
        self._data = _SEPARATOR.join(bodies) + _SEPARATOR
        self._starts = np.asarray(starts, dtype=np.int64)
        self._sa = _suffix_array(self._data)

    @property
    def corpus(self) -> Corpus:
        return self._corpus

    def _sa_range(self, pattern: bytes) -> tuple[int, int]:
        data, sa = self._data, self._sa
        m = len(pattern)

        def prefix_at(k: int) -> bytes:
            p = sa[k]
            return data[p : p + m]

        lo, hi = 0, len(sa)
        while lo < hi:
            mid = (lo + hi) // 2
            if prefix_at(mid) < pattern:
                lo = mid + 1
            else:
                hi = mid
        first = lo
        lo, hi = first, len(sa)
        while lo < hi:
            mid = (lo + hi) // 2
            if prefix_at(mid) <= pattern:
                lo = mid + 1
            else:
                hi = mid
        return first, lo

    def _matching_doc_indices(self, pattern: str) -> np.ndarray:
        if not pattern:
            raise EmptyPattern("pattern must be non-empty")
        raw = pattern.encode("utf-8")
        if _SEPARATOR in raw:
            hits = [
                i
                for i, doc in enumerate(self._corpus.documents)
                if pattern in doc.body
            ]
            return np.asarray(hits, dtype=np.int64)
        first, last = self._sa_range(raw)
        if first == last:
            return np.empty(0, dtype=np.int64)
        positions = self._sa[first:last]
        doc_indices = np.searchsorted(self._starts, positions, side="right") - 1
        return np.unique(doc_indices)

    def count(self, pattern: str) -> int:
        return int(len(self._matching_doc_indices(pattern)))

    def documents(self, pattern: str) -> list[str]:
        """doc_ids of the matching documents, in corpus order."""
        docs = self._corpus.documents
        return [docs[i].doc_id for i in self._matching_doc_indices(pattern)]


def build(corpus: Corpus) -> SubstringIndex:
    """Index a corpus for substring-count queries."""
    return SubstringIndex(corpus)


def count_documents(index: SubstringIndex, pattern: str) -> int:
    """Number of distinct documents containing the pattern at least once."""
    return index.count(pattern)


def naive_count(corpus: Corpus, pattern: str) -> int:
    """Reference semantics: linear scan of every document body."""
    if not pattern:
        raise EmptyPattern("pattern must be non-empty")
    return sum(1 for doc in corpus.documents if pattern in doc.body)
