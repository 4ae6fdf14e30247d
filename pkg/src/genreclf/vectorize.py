"""Sparse tf-idf vectorization.

Two modes are supported:

* ``paper``  -- augmented term frequency 0.5 + 0.5*f/max_f and
  idf = ln(N / df), no normalization.
* ``smooth`` -- raw-count tf, idf = ln((1+N)/(1+df)) + 1, and L2
  normalization of each vector (the common library convention).

The vocabulary is fitted on the training corpus only; transforming a
document drops tokens outside the fitted vocabulary.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptyCorpus, EmptyDocument, UnknownTerm

MODES = ("paper", "smooth")


@dataclass(frozen=True)
class SparseVector:
    """(index, weight) pairs with strictly increasing indices, no stored zeros."""

    indices: np.ndarray  # int64, strictly increasing
    values: np.ndarray   # float64, all nonzero and finite

    @classmethod
    def from_entries(cls, entries: dict[int, float] | list[tuple[int, float]]) -> "SparseVector":
        if isinstance(entries, dict):
            entries = sorted(entries.items())
        entries = [(i, v) for i, v in entries if v != 0.0]
        idx = np.array([i for i, _ in entries], dtype=np.int64)
        val = np.array([v for _, v in entries], dtype=np.float64)
        return cls(indices=idx, values=val)

    def get(self, index: int) -> float:
        pos = np.searchsorted(self.indices, index)
        if pos < len(self.indices) and self.indices[pos] == index:
            return float(self.values[pos])
        return 0.0

    def to_dense(self, n_cols: int) -> np.ndarray:
        out = np.zeros(n_cols)
        out[self.indices] = self.values
        return out

    @property
    def nnz(self) -> int:
        return len(self.indices)


@dataclass
class SparseMatrix:
    rows: list[SparseVector]
    n_cols: int

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols))
        for i, row in enumerate(self.rows):
            out[i, row.indices] = row.values
        return out


@dataclass
class Vocabulary:
    """Term -> column index map with document frequencies, fitted on train."""

    terms: dict[str, int]
    doc_freq: np.ndarray  # int64, len V
    n_docs: int
    mode: str = "paper"

    @property
    def size(self) -> int:
        return len(self.terms)


def fit_vocabulary(corpus: list[list[str]], mode: str = "paper") -> Vocabulary:
    if not corpus:
        raise EmptyCorpus("cannot fit a vocabulary on an empty corpus")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    df: Counter[str] = Counter()
    for doc in corpus:
        df.update(set(doc))
    terms = {t: j for j, t in enumerate(sorted(df))}
    doc_freq = np.array([df[t] for t in terms], dtype=np.int64)
    return Vocabulary(terms=terms, doc_freq=doc_freq, n_docs=len(corpus), mode=mode)


def compute_tf(term: str, doc: list[str], mode: str = "paper") -> float:
    """Term frequency of ``term`` in ``doc``; 0.0 for absent terms."""
    if not doc:
        raise EmptyDocument("term frequency is undefined for an empty document")
    counts = Counter(doc)
    f = counts[term]
    if f == 0:
        return 0.0
    if mode == "smooth":
        return float(f)
    return 0.5 + 0.5 * f / max(counts.values())


def compute_idf(term: str, vocab: Vocabulary) -> float:
    """Inverse document frequency of a fitted term (natural log)."""
    j = vocab.terms.get(term)
    if j is None:
        raise UnknownTerm(f"term {term!r} not in vocabulary")
    df = int(vocab.doc_freq[j])
    if vocab.mode == "smooth":
        return math.log((1 + vocab.n_docs) / (1 + df)) + 1.0
    return math.log(vocab.n_docs / df)


def transform(doc: list[str], vocab: Vocabulary) -> SparseVector:
    """tf-idf vector of one document over the fitted vocabulary.

    Out-of-vocabulary tokens are dropped; zero weights are not stored.
    In smooth mode the result is L2-normalized.
    """
    if not doc:
        return SparseVector.from_entries([])
    entries: dict[int, float] = {}
    counts = Counter(doc)
    max_f = max(counts.values())
    for term, f in counts.items():
        j = vocab.terms.get(term)
        if j is None:
            continue
        if vocab.mode == "smooth":
            tf = float(f)
        else:
            tf = 0.5 + 0.5 * f / max_f
        entries[j] = tf * compute_idf(term, vocab)
    vec = SparseVector.from_entries(entries)
    if vocab.mode == "smooth" and vec.nnz:
        norm = float(np.linalg.norm(vec.values))
        if norm > 0:
            vec = SparseVector(indices=vec.indices, values=vec.values / norm)
    return vec


def transform_corpus(corpus: list[list[str]], vocab: Vocabulary) -> SparseMatrix:
    return SparseMatrix(rows=[transform(doc, vocab) for doc in corpus], n_cols=vocab.size)


# --- serialization: `tfidf-vocab v1 <mode> <n_docs>` header, then
# `<term> <doc_freq>` lines in column-index order ---

def save_vocabulary(vocab: Vocabulary, path: str | Path) -> None:
    ordered = sorted(vocab.terms, key=vocab.terms.get)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"tfidf-vocab v1 {vocab.mode} {vocab.n_docs}\n")
        for term in ordered:
            fh.write(f"{term} {int(vocab.doc_freq[vocab.terms[term]])}\n")


def load_vocabulary(path: str | Path) -> Vocabulary:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 4 or header[0] != "tfidf-vocab" or header[1] != "v1":
            raise ValueError(f"not a tfidf-vocab v1 file: {path}")
        mode, n_docs = header[2], int(header[3])
        terms: dict[str, int] = {}
        freqs: list[int] = []
        for line in fh:
            term, df = line.split()
            terms[term] = len(terms)
            freqs.append(int(df))
    return Vocabulary(
        terms=terms, doc_freq=np.array(freqs, dtype=np.int64), n_docs=n_docs, mode=mode
    )
