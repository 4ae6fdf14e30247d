"""Dataset loading, genre labels, rare-genre filtering and the train/test split.

The review corpus follows the Large Movie Review Dataset v1.0 layout:
``<root>/train/{pos,neg}/<id>_<rating>.txt`` plus ``urls_{pos,neg}.txt``
manifests with one IMDb URL per line.  Genre labels come from an offline
CSV (``id,genres`` with ``|``-separated names); no network access happens
anywhere in this module.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    AllGenresRemoved,
    EmptyFile,
    EmptyGenreList,
    InsufficientReviews,
    MalformedLine,
    MissingDirectory,
    MissingLabel,
    UnknownReview,
)


@dataclass(frozen=True)
class Review:
    """One raw review. ``id`` is the dataset-relative stem, e.g. ``pos/8030_9``."""

    id: str
    text: str
    sentiment_dir: str  # "pos" or "neg", provenance only


@dataclass
class LabelMatrix:
    """N x K binary genre assignments with row ids and genre column names.

    Target matrices carry 1..3 set bits per row; prediction matrices may
    contain all-zero rows.
    """

    ids: list[str]
    genres: list[str]
    bits: np.ndarray  # (N, K) uint8

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)
        if self.bits.shape != (len(self.ids), len(self.genres)):
            raise ValueError("bits shape does not match ids/genres")

    @property
    def n_rows(self) -> int:
        return len(self.ids)

    @property
    def n_genres(self) -> int:
        return len(self.genres)

    def row_genres(self, i: int) -> list[str]:
        return [g for g, b in zip(self.genres, self.bits[i]) if b]


@dataclass
class Dataset:
    reviews: list[Review]
    labels: LabelMatrix

    def __post_init__(self):
        if len(self.reviews) != self.labels.n_rows:
            raise ValueError("reviews and label rows do not align")
        for r, rid in zip(self.reviews, self.labels.ids):
            if r.id != rid:
                raise ValueError(f"id mismatch: {r.id} vs {rid}")

    def __len__(self) -> int:
        return len(self.reviews)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.7
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")


def load_reviews(root_path: str | Path, count_per_class: int) -> list[Review]:
    """Load ``count_per_class`` reviews from each of train/pos and train/neg.

    Files are taken in lexicographic filename order so the selection is
    deterministic across filesystems.
    """
    root = Path(root_path)
    reviews: list[Review] = []
    for cls in ("pos", "neg"):
        class_dir = root / "train" / cls
        if not class_dir.is_dir():
            raise MissingDirectory(f"expected directory {class_dir}")
        files = sorted(class_dir.glob("*.txt"), key=lambda p: p.name)
        if len(files) < count_per_class:
            raise InsufficientReviews(
                f"{class_dir} holds {len(files)} files, need {count_per_class}"
            )
        for path in files[:count_per_class]:
            text = path.read_text(encoding="utf-8")
            if not text:
                raise EmptyFile(f"zero-byte review: {path}")
            reviews.append(Review(id=f"{cls}/{path.stem}", text=text, sentiment_dir=cls))
    return reviews


def parse_url_manifest(urls_file: str | Path) -> list[tuple[int, str]]:
    """Parse a urls_{pos,neg}.txt manifest into (review_index, url) pairs.

    Line i of the manifest corresponds to review index i within its class.
    Performs no network access.
    """
    pairs: list[tuple[int, str]] = []
    with open(urls_file, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            url = line.strip()
            if not url:
                continue
            if not (url.startswith("http://") or url.startswith("https://")):
                raise MalformedLine(f"line {i + 1}: not a URL: {url!r}")
            pairs.append((i, url))
    return pairs


def load_genre_labels(labels_file: str | Path, reviews: list[Review]) -> LabelMatrix:
    """Build the target LabelMatrix from a ``id,genres`` CSV.

    Genre columns are the sorted union of all genres seen in the file;
    every review must be labeled with at least one genre.
    """
    by_id: dict[str, list[str]] = {}
    with open(labels_file, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            rid, raw = row["id"], row["genres"]
            genres = [g for g in raw.split("|") if g]
            if not genres:
                raise EmptyGenreList(f"review {rid} has no genres")
            by_id[rid] = genres

    review_ids = {r.id for r in reviews}
    for rid in by_id:
        if rid not in review_ids:
            raise UnknownReview(f"label for unknown review id {rid}")
    for r in reviews:
        if r.id not in by_id:
            raise MissingLabel(f"no genre label for review {r.id}")

    genre_names = sorted({g for gs in by_id.values() for g in gs})
    col = {g: j for j, g in enumerate(genre_names)}
    bits = np.zeros((len(reviews), len(genre_names)), dtype=np.uint8)
    for i, r in enumerate(reviews):
        for g in by_id[r.id]:
            bits[i, col[g]] = 1
    return LabelMatrix(ids=[r.id for r in reviews], genres=genre_names, bits=bits)


def filter_rare_genres(dataset: Dataset, min_count: int = 50) -> Dataset:
    """Drop genre columns with fewer than ``min_count`` reviews.

    Strictly-less-than semantics: a genre with exactly ``min_count``
    occurrences is kept.  Reviews left with no genres are dropped too.
    """
    labels = dataset.labels
    counts = labels.bits.sum(axis=0)
    keep_cols = [j for j in range(labels.n_genres) if counts[j] >= min_count]
    if not keep_cols:
        raise AllGenresRemoved(f"no genre has >= {min_count} reviews")
    bits = labels.bits[:, keep_cols]
    keep_rows = [i for i in range(labels.n_rows) if bits[i].any()]
    return Dataset(
        reviews=[dataset.reviews[i] for i in keep_rows],
        labels=LabelMatrix(
            ids=[labels.ids[i] for i in keep_rows],
            genres=[labels.genres[j] for j in keep_cols],
            bits=bits[keep_rows],
        ),
    )


def split(dataset: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Seeded uniform random partition into train (floor(N*fraction)) and test."""
    n = len(dataset)
    if n == 0:
        raise ValueError("cannot split an empty dataset")
    rng = np.random.default_rng(spec.seed)
    perm = rng.permutation(n)
    n_train = int(np.floor(n * spec.train_fraction))
    return (_take(dataset, perm[:n_train]), _take(dataset, perm[n_train:]))


def _take(dataset: Dataset, idx: np.ndarray) -> Dataset:
    labels = dataset.labels
    return Dataset(
        reviews=[dataset.reviews[i] for i in idx],
        labels=LabelMatrix(
            ids=[labels.ids[i] for i in idx],
            genres=list(labels.genres),
            bits=labels.bits[idx] if len(idx) else np.zeros((0, labels.n_genres), np.uint8),
        ),
    )


def genre_histogram(labels: LabelMatrix) -> list[tuple[str, int]]:
    """Number of reviews per genre, in genre column order."""
    counts = labels.bits.sum(axis=0)
    return [(g, int(c)) for g, c in zip(labels.genres, counts)]


# --- dataset file persistence (one review + labels per JSON line) ---

def save_dataset(dataset: Dataset, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps({"genres": dataset.labels.genres}, sort_keys=True) + "\n")
        for r, row in zip(dataset.reviews, dataset.labels.bits):
            rec = {
                "id": r.id,
                "sentiment_dir": r.sentiment_dir,
                "text": r.text,
                "labels": [int(b) for b in row],
            }
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def load_dataset(path: str | Path) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        genres = header["genres"]
        reviews: list[Review] = []
        rows: list[list[int]] = []
        for line in fh:
            rec = json.loads(line)
            reviews.append(
                Review(id=rec["id"], text=rec["text"], sentiment_dir=rec["sentiment_dir"])
            )
            rows.append(rec["labels"])
    bits = np.array(rows, dtype=np.uint8) if rows else np.zeros((0, len(genres)), np.uint8)
    return Dataset(
        reviews=reviews,
        labels=LabelMatrix(ids=[r.id for r in reviews], genres=genres, bits=bits),
    )
