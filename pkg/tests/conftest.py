import numpy as np
import pytest

from genreclf.corpus import Dataset, LabelMatrix, Review


def make_imdb_tree(root, pos_texts, neg_texts):
    """Create a minimal Large Movie Review Dataset v1.0 layout under root."""
    for cls, texts in (("pos", pos_texts), ("neg", neg_texts)):
        d = root / "train" / cls
        d.mkdir(parents=True)
        for i, text in enumerate(texts):
            (d / f"{i}_{(i % 10) + 1}.txt").write_text(text, encoding="utf-8")
    return root


def write_labels_csv(path, rows):
    """rows: list of (id, [genres])."""
    lines = ["id,genres"]
    for rid, genres in rows:
        lines.append(f"{rid},{'|'.join(genres)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def make_dataset(ids, genres, bits):
    reviews = [Review(id=i, text=f"text of {i}", sentiment_dir=i.split("/")[0]) for i in ids]
    labels = LabelMatrix(ids=list(ids), genres=list(genres), bits=np.asarray(bits, np.uint8))
    return Dataset(reviews=reviews, labels=labels)


@pytest.fixture
def tiny_imdb(tmp_path):
    texts_pos = [f"A great movie number {i}. I liked the film." for i in range(5)]
    texts_neg = [f"A bad movie number {i}. Boring scenes." for i in range(5)]
    return make_imdb_tree(tmp_path / "aclImdb", texts_pos, texts_neg)
