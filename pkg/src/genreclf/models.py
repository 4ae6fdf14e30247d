"""Multi-label KNN and MLP classifiers over sparse tf-idf matrices.

KNN is an exact full-scan classifier: Minkowski distance (p=2 by default,
Euclidean), k=3 by default, label predicted by strict majority vote among
the k neighbors.  The MLP is a single-hidden-layer network (rectifier
hidden units, per-label logistic outputs) trained by full-batch gradient
descent with Armijo backtracking line search; training is a deterministic
function of (data, config).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import LabelMatrix
from .errors import CorruptModelFile, NonFiniteLoss, ShapeMismatch, VersionMismatch
from .vectorize import SparseMatrix, SparseVector

MAGIC = b"GCM1"

# probabilities are kept strictly inside (0, 1)
_P_EPS = 1e-12


def minkowski_distance(x: SparseVector, y: SparseVector, p: float = 2.0) -> float:
    """(sum |x_i - y_i|^p)^(1/p) with missing entries treated as 0."""
    if p < 1:
        raise ValueError("Minkowski order must satisfy p >= 1")
    total = 0.0
    i = j = 0
    xi, xv, yi, yv = x.indices, x.values, y.indices, y.values
    while i < len(xi) and j < len(yi):
        if xi[i] == yi[j]:
            total += abs(xv[i] - yv[j]) ** p
            i += 1
            j += 1
        elif xi[i] < yi[j]:
            total += abs(xv[i]) ** p
            i += 1
        else:
            total += abs(yv[j]) ** p
            j += 1
    while i < len(xi):
        total += abs(xv[i]) ** p
        i += 1
    while j < len(yi):
        total += abs(yv[j]) ** p
        j += 1
    return total ** (1.0 / p)


@dataclass
class KnnModel:
    train_matrix: SparseMatrix
    train_labels: LabelMatrix
    k: int = 3
    p: float = 2.0

    def __post_init__(self):
        if self.k < 1 or self.k > self.train_matrix.n_rows:
            raise ValueError("k must satisfy 1 <= k <= number of training rows")
        if self.train_matrix.n_rows != self.train_labels.n_rows:
            raise ShapeMismatch("training matrix and labels do not align")


def knn_predict(model: KnnModel, query: SparseVector) -> np.ndarray:
    """Predicted label row (K uint8 bits) for one query vector.

    The k nearest training rows are selected with ties at equal distance
    broken by lower row index; label j is set iff more than k/2 of those
    neighbors carry it.  All-zero rows are a legitimate outcome.
    """
    dists = np.array(
        [minkowski_distance(query, row, model.p) for row in model.train_matrix.rows]
    )
    # stable sort keeps the lower row index first on ties
    neighbors = np.argsort(dists, kind="stable")[: model.k]
    votes = model.train_labels.bits[neighbors].sum(axis=0)
    return (votes * 2 > model.k).astype(np.uint8)


def knn_predict_matrix(model: KnnModel, queries: SparseMatrix) -> np.ndarray:
    return np.array([knn_predict(model, q) for q in queries.rows], dtype=np.uint8).reshape(
        queries.n_rows, model.train_labels.n_genres
    )


@dataclass
class MlpModel:
    """One hidden layer: h = relu(x W1 + b1), p = sigmoid(h W2 + b2)."""

    W1: np.ndarray  # (V, H)
    b1: np.ndarray  # (H,)
    W2: np.ndarray  # (H, K)
    b2: np.ndarray  # (K,)
    loss_history: list[float] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        v, h = self.W1.shape
        h2, k = self.W2.shape
        if h != h2 or self.b1.shape != (h,) or self.b2.shape != (k,):
            raise ShapeMismatch("inconsistent MLP parameter shapes")

    @property
    def n_inputs(self) -> int:
        return self.W1.shape[0]

    @property
    def n_hidden(self) -> int:
        return self.W1.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.W2.shape[1]


@dataclass(frozen=True)
class TrainConfig:
    hidden_size: int = 100
    max_iterations: int = 200
    seed: int = 0
    threshold: float = 0.5
    armijo_c: float = 1e-4
    initial_step: float = 1.0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("threshold must lie in (0, 1)")


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _softplus(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))


def _forward_dense(model: MlpModel, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    hidden = np.maximum(x @ model.W1 + model.b1, 0.0)
    logits = hidden @ model.W2 + model.b2
    return hidden, logits


def mlp_forward(model: MlpModel, x: SparseVector) -> np.ndarray:
    """Per-label probabilities for one input, all strictly inside (0, 1)."""
    _, logits = _forward_dense(model, x.to_dense(model.n_inputs)[None, :])
    return np.clip(_sigmoid(logits[0]), _P_EPS, 1.0 - _P_EPS)


def mlp_loss_and_gradient(
    model: MlpModel, batch: SparseMatrix, targets: np.ndarray
) -> tuple[float, tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]:
    """Mean binary cross-entropy over samples and labels, with backprop
    gradients in parameter order (W1, b1, W2, b2)."""
    targets = np.asarray(targets, dtype=np.float64)
    if targets.shape != (batch.n_rows, model.n_outputs):
        raise ShapeMismatch(
            f"targets {targets.shape} do not match batch {batch.n_rows} x {model.n_outputs}"
        )
    x = batch.to_dense()
    hidden, logits = _forward_dense(model, x)
    # bce(t, z) = softplus(z) - t*z, numerically stable in the logits
    loss = float(np.mean(_softplus(logits) - targets * logits))

    d_logits = (_sigmoid(logits) - targets) / targets.size
    g_w2 = hidden.T @ d_logits
    g_b2 = d_logits.sum(axis=0)
    d_hidden = (d_logits @ model.W2.T) * (hidden > 0)
    g_w1 = x.T @ d_hidden
    g_b1 = d_hidden.sum(axis=0)
    return loss, (g_w1, g_b1, g_w2, g_b2)


def _loss_only(params, batch_dense: np.ndarray, targets: np.ndarray) -> float:
    w1, b1, w2, b2 = params
    hidden = np.maximum(batch_dense @ w1 + b1, 0.0)
    logits = hidden @ w2 + b2
    return float(np.mean(_softplus(logits) - targets * logits))


def init_mlp(n_inputs: int, hidden_size: int, n_outputs: int, seed: int) -> MlpModel:
    """Seeded symmetric uniform init, bound sqrt(6/(fan_in+fan_out)) per layer."""
    rng = np.random.default_rng(seed)
    lim1 = np.sqrt(6.0 / (n_inputs + hidden_size))
    lim2 = np.sqrt(6.0 / (hidden_size + n_outputs))
    return MlpModel(
        W1=rng.uniform(-lim1, lim1, (n_inputs, hidden_size)),
        b1=np.zeros(hidden_size),
        W2=rng.uniform(-lim2, lim2, (hidden_size, n_outputs)),
        b2=np.zeros(n_outputs),
    )


def mlp_fit(train: SparseMatrix, targets: np.ndarray, config: TrainConfig) -> MlpModel:
    """Full-batch gradient descent with Armijo backtracking line search.

    The recorded loss sequence is non-increasing; training stops early when
    the line search can make no further progress.
    """
    targets = np.asarray(targets, dtype=np.float64)
    if train.n_rows == 0:
        raise ValueError("cannot fit on empty training data")
    model = init_mlp(train.n_cols, config.hidden_size, targets.shape[1], config.seed)
    params = [model.W1, model.b1, model.W2, model.b2]
    x = train.to_dense()

    loss, grads = mlp_loss_and_gradient(model, train, targets)
    history = [loss]
    for _ in range(config.max_iterations):
        if not np.isfinite(loss):
            raise NonFiniteLoss(f"training loss diverged: {loss}")
        gnorm2 = sum(float(np.sum(g * g)) for g in grads)
        if gnorm2 == 0.0:
            break
        step = config.initial_step
        accepted = None
        while step >= 1e-12:
            candidate = [p - step * g for p, g in zip(params, grads)]
            cand_loss = _loss_only(candidate, x, targets)
            if cand_loss <= loss - config.armijo_c * step * gnorm2:
                accepted = (candidate, cand_loss)
                break
            step *= 0.5
        if accepted is None:
            break
        params, loss = accepted
        model = MlpModel(W1=params[0], b1=params[1], W2=params[2], b2=params[3])
        loss, grads = mlp_loss_and_gradient(model, train, targets)
        history.append(loss)
    model.loss_history = history
    return model


def mlp_predict(model: MlpModel, x: SparseVector, threshold: float = 0.5) -> np.ndarray:
    """Label row: bit j set iff forward probability j >= threshold."""
    return (mlp_forward(model, x) >= threshold).astype(np.uint8)


def mlp_predict_matrix(
    model: MlpModel, queries: SparseMatrix, threshold: float = 0.5
) -> np.ndarray:
    return np.array(
        [mlp_predict(model, q, threshold) for q in queries.rows], dtype=np.uint8
    ).reshape(queries.n_rows, model.n_outputs)


# --- binary model files: magic GCM1, type tag, little-endian payload ---


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CorruptModelFile("unexpected end of model file")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def string(self) -> str:
        (n,) = self.unpack("<Q")
        return self.take(n).decode("utf-8")

    def array(self, dtype: str, count: int) -> np.ndarray:
        arr = np.frombuffer(self.take(count * np.dtype(dtype).itemsize), dtype=dtype)
        return arr.copy()

    def done(self) -> None:
        if self.pos != len(self.data):
            raise CorruptModelFile("trailing bytes in model file")


def _pack_string(s: str) -> bytes:
    raw = s.encode("utf-8")
    return struct.pack("<Q", len(raw)) + raw


def _pack_sparse_row(row: SparseVector) -> bytes:
    return (
        struct.pack("<Q", row.nnz)
        + row.indices.astype("<i8").tobytes()
        + row.values.astype("<f8").tobytes()
    )


def save_model(model: KnnModel | MlpModel, path: str | Path) -> None:
    chunks = [MAGIC]
    if isinstance(model, MlpModel):
        chunks.append(b"MLP")
        chunks.append(struct.pack("<QQQ", model.n_inputs, model.n_hidden, model.n_outputs))
        for arr in (model.W1, model.b1, model.W2, model.b2):
            chunks.append(arr.astype("<f8").tobytes())
    elif isinstance(model, KnnModel):
        chunks.append(b"KNN")
        labels = model.train_labels
        chunks.append(
            struct.pack(
                "<QdQQQ", model.k, model.p, model.train_matrix.n_rows,
                model.train_matrix.n_cols, labels.n_genres,
            )
        )
        for genre in labels.genres:
            chunks.append(_pack_string(genre))
        for rid, bits, row in zip(labels.ids, labels.bits, model.train_matrix.rows):
            chunks.append(_pack_string(rid))
            chunks.append(bits.astype(np.uint8).tobytes())
            chunks.append(_pack_sparse_row(row))
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    Path(path).write_bytes(b"".join(chunks))


def load_model(path: str | Path) -> KnnModel | MlpModel:
    data = Path(path).read_bytes()
    if len(data) < 7 or data[:4] != MAGIC:
        raise VersionMismatch(f"not a {MAGIC.decode()} model file: {path}")
    rd = _Reader(data)
    rd.take(4)
    tag = rd.take(3)
    if tag == b"MLP":
        v, h, k = rd.unpack("<QQQ")
        w1 = rd.array("<f8", v * h).reshape(v, h)
        b1 = rd.array("<f8", h)
        w2 = rd.array("<f8", h * k).reshape(h, k)
        b2 = rd.array("<f8", k)
        rd.done()
        return MlpModel(W1=w1, b1=b1, W2=w2, b2=b2)
    if tag == b"KNN":
        k, p, n_rows, n_cols, n_genres = rd.unpack("<QdQQQ")
        genres = [rd.string() for _ in range(n_genres)]
        ids, bit_rows, rows = [], [], []
        for _ in range(n_rows):
            ids.append(rd.string())
            bit_rows.append(rd.array("u1", n_genres))
            (nnz,) = rd.unpack("<Q")
            indices = rd.array("<i8", nnz)
            values = rd.array("<f8", nnz)
            rows.append(SparseVector(indices=indices, values=values))
        rd.done()
        bits = (
            np.array(bit_rows, dtype=np.uint8)
            if bit_rows
            else np.zeros((0, n_genres), np.uint8)
        )
        return KnnModel(
            train_matrix=SparseMatrix(rows=rows, n_cols=n_cols),
            train_labels=LabelMatrix(ids=ids, genres=genres, bits=bits),
            k=k,
            p=p,
        )
    raise VersionMismatch(f"unknown model type tag {tag!r}")
