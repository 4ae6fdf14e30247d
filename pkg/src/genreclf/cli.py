"""Batch command-line driver: ingest -> train -> evaluate -> report.

All commands are thin wrappers over the library; a pipeline run through
the CLI produces exactly the same results as calling the modules directly
with the same configuration.  Flags override a TOML config file, which
overrides built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import corpus, metrics, models, plots, preprocess, vectorize
from .errors import GenreClfError


@dataclass(frozen=True)
class RunConfig:
    root: str = "."
    labels: str = "labels.csv"
    count_per_class: int = 3500
    min_genre_count: int = 50
    split: float = 0.7
    seed: int = 0
    mode: str = "paper"
    model: str = "knn"
    k: int = 3
    hidden: int = 100
    iters: int = 200
    threshold: float = 0.5
    out: str = "out"


def load_config(path: str | Path | None, overrides: dict) -> RunConfig:
    cfg = RunConfig()
    if path is not None:
        with open(path, "rb") as fh:
            file_values = tomllib.load(fh)
        known = {f.name for f in fields(RunConfig)}
        bad = set(file_values) - known
        if bad:
            raise GenreClfError(f"unknown config keys: {sorted(bad)}")
        cfg = replace(cfg, **file_values)
    return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})


def _preprocess_corpus(dataset: corpus.Dataset) -> list[list[str]]:
    stoplist = preprocess.load_stoplist()
    lemmatizer = preprocess.load_lemmatizer()
    return [preprocess.preprocess(r.text, stoplist, lemmatizer) for r in dataset.reviews]


def cmd_ingest(cfg: RunConfig) -> None:
    reviews = corpus.load_reviews(cfg.root, cfg.count_per_class)
    labels = corpus.load_genre_labels(cfg.labels, reviews)
    dataset = corpus.filter_rare_genres(
        corpus.Dataset(reviews=reviews, labels=labels), cfg.min_genre_count
    )
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    corpus.save_dataset(dataset, out / "dataset.jsonl")
    print(f"wrote {out / 'dataset.jsonl'} ({len(dataset)} reviews)")
    print(f"{'genre':<16}{'reviews':>10}")
    for genre, count in corpus.genre_histogram(dataset.labels):
        print(f"{genre:<16}{count:>10}")


def _load_split(cfg: RunConfig) -> tuple[corpus.Dataset, corpus.Dataset]:
    dataset = corpus.load_dataset(Path(cfg.out) / "dataset.jsonl")
    spec = corpus.SplitSpec(train_fraction=cfg.split, seed=cfg.seed)
    return corpus.split(dataset, spec)


def cmd_train(cfg: RunConfig) -> None:
    train, _ = _load_split(cfg)
    tokens = _preprocess_corpus(train)
    vocab = vectorize.fit_vocabulary(tokens, cfg.mode)
    matrix = vectorize.transform_corpus(tokens, vocab)
    out = Path(cfg.out)
    vectorize.save_vocabulary(vocab, out / "vocab.txt")
    if cfg.model == "knn":
        model = models.KnnModel(train_matrix=matrix, train_labels=train.labels, k=cfg.k)
    elif cfg.model == "mlp":
        train_cfg = models.TrainConfig(
            hidden_size=cfg.hidden,
            max_iterations=cfg.iters,
            seed=cfg.seed,
            threshold=cfg.threshold,
        )
        model = models.mlp_fit(matrix, train.labels.bits, train_cfg)
    else:
        raise GenreClfError(f"unknown model kind {cfg.model!r}")
    models.save_model(model, out / "model.bin")
    print(f"wrote {out / 'vocab.txt'} and {out / 'model.bin'} ({cfg.model})")


def cmd_evaluate(cfg: RunConfig) -> None:
    _, test = _load_split(cfg)
    out = Path(cfg.out)
    vocab = vectorize.load_vocabulary(out / "vocab.txt")
    model = models.load_model(out / "model.bin")
    matrix = vectorize.transform_corpus(_preprocess_corpus(test), vocab)
    if isinstance(model, models.KnnModel):
        pred = models.knn_predict_matrix(model, matrix)
    else:
        pred = models.mlp_predict_matrix(model, matrix, cfg.threshold)
    report = metrics.evaluate(pred, test.labels.bits, test.labels.genres)
    (out / "report.json").write_text(report.to_json(), encoding="utf-8")
    plots.save_histogram_csv(report, out / "histogram.csv")
    plots.save_histogram_svg(report, out / "histogram.svg")
    print(report.to_table(), end="")
    print(f"wrote {out / 'report.json'}, {out / 'histogram.csv'}, {out / 'histogram.svg'}")


def cmd_report(cfg: RunConfig) -> None:
    """Re-render the table, CSV and SVG from an existing report.json."""
    out = Path(cfg.out)
    data = json.loads((out / "report.json").read_text(encoding="utf-8"))
    hist = data["histogram"]
    report = metrics.EvaluationReport(
        subset_accuracy=data["subset_accuracy"],
        elementwise_accuracy=data["elementwise_accuracy"],
        precision_micro=data["precision_micro"],
        recall_micro=data["recall_micro"],
        hamming_loss=data["hamming_loss"],
        no_genre_ratio=data["no_genre_ratio"],
        genres=tuple(h["genre"] for h in hist),
        predicted_counts=tuple(h["predicted"] for h in hist),
        target_counts=tuple(h["target"] for h in hist),
    )
    plots.save_histogram_csv(report, out / "histogram.csv")
    plots.save_histogram_svg(report, out / "histogram.svg")
    print(report.to_table(), end="")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genreclf",
        description="Multi-label movie-genre classification from text reviews.",
    )
    parser.add_argument("--config", help="TOML config file (flags take precedence)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, *flags):
        p = sub.add_parser(name)
        spec = {
            "--root": dict(help="dataset root (Large Movie Review Dataset layout)"),
            "--labels": dict(help="genre label CSV (id,genres)"),
            "--count-per-class": dict(type=int, dest="count_per_class"),
            "--min-genre-count": dict(type=int, dest="min_genre_count"),
            "--split": dict(type=float, help="train fraction in (0,1)"),
            "--seed": dict(type=int),
            "--mode": dict(choices=["paper", "smooth"], help="tf-idf mode"),
            "--model": dict(choices=["knn", "mlp"]),
            "--k": dict(type=int, help="KNN neighbor count"),
            "--hidden": dict(type=int, help="MLP hidden layer size"),
            "--iters": dict(type=int, help="MLP iteration budget"),
            "--threshold": dict(type=float, help="MLP decision threshold"),
            "--out": dict(help="output directory"),
        }
        for flag in flags:
            p.add_argument(flag, **spec[flag])
        return p

    add("ingest", "--root", "--labels", "--count-per-class", "--min-genre-count", "--out")
    add("train", "--split", "--seed", "--mode", "--model", "--k", "--hidden",
        "--iters", "--threshold", "--out")
    add("evaluate", "--split", "--seed", "--threshold", "--out")
    add("report", "--out")
    return parser


COMMANDS = {
    "ingest": cmd_ingest,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    config_path = args.pop("config", None)
    try:
        cfg = load_config(config_path, args)
        COMMANDS[command](cfg)
    except GenreClfError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
