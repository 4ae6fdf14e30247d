import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genreclf.errors import EmptyMatrix, ShapeMismatch
from genreclf.metrics import (
    confusion_counts,
    elementwise_accuracy,
    evaluate,
    hamming_loss,
    micro_precision,
    micro_recall,
    no_genre_ratio,
    subset_accuracy,
)

matrix_pairs = st.integers(1, 12).flatmap(
    lambda n: st.integers(1, 6).flatmap(
        lambda k: st.tuples(
            st.lists(
                st.lists(st.integers(0, 1), min_size=k, max_size=k),
                min_size=n,
                max_size=n,
            ),
            st.lists(
                st.lists(st.integers(0, 1), min_size=k, max_size=k),
                min_size=n,
                max_size=n,
            ),
        )
    )
)


def as_pair(pair):
    return np.array(pair[0], np.uint8), np.array(pair[1], np.uint8)


class TestConfusionCounts:
    def test_perfect_prediction(self):
        t = np.array([[1, 0, 1], [0, 1, 0]], np.uint8)
        c = confusion_counts(t, t)
        assert np.all(c.fp == 0) and np.all(c.fn == 0)

    def test_total_disagreement(self):
        t = np.array([[1, 0], [0, 1]], np.uint8)
        c = confusion_counts(1 - t, t)
        assert np.all(c.tp == 0) and np.all(c.tn == 0)

    def test_against_naive_double_loop(self):
        rng = np.random.default_rng(1)
        pred = rng.integers(0, 2, (10, 4)).astype(np.uint8)
        target = rng.integers(0, 2, (10, 4)).astype(np.uint8)
        c = confusion_counts(pred, target)
        for j in range(4):
            tp = fp = fn = tn = 0
            for i in range(10):
                if pred[i][j] and target[i][j]:
                    tp += 1
                elif pred[i][j] and not target[i][j]:
                    fp += 1
                elif not pred[i][j] and target[i][j]:
                    fn += 1
                else:
                    tn += 1
            assert (c.tp[j], c.fp[j], c.fn[j], c.tn[j]) == (tp, fp, fn, tn)

    def test_counts_sum_to_n(self):
        rng = np.random.default_rng(2)
        pred = rng.integers(0, 2, (15, 3)).astype(np.uint8)
        target = rng.integers(0, 2, (15, 3)).astype(np.uint8)
        c = confusion_counts(pred, target)
        assert np.all(c.tp + c.fp + c.fn + c.tn == 15)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            confusion_counts(np.zeros((2, 3)), np.zeros((3, 2)))


class TestElementwiseAccuracy:
    def test_perfect(self):
        t = np.array([[1, 0], [0, 1]], np.uint8)
        assert elementwise_accuracy(confusion_counts(t, t)) == 1.0

    def test_one_wrong_bit_of_six(self):
        target = np.array([[1, 0, 0], [0, 1, 0]], np.uint8)
        pred = target.copy()
        pred[0, 2] = 1
        assert elementwise_accuracy(confusion_counts(pred, target)) == pytest.approx(5 / 6)

    @given(matrix_pairs)
    @settings(max_examples=100, deadline=None)
    def test_complement_of_hamming_loss(self, pair):
        pred, target = as_pair(pair)
        acc = elementwise_accuracy(confusion_counts(pred, target))
        assert acc + hamming_loss(pred, target) == pytest.approx(1.0, abs=1e-15)


class TestSubsetAccuracy:
    def test_half(self):
        target = np.array([[1, 0], [0, 1]], np.uint8)
        pred = np.array([[1, 0], [1, 1]], np.uint8)
        assert subset_accuracy(pred, target) == 0.5

    def test_all_exact(self):
        t = np.array([[1, 1, 0]], np.uint8)
        assert subset_accuracy(t, t) == 1.0

    @given(matrix_pairs)
    @settings(max_examples=100, deadline=None)
    def test_bounded_by_elementwise(self, pair):
        pred, target = as_pair(pair)
        sub = subset_accuracy(pred, target)
        elem = elementwise_accuracy(confusion_counts(pred, target))
        assert sub <= elem + 1e-15


class TestMicroPrecisionRecall:
    def test_hand_count(self):
        # TP=[2,1], FP=[0,1] -> precision 3/4
        pred = np.array([[1, 1], [1, 1], [0, 0]], np.uint8)
        target = np.array([[1, 1], [1, 0], [0, 0]], np.uint8)
        c = confusion_counts(pred, target)
        assert micro_precision(c) == pytest.approx(3 / 4)

    def test_empty_denominator_convention(self):
        pred = np.zeros((3, 2), np.uint8)
        target = np.ones((3, 2), np.uint8)
        assert micro_precision(confusion_counts(pred, target)) == 1.0
        assert micro_recall(confusion_counts(target, pred)) == 1.0

    def test_recall_hand_count(self):
        pred = np.array([[1, 0], [0, 0]], np.uint8)
        target = np.array([[1, 0], [1, 1]], np.uint8)
        c = confusion_counts(pred, target)
        assert micro_recall(c) == pytest.approx(1 / 3)

    @given(matrix_pairs, st.permutations(range(6)))
    @settings(max_examples=100, deadline=None)
    def test_invariant_under_column_permutation(self, pair, perm):
        pred, target = as_pair(pair)
        k = pred.shape[1]
        cols = [p for p in perm if p < k]
        c1 = confusion_counts(pred, target)
        c2 = confusion_counts(pred[:, cols], target[:, cols])
        assert micro_precision(c1) == pytest.approx(micro_precision(c2))
        assert micro_recall(c1) == pytest.approx(micro_recall(c2))


class TestHammingLoss:
    def test_perfect(self):
        t = np.array([[1, 0]], np.uint8)
        assert hamming_loss(t, t) == 0.0

    def test_complement(self):
        t = np.array([[1, 0], [0, 1]], np.uint8)
        assert hamming_loss(1 - t, t) == 1.0

    def test_one_bit_of_six(self):
        target = np.array([[1, 0, 0], [0, 1, 0]], np.uint8)
        pred = target.copy()
        pred[1, 0] = 1
        assert hamming_loss(pred, target) == pytest.approx(1 / 6)

    @given(matrix_pairs)
    @settings(max_examples=100, deadline=None)
    def test_symmetry(self, pair):
        pred, target = as_pair(pair)
        assert hamming_loss(pred, target) == hamming_loss(target, pred)


class TestNoGenreRatio:
    def test_two_empty_of_twenty(self):
        pred = np.ones((20, 3), np.uint8)
        pred[3] = 0
        pred[17] = 0
        assert no_genre_ratio(pred) == pytest.approx(0.1)

    def test_no_empty_rows(self):
        assert no_genre_ratio(np.ones((4, 2), np.uint8)) == 0.0

    def test_empty_matrix(self):
        with pytest.raises(EmptyMatrix):
            no_genre_ratio(np.zeros((0, 3), np.uint8))


class TestEvaluate:
    def test_perfect_prediction_pattern(self):
        t = np.array([[1, 0], [0, 1], [1, 1]], np.uint8)
        r = evaluate(t, t, ["A", "B"])
        assert r.subset_accuracy == 1.0
        assert r.elementwise_accuracy == 1.0
        assert r.precision_micro == 1.0
        assert r.recall_micro == 1.0
        assert r.hamming_loss == 0.0
        assert r.no_genre_ratio == 0.0
        assert r.predicted_counts == r.target_counts == (2, 2)

    def test_hand_computed_4x3_fixture(self):
        target = np.array(
            [[1, 0, 0], [1, 1, 0], [0, 0, 1], [0, 1, 1]], np.uint8
        )
        pred = np.array(
            [[1, 0, 0], [1, 0, 0], [0, 1, 1], [0, 0, 0]], np.uint8
        )
        # hand counts: TP=3, FP=1, FN=3, TN=5; 8 of 12 bits correct;
        # 1 exact row; 1 empty predicted row
        r = evaluate(pred, target, ["A", "B", "C"])
        assert r.subset_accuracy == pytest.approx(1 / 4, abs=1e-12)
        assert r.elementwise_accuracy == pytest.approx(8 / 12, abs=1e-12)
        assert r.precision_micro == pytest.approx(3 / 4, abs=1e-12)
        assert r.recall_micro == pytest.approx(3 / 6, abs=1e-12)
        assert r.hamming_loss == pytest.approx(4 / 12, abs=1e-12)
        assert r.no_genre_ratio == pytest.approx(1 / 4, abs=1e-12)
        assert r.predicted_counts == (2, 1, 1)
        assert r.target_counts == (2, 2, 2)

    @given(matrix_pairs)
    @settings(max_examples=100, deadline=None)
    def test_report_identity_and_bounds(self, pair):
        pred, target = as_pair(pair)
        genres = [f"G{j}" for j in range(pred.shape[1])]
        r = evaluate(pred, target, genres)
        assert r.elementwise_accuracy + r.hamming_loss == pytest.approx(1.0, abs=1e-15)
        for value in (
            r.subset_accuracy, r.elementwise_accuracy, r.precision_micro,
            r.recall_micro, r.hamming_loss, r.no_genre_ratio,
        ):
            assert 0.0 <= value <= 1.0

    def test_json_round_trip(self):
        import json

        t = np.array([[1, 0], [0, 1]], np.uint8)
        r = evaluate(t, t, ["A", "B"])
        data = json.loads(r.to_json())
        assert data["hamming_loss"] == 0.0
        assert data["histogram"] == [
            {"genre": "A", "predicted": 1, "target": 1},
            {"genre": "B", "predicted": 1, "target": 1},
        ]

    def test_table_contains_all_metrics(self):
        t = np.array([[1, 0]], np.uint8)
        table = evaluate(t, t, ["A", "B"]).to_table()
        for key in ("subset", "elementwise", "precision", "recall", "hamming", "no-genre"):
            assert key in table
