import math

import numpy as np
import pytest
import scipy.sparse as sp

from misinfonet.classifier import (
    ClassifierModel,
    Dataset,
    Hyperparams,
    evaluate,
    load_model,
    loss_and_gradient,
    oversample,
    predict,
    save_model,
    split,
    train,
    tune,
)


def random_dataset(n, d, seed, p_positive=0.5, density=0.4):
    rng = np.random.default_rng(seed)
    features = sp.csr_matrix((rng.random((n, d)) < density).astype(float))
    labels = (rng.random(n) < p_positive).astype(int)
    # ensure both classes appear
    labels[0], labels[1] = 0, 1
    return Dataset(features, labels, [f"d{i}.com" for i in range(n)],
                   [f"u{j}" for j in range(d)])


def separable_dataset(n=200, seed=7):
    rng = np.random.default_rng(seed)
    labels = (rng.random(n) < 0.5).astype(int)
    # two disjoint indicator features: class k lights up feature k
    dense = np.zeros((n, 2))
    dense[np.arange(n), labels] = 1.0
    return Dataset(sp.csr_matrix(dense), labels,
                   [f"d{i}.com" for i in range(n)], ["u0", "u1"])


class TestGradient:
    def test_matches_central_finite_differences(self):
        for seed in range(5):
            data = random_dataset(10, 8, seed)
            rng = np.random.default_rng(100 + seed)
            w = rng.normal(size=8)
            b = float(rng.normal())
            l2 = 0.1
            _, grad_w, grad_b = loss_and_gradient(w, b, data.features, data.labels, l2)
            eps = 1e-6
            numeric = np.zeros(9)
            for k in range(8):
                step = np.zeros(8)
                step[k] = eps
                up, _, _ = loss_and_gradient(w + step, b, data.features, data.labels, l2)
                dn, _, _ = loss_and_gradient(w - step, b, data.features, data.labels, l2)
                numeric[k] = (up - dn) / (2 * eps)
            up, _, _ = loss_and_gradient(w, b + eps, data.features, data.labels, l2)
            dn, _, _ = loss_and_gradient(w, b - eps, data.features, data.labels, l2)
            numeric[8] = (up - dn) / (2 * eps)
            analytic = np.append(grad_w, grad_b)
            rel = np.linalg.norm(analytic - numeric) / max(np.linalg.norm(numeric), 1e-12)
            assert rel <= 1e-5


class TestTrain:
    def test_loss_non_increasing(self):
        data = random_dataset(60, 12, 3)
        model = train(data, Hyperparams(l2_strength=0.01, max_epochs=200))
        history = model.loss_history
        assert all(b <= a + 1e-12 for a, b in zip(history, history[1:]))

    def test_separable_data_high_accuracy(self):
        data = separable_dataset()
        model = train(data, Hyperparams(max_epochs=2000, learning_rate=2.0), seed=7)
        accuracy = np.mean((predict(model, data.features) >= 0.5) == data.labels)
        assert accuracy >= 0.99

    def test_intercept_only_optimum(self):
        n = 50
        labels = np.array([1] * 20 + [0] * 30)
        data = Dataset(sp.csr_matrix((n, 4)), labels,
                       [f"d{i}" for i in range(n)], list("abcd"))
        model = train(data, Hyperparams(max_epochs=5000, convergence_tol=1e-10))
        prior = 20 / 50
        assert model.weights == pytest.approx(np.zeros(4))
        assert model.bias == pytest.approx(math.log(prior / (1 - prior)), abs=1e-6)

    def test_zero_epoch_budget_gives_trivial_model(self):
        data = random_dataset(20, 5, 1)
        model = train(data, Hyperparams(max_epochs=0))
        assert np.all(model.weights == 0)
        assert model.bias == 0.0
        assert np.all(predict(model, data.features) == 0.5)

    def test_deterministic_for_fixed_inputs(self):
        data = random_dataset(40, 10, 9)
        hp = Hyperparams(l2_strength=0.05, max_epochs=100)
        m1, m2 = train(data, hp, seed=4), train(data, hp, seed=4)
        assert np.array_equal(m1.weights, m2.weights)
        assert m1.bias == m2.bias


class TestPredict:
    def test_zero_model_gives_half(self):
        model = ClassifierModel(np.zeros(3), 0.0, Hyperparams())
        x = sp.csr_matrix(np.array([[1.0, 0.0, 1.0]]))
        assert predict(model, x)[0] == 0.5

    def test_log3_margin_gives_three_quarters(self):
        model = ClassifierModel(np.array([math.log(3)]), 0.0, Hyperparams())
        x = sp.csr_matrix(np.array([[1.0]]))
        assert predict(model, x)[0] == pytest.approx(0.75, abs=1e-12)

    def test_monotone_in_margin(self):
        rng = np.random.default_rng(2)
        model = ClassifierModel(rng.normal(size=6), 0.3, Hyperparams())
        X = sp.csr_matrix((rng.random((30, 6)) < 0.5).astype(float))
        margins = np.asarray(X @ model.weights).ravel() + model.bias
        probs = predict(model, X)
        order = np.argsort(margins)
        assert np.all(np.diff(probs[order]) >= 0)

    def test_dimension_mismatch_names_both(self):
        model = ClassifierModel(np.zeros(4), 0.0, Hyperparams())
        with pytest.raises(ValueError, match="2.*4|4.*2"):
            predict(model, sp.csr_matrix(np.zeros((1, 2))))


class TestSplit:
    def test_counts_and_stratification(self):
        data = random_dataset(100, 5, 0, p_positive=0.4)
        train_set, test_set = split(data, 0.25, seed=3)
        assert len(train_set.labels) + len(test_set.labels) == 100
        assert set(train_set.domain_names).isdisjoint(test_set.domain_names)
        for cls in (0, 1):
            total = int(np.sum(data.labels == cls))
            in_test = int(np.sum(test_set.labels == cls))
            assert abs(in_test - total * 0.25) <= 1

    def test_zero_test_fraction(self):
        data = random_dataset(30, 4, 5)
        train_set, test_set = split(data, 0.0, seed=0)
        assert len(test_set.labels) == 0
        assert len(train_set.labels) == 30

    def test_seed_determinism(self):
        data = random_dataset(80, 6, 8)
        partitions = [split(data, 0.25, seed=11)[1].domain_names for _ in range(3)]
        assert partitions[0] == partitions[1] == partitions[2]

    def test_different_seeds_differ(self):
        data = random_dataset(80, 6, 8)
        a = split(data, 0.25, seed=1)[1].domain_names
        b = split(data, 0.25, seed=2)[1].domain_names
        assert a != b

    def test_paper_scale_counts(self):
        data = random_dataset(1156, 3, 0, p_positive=0.39)
        train_set, test_set = split(data, 0.25, seed=0)
        assert abs(len(test_set.labels) - 289) <= 1
        assert abs(len(train_set.labels) - 867) <= 1


class TestOversample:
    def test_balances_counts_exactly(self):
        data = random_dataset(800, 4, 1, p_positive=0.375)
        balanced = oversample(data, seed=0)
        assert int(np.sum(balanced.labels == 0)) == int(np.sum(balanced.labels == 1))

    def test_majority_untouched(self):
        data = random_dataset(100, 4, 2, p_positive=0.3)
        majority = [d for d, y in zip(data.domain_names, data.labels) if y == 0]
        balanced = oversample(data, seed=1)
        kept = [d for d, y in zip(balanced.domain_names, balanced.labels) if y == 0]
        assert kept[: len(majority)] == majority
        assert len(kept) == len(majority)

    def test_balanced_input_unchanged(self):
        labels = np.array([0, 1] * 10)
        data = Dataset(sp.csr_matrix(np.eye(20)), labels,
                       [f"d{i}" for i in range(20)], [f"u{i}" for i in range(20)])
        assert oversample(data, seed=0) is data

    def test_seeded(self):
        data = random_dataset(60, 4, 3, p_positive=0.25)
        a = oversample(data, seed=9).domain_names
        b = oversample(data, seed=9).domain_names
        assert a == b


class TestTuneAndEvaluate:
    def test_single_point_grid(self):
        data = random_dataset(40, 6, 4)
        hp = Hyperparams(l2_strength=0.5, max_epochs=50)
        assert tune(data, [hp], k_folds=3, seed=0) is hp

    def test_f1_tie_resolved_toward_stronger_regularization(self):
        # separable data: both settings reach F1 1.0 in every fold, because
        # even heavy shrinkage preserves the sign of the decision margin
        data = separable_dataset(120, seed=3)
        weak = Hyperparams(l2_strength=0.001, max_epochs=300)
        crushing = Hyperparams(l2_strength=1e4, max_epochs=300)
        chosen = tune(data, [crushing, weak], k_folds=4, seed=1)
        assert chosen is crushing

    def test_selection_stable_at_fixed_seed(self):
        data = random_dataset(60, 8, 6)
        grid = [Hyperparams(l2_strength=v, max_epochs=60) for v in (0.01, 0.1, 1.0)]
        picks = {tune(data, grid, k_folds=3, seed=5).l2_strength for _ in range(3)}
        assert len(picks) == 1

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError):
            tune(random_dataset(10, 3, 0), [], k_folds=2, seed=0)

    def test_hand_built_confusion(self):
        # TP=3 FP=1 FN=2 TN=4 for the misinfo class
        labels = np.array([1] * 5 + [0] * 5)
        margins = np.array([5, 5, 5, -5, -5, 5, -5, -5, -5, -5.0])
        data = Dataset(sp.csr_matrix(margins.reshape(-1, 1)), labels,
                       [f"d{i}" for i in range(10)], ["u0"])
        model = ClassifierModel(np.array([1.0]), 0.0, Hyperparams())
        metrics = evaluate(model, data)
        assert metrics.confusion == {"tp": 3, "fp": 1, "fn": 2, "tn": 4}
        assert metrics.precision["misinfo"] == pytest.approx(0.75)
        assert metrics.recall["misinfo"] == pytest.approx(0.6)
        assert metrics.f1["misinfo"] == pytest.approx(2 / 3, abs=1e-3)
        assert metrics.support == {"misinfo": 5, "info": 5}

    def test_perfect_predictor(self):
        data = separable_dataset(40, seed=5)
        model = train(data, Hyperparams(max_epochs=2000, learning_rate=2.0))
        metrics = evaluate(model, data)
        assert metrics.precision == {"misinfo": 1.0, "info": 1.0}
        assert metrics.f1 == {"misinfo": 1.0, "info": 1.0}

    def test_class_symmetry_under_relabeling(self):
        data = random_dataset(50, 6, 12)
        model = train(data, Hyperparams(max_epochs=100))
        metrics = evaluate(model, data)
        flipped = Dataset(data.features, 1 - data.labels, data.domain_names,
                          data.user_ids)
        flipped_model = ClassifierModel(-model.weights, -model.bias, model.hyperparams)
        flipped_metrics = evaluate(flipped_model, flipped)
        assert flipped_metrics.precision["misinfo"] == pytest.approx(
            metrics.precision["info"]
        )
        assert flipped_metrics.f1["info"] == pytest.approx(metrics.f1["misinfo"])

    def test_empty_test_set_rejected(self):
        data = random_dataset(10, 3, 1)
        model = train(data, Hyperparams(max_epochs=5))
        with pytest.raises(ValueError):
            evaluate(model, data.subset([]))


class TestSparseDenseEquivalence:
    def test_identical_training_trajectories(self):
        dense = np.random.default_rng(0).random((30, 8)) < 0.4
        labels = np.random.default_rng(1).integers(0, 2, 30)
        labels[0], labels[1] = 0, 1
        names = [f"d{i}" for i in range(30)]
        users = [f"u{j}" for j in range(8)]
        hp = Hyperparams(l2_strength=0.02, max_epochs=80)
        sparse_model = train(Dataset(sp.csr_matrix(dense.astype(float)), labels, names, users), hp)
        dense_model = train(Dataset(np.asarray(dense, dtype=float), labels, names, users), hp)
        assert np.allclose(sparse_model.weights, dense_model.weights)
        assert sparse_model.bias == pytest.approx(dense_model.bias)


class TestModelFile:
    def test_roundtrip(self, tmp_path):
        data = random_dataset(30, 10, 6)
        model = train(data, Hyperparams(l2_strength=0.01, max_epochs=60), seed=2)
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        assert np.allclose(loaded.weights, model.weights)
        assert loaded.bias == pytest.approx(model.bias)
        assert loaded.user_ids == model.user_ids
        assert loaded.hyperparams == model.hyperparams
        assert np.allclose(predict(loaded, data.features), predict(model, data.features))
