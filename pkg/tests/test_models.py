import numpy as np
import pytest

from foiltree import dataset as ds
from foiltree import models as mdl
from foiltree.errors import LengthMismatch


class TestF1Score:
    def test_binary_hand_computed(self):
        # TP=1, FP=1, FN=1 -> precision 0.5, recall 0.5, F1 0.5
        predicted = np.array([1, 0, 1])
        truth = np.array([1, 1, 0])
        assert mdl.f1_score(predicted, truth) == pytest.approx(0.5)

    def test_binary_perfect(self):
        v = np.array([0, 1, 1, 0])
        assert mdl.f1_score(v, v) == 1.0

    def test_binary_no_positives_anywhere(self):
        z = np.zeros(4, dtype=int)
        assert mdl.f1_score(z, z) == 0.0

    def test_macro_hand_computed(self):
        predicted = np.array([0, 1, 2, 2])
        truth = np.array([0, 1, 1, 2])
        # class 0: perfect; class 1: P=1, R=0.5 -> 2/3; class 2: P=0.5, R=1 -> 2/3
        expected = (1.0 + 2 / 3 + 2 / 3) / 3
        got = mdl.f1_score(predicted, truth, averaging="macro", n_classes=3)
        assert got == pytest.approx(expected)

    def test_macro_absent_class_counts_as_perfect(self):
        predicted = np.array([0, 0])
        truth = np.array([0, 0])
        got = mdl.f1_score(predicted, truth, averaging="macro", n_classes=2)
        assert got == pytest.approx(1.0)

    def test_bounds_random(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            n = int(rng.integers(1, 40))
            a = rng.integers(0, 3, size=n)
            b = rng.integers(0, 3, size=n)
            v = mdl.f1_score(a, b, averaging="macro", n_classes=3)
            assert 0.0 <= v <= 1.0

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(LengthMismatch):
            mdl.f1_score(np.array([1]), np.array([1, 0]))

    def test_empty_rejected(self):
        with pytest.raises(LengthMismatch):
            mdl.f1_score(np.array([], dtype=int), np.array([], dtype=int))

    def test_unknown_averaging(self):
        with pytest.raises(ValueError):
            mdl.f1_score(np.array([1]), np.array([1]), averaging="micro")


class TestFit:
    def test_kinds_exposed(self):
        assert set(mdl.MODEL_KINDS) == {
            "logistic-regression",
            "random-forest",
            "mlp",
            "linear-svm",
        }

    @pytest.mark.parametrize("kind", mdl.MODEL_KINDS)
    def test_predict_shapes(self, kind, iris_split):
        train, test = iris_split
        model = mdl.fit(kind, train, seed=0)
        pred = model.predict(test.X)
        assert pred.shape == (test.n_instances,)
        assert pred.dtype == np.intp
        assert ((pred >= 0) & (pred < 3)).all()
        dist = model.predict_distribution(test.X)
        assert dist.shape == (test.n_instances, 3)
        assert np.allclose(dist.sum(axis=1), 1.0)
        assert (dist >= 0).all()

    @pytest.mark.parametrize("kind", mdl.MODEL_KINDS)
    def test_distribution_argmax_matches_predict(self, kind, iris_split):
        train, test = iris_split
        model = mdl.fit(kind, train, seed=0)
        dist = model.predict_distribution(test.X)
        assert np.array_equal(np.argmax(dist, axis=1), model.predict(test.X))

    def test_deterministic_under_seed(self, iris_split):
        train, test = iris_split
        a = mdl.fit("mlp", train, seed=3)
        b = mdl.fit("mlp", train, seed=3)
        assert np.array_equal(a.predict(test.X), b.predict(test.X))

    def test_mlp_iris_f1(self, iris):
        train, test = ds.split(iris, 0.3, seed=1)
        model = mdl.fit("mlp", train, seed=0)
        f1 = mdl.f1_score(model.predict(test.X), test.y, averaging="macro", n_classes=3)
        assert f1 >= 0.90

    def test_logistic_separable_toy_perfect(self):
        # 20 points, two clearly separated blobs in 2 features
        rng = np.random.default_rng(1)
        X = np.vstack([rng.normal(0, 0.3, (10, 2)), rng.normal(5, 0.3, (10, 2))])
        y = np.array([0] * 10 + [1] * 10)
        d = ds.Dataset(
            features=[ds.FeatureMeta(name="a"), ds.FeatureMeta(name="b")],
            X=X,
            y=y,
            class_names=["u", "v"],
        )
        model = mdl.fit("logistic-regression", d, seed=0)
        assert (model.predict(d.X) == y).all()

    def test_single_class_training_predicts_constant(self):
        d = ds.Dataset(
            features=[ds.FeatureMeta(name="a")],
            X=np.array([[1.0], [2.0], [3.0]]),
            y=np.array([1, 1, 1]),
            class_names=["u", "v"],
        )
        model = mdl.fit("random-forest", d, seed=0)
        test_X = np.array([[0.0], [9.0]])
        assert model.predict(test_X).tolist() == [1, 1]
        same = np.array([1, 1])
        assert mdl.f1_score(model.predict(test_X), same) == 1.0

    def test_unknown_kind(self, iris_split):
        with pytest.raises(ValueError):
            mdl.fit("gradient-boosting", iris_split[0])

    def test_unknown_hyperparameter(self, iris_split):
        with pytest.raises(ValueError):
            mdl.fit("mlp", iris_split[0], hyperparams={"max_iter": 10, "nonsense": 1})

    def test_hyperparameter_override(self, iris_split):
        train, _ = iris_split
        model = mdl.fit("random-forest", train, hyperparams={"n_estimators": 5}, seed=0)
        assert model.hyperparams["n_estimators"] == 5

    def test_predict_one_matches_batch(self, iris_split, iris_mlp):
        _, test = iris_split
        assert iris_mlp.predict_one(test.X[0]) == iris_mlp.predict(test.X[:1])[0]
        assert np.allclose(iris_mlp.distribution_one(test.X[0]), iris_mlp.predict_distribution(test.X[:1])[0])


class TestSaveLoad:
    def test_roundtrip(self, iris_split, tmp_path, iris_mlp):
        _, test = iris_split
        p = tmp_path / "model.pkl"
        mdl.save_model(iris_mlp, p)
        loaded = mdl.load_model(p)
        assert loaded.kind == iris_mlp.kind
        assert loaded.n_classes == iris_mlp.n_classes
        assert np.array_equal(loaded.predict(test.X), iris_mlp.predict(test.X))

    def test_rejects_foreign_pickle(self, tmp_path):
        import pickle

        p = tmp_path / "junk.pkl"
        p.write_bytes(pickle.dumps({"surprise": 1}))
        with pytest.raises(ValueError):
            mdl.load_model(p)
