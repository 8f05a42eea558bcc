import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from foiltree import dataset as ds
from foiltree import models as mdl


@pytest.fixture(scope="session")
def iris():
    return ds.load_builtin("iris")


@pytest.fixture(scope="session")
def iris_split(iris):
    return ds.split(iris, 0.3, seed=0)


@pytest.fixture(scope="session")
def iris_mlp(iris_split):
    train, _ = iris_split
    return mdl.fit("mlp", train, seed=0)


@pytest.fixture(scope="session")
def iris_forest(iris_split):
    train, _ = iris_split
    return mdl.fit("random-forest", train, seed=0)


@pytest.fixture(scope="session")
def small_grid(toy_binary):
    """Cheap two-dataset, two-model benchmark shared by report and cli tests."""
    from foiltree.evaluation import run_grid
    from foiltree.explanation import ExplainerConfig

    return run_grid(
        datasets=["iris", toy_binary],
        model_kinds=["logistic-regression", "mlp"],
        config=ExplainerConfig(m=200),
        master_seed=0,
        repetitions=1,
    )


@pytest.fixture(scope="session")
def toy_binary():
    """Tiny separable 1-feature, 2-class dataset for fast pipeline tests."""
    rng = np.random.default_rng(5)
    x0 = rng.normal(0.0, 0.6, size=(40, 1))
    x1 = rng.normal(4.0, 0.6, size=(40, 1))
    X = np.vstack([x0, x1])
    y = np.array([0] * 40 + [1] * 40)
    order = rng.permutation(80)
    return ds.Dataset(
        features=[ds.FeatureMeta(name="x0")],
        X=X[order],
        y=y[order],
        class_names=["low", "high"],
        name="toy",
    )
