"""HTTP service exposing datasets, model training, and explanations.

Sessions are in-process: bundled datasets are split once at startup, models
train synchronously on request, and every explanation's tree is retained in
a bounded most-recently-used cache so a client can fetch and render it
afterwards. Errors always carry a machine-readable ``code`` and a human
``message`` in the response detail.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import dataset as ds
from . import models as mdl
from .errors import FoilEqualsFact, FoilTreeError
from .explanation import (
    VERBOSITIES,
    ExplainerConfig,
    explain_with_tree,
    render_text,
    to_json,
)
from .sampling import SAMPLING_METHODS
from .tree import complement

import json


def _error(status: int, code: str, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": code, "message": message})


@dataclass
class _DatasetEntry:
    data: ds.Dataset
    train: ds.Dataset
    test: ds.Dataset


@dataclass
class _ModelEntry:
    model_id: str
    dataset_id: str
    kind: str
    seed: int
    model: mdl.TrainedModel
    f1: float


@dataclass
class _State:
    split_seed: int
    test_fraction: float
    cache_size: int
    datasets: dict[str, _DatasetEntry] = field(default_factory=dict)
    models: dict[str, _ModelEntry] = field(default_factory=dict)
    trees: OrderedDict = field(default_factory=OrderedDict)
    counter: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)

    def next_id(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}{self.counter}"

    def cache_tree(self, tree_id: str, payload: dict) -> None:
        self.trees[tree_id] = payload
        self.trees.move_to_end(tree_id)
        while len(self.trees) > self.cache_size:
            self.trees.popitem(last=False)


class TrainRequest(BaseModel):
    dataset_id: str
    kind: str
    seed: int = 0


class PredictRequest(BaseModel):
    test_index: int | None = None
    values: list[float] | None = None


class ExplainRequest(BaseModel):
    model_id: str
    test_index: int | None = None
    values: list[float] | None = None
    foil: int | str | None = None
    verbosity: str = "quantitative"
    seed: int = 0
    method: str | None = None
    strategy: str | None = None
    lam: float | None = None
    m: int | None = None


def _dataset_summary(dataset_id: str, entry: _DatasetEntry) -> dict:
    d = entry.data
    return {
        "id": dataset_id,
        "name": d.name,
        "n_instances": d.n_instances,
        "n_features": d.n_features,
        "n_classes": d.n_classes,
        "class_names": d.class_names,
        "n_train": entry.train.n_instances,
        "n_test": entry.test.n_instances,
    }


def create_app(
    split_seed: int = 0,
    test_fraction: float = 0.3,
    cache_size: int = 100,
    ui_dir: str | None = None,
    dataset_names: tuple[str, ...] = ds.BUILTIN_DATASETS,
) -> FastAPI:
    """Build the application with its own isolated state."""
    state = _State(split_seed=split_seed, test_fraction=test_fraction, cache_size=cache_size)
    for name in dataset_names:
        data = ds.load_builtin(name)
        train, test = ds.split(data, test_fraction, seed=split_seed)
        state.datasets[name] = _DatasetEntry(data=data, train=train, test=test)

    app = FastAPI(title="foiltree service", version="1.0")

    def get_dataset(dataset_id: str) -> _DatasetEntry:
        entry = state.datasets.get(dataset_id)
        if entry is None:
            raise _error(404, "UNKNOWN_DATASET", f"no dataset {dataset_id!r}")
        return entry

    def get_model(model_id: str) -> _ModelEntry:
        entry = state.models.get(model_id)
        if entry is None:
            raise _error(404, "UNKNOWN_MODEL", f"no model {model_id!r}")
        return entry

    def resolve_instance(entry: _DatasetEntry, test_index, values) -> np.ndarray:
        if (test_index is None) == (values is None):
            raise _error(400, "BAD_INSTANCE", "provide exactly one of test_index or values")
        if test_index is not None:
            if not 0 <= test_index < entry.test.n_instances:
                raise _error(
                    404,
                    "INDEX_OUT_OF_RANGE",
                    f"test split of {entry.data.name} has {entry.test.n_instances} instances",
                )
            return entry.test.X[test_index]
        x = np.asarray(values, dtype=float)
        if x.shape != (entry.data.n_features,):
            raise _error(
                400,
                "BAD_INSTANCE",
                f"expected {entry.data.n_features} values, got {x.shape[0]}",
            )
        return x

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/datasets")
    def list_datasets() -> list[dict]:
        return [_dataset_summary(k, v) for k, v in sorted(state.datasets.items())]

    @app.get("/datasets/{dataset_id}")
    def dataset_detail(dataset_id: str) -> dict:
        entry = get_dataset(dataset_id)
        out = _dataset_summary(dataset_id, entry)
        out["feature_names"] = entry.data.feature_names()
        out["class_counts"] = {
            name: int(c) for name, c in zip(entry.data.class_names, entry.data.class_counts())
        }
        return out

    @app.get("/datasets/{dataset_id}/instances/{index}")
    def dataset_instance(dataset_id: str, index: int) -> dict:
        entry = get_dataset(dataset_id)
        if not 0 <= index < entry.test.n_instances:
            raise _error(
                404,
                "INDEX_OUT_OF_RANGE",
                f"test split of {entry.data.name} has {entry.test.n_instances} instances",
            )
        return {
            "dataset_id": dataset_id,
            "index": index,
            "split": "test",
            "values": [float(v) for v in entry.test.X[index]],
            "feature_names": entry.data.feature_names(),
            "true_class": int(entry.test.y[index]),
            "true_class_name": entry.data.class_names[int(entry.test.y[index])],
        }

    @app.get("/models")
    def list_models() -> list[dict]:
        return [
            {
                "model_id": e.model_id,
                "dataset_id": e.dataset_id,
                "kind": e.kind,
                "seed": e.seed,
                "f1": e.f1,
                "converged": e.model.converged,
            }
            for e in state.models.values()
        ]

    @app.post("/models")
    def train_model(req: TrainRequest) -> dict:
        entry = get_dataset(req.dataset_id)
        if req.kind not in mdl.MODEL_KINDS:
            raise _error(
                400, "UNKNOWN_MODEL_KIND", f"{req.kind!r} is not one of {list(mdl.MODEL_KINDS)}"
            )
        with state.lock:
            model = mdl.fit(req.kind, entry.train, seed=req.seed)
            f1 = mdl.f1_score(
                model.predict(entry.test.X),
                entry.test.y,
                averaging="macro",
                n_classes=entry.data.n_classes,
            )
            model_id = state.next_id("m")
            state.models[model_id] = _ModelEntry(
                model_id=model_id,
                dataset_id=req.dataset_id,
                kind=req.kind,
                seed=req.seed,
                model=model,
                f1=f1,
            )
        return {
            "model_id": model_id,
            "dataset_id": req.dataset_id,
            "kind": req.kind,
            "seed": req.seed,
            "f1": f1,
            "converged": model.converged,
        }

    @app.post("/models/{model_id}/predict")
    def predict(model_id: str, req: PredictRequest) -> dict:
        entry = get_model(model_id)
        dentry = get_dataset(entry.dataset_id)
        x = resolve_instance(dentry, req.test_index, req.values)
        predicted = int(entry.model.predict_one(x))
        dist = entry.model.distribution_one(x)
        return {
            "model_id": model_id,
            "predicted_class": predicted,
            "predicted_class_name": dentry.data.class_names[predicted],
            "distribution": [float(p) for p in dist],
            "class_names": dentry.data.class_names,
        }

    @app.post("/explain")
    def explain_instance(req: ExplainRequest) -> dict:
        entry = get_model(req.model_id)
        dentry = get_dataset(entry.dataset_id)
        x_q = resolve_instance(dentry, req.test_index, req.values)
        if req.verbosity not in VERBOSITIES:
            raise _error(400, "BAD_VERBOSITY", f"verbosity must be one of {list(VERBOSITIES)}")

        requested = None
        if req.foil is not None:
            if isinstance(req.foil, str) and req.foil in dentry.data.class_names:
                requested = dentry.data.class_names.index(req.foil)
            else:
                try:
                    requested = int(req.foil)
                except (TypeError, ValueError):
                    raise _error(
                        400,
                        "UNKNOWN_CLASS",
                        f"{req.foil!r} is neither a class name nor an index",
                    )
                if not 0 <= requested < dentry.data.n_classes:
                    raise _error(400, "UNKNOWN_CLASS", f"class index {requested} out of range")

        kwargs = {}
        if req.method is not None:
            if req.method not in SAMPLING_METHODS:
                raise _error(400, "BAD_CONFIG", f"method must be one of {list(SAMPLING_METHODS)}")
            kwargs["method"] = req.method
        if req.strategy is not None:
            kwargs["strategy"] = req.strategy
        if req.lam is not None:
            kwargs["lam"] = req.lam
        if req.m is not None:
            kwargs["m"] = req.m
        try:
            config = ExplainerConfig(**kwargs)
        except ValueError as err:
            raise _error(400, "BAD_CONFIG", str(err))

        try:
            explanation, tree = explain_with_tree(
                entry.model,
                dentry.train,
                x_q,
                requested_foil=requested,
                config=config,
                seed=req.seed,
            )
        except FoilEqualsFact as err:
            raise _error(400, "FOIL_EQUALS_FACT", str(err))
        except FoilTreeError as err:
            raise _error(500, "EXPLAIN_FAILED", str(err))

        conds = (
            complement(tree, explanation.fact_leaf, explanation.foil_leaf)
            if explanation.foil_region_found and not explanation.zero_length
            else []
        )
        literal_nodes = _representative_nodes(tree, conds, explanation.literals)

        with state.lock:
            tree_id = state.next_id("t")
            state.cache_tree(
                tree_id,
                {
                    "tree_id": tree_id,
                    "model_id": req.model_id,
                    "dataset_id": entry.dataset_id,
                    "tree": tree.export(),
                    "fact_leaf": explanation.fact_leaf,
                    "foil_leaf": explanation.foil_leaf,
                    "complement_nodes": [c[0] for c in conds],
                    "literal_nodes": literal_nodes,
                    "feature_names": dentry.data.feature_names(),
                    "class_names": dentry.data.class_names,
                },
            )

        return {
            "model_id": req.model_id,
            "dataset_id": entry.dataset_id,
            "tree_id": tree_id,
            "explanation": json.loads(to_json(explanation, dentry.data.features)),
            "fact_name": dentry.data.class_names[explanation.fact],
            "foil_name": dentry.data.class_names[explanation.foil],
            "feature_names": dentry.data.feature_names(),
            "dialogue": {
                level: render_text(explanation, dentry.data.class_names, dentry.data.features, level)
                for level in VERBOSITIES
            },
            "verbosity": req.verbosity,
            "literal_nodes": literal_nodes,
        }

    @app.get("/trees/{tree_id}")
    def get_tree(tree_id: str) -> dict:
        with state.lock:
            payload = state.trees.get(tree_id)
            if payload is None:
                raise _error(
                    404, "TREE_NOT_FOUND", f"tree {tree_id!r} expired from the cache or never existed"
                )
            state.trees.move_to_end(tree_id)
        return payload

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _representative_nodes(tree, conds, literals) -> list[int]:
    """One tree node per merged literal: the deepest condition node that
    contributes the literal's binding bound. Keeps the rendered highlight
    count equal to the explanation's literal count."""
    out = []
    for lit in literals:
        candidates = []
        for node_id, feature, threshold, branch in conds:
            if feature != lit.feature:
                continue
            if branch == ">" and lit.lower is not None and threshold == lit.lower:
                candidates.append(node_id)
            if branch == "<=" and lit.upper is not None and threshold == lit.upper:
                candidates.append(node_id)
        if candidates:
            out.append(max(candidates, key=lambda nid: tree.nodes[nid].depth))
    return out
