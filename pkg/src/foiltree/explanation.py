"""End-to-end contrastive explanation pipeline and dialogue rendering.

``explain`` answers "why class A and not class B?" for one instance: it
resolves the contrast class, builds a locally weighted one-vs-all tree on
model-labeled samples, finds the tree region where the contrast holds, and
reduces the difference between that region and the instance's own region to
a short list of per-feature interval literals. ``render_text`` turns an
explanation into dialogue lines at two levels of detail.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, asdict

import numpy as np

from .dataset import Dataset, FeatureMeta, Scaler, fit_scaler
from .models import ClassifierOracle
from .sampling import (
    MIN_SAMPLE_SIZE,
    SAMPLING_METHODS,
    LocalSample,
    append_query_point,
    default_kernel_width,
    generate_local,
    proximity_weights,
)
from .tree import (
    FoilTree,
    Literal,
    TreeParams,
    complement,
    determine_foil,
    find_fact_leaf,
    find_foil_leaf,
    make_strategy,
    merge_literals,
    train_foil_tree,
)

STRATEGIES = ("nearest", "accuracy-weighted")
VERBOSITIES = ("qualitative", "quantitative")


@dataclass
class ExplainerConfig:
    """Knobs for the explanation pipeline with defaults that work at
    desk scale. ``kernel_width=None`` scales with feature count."""

    method: str = "sampled-existing"
    m: int = 1000
    kernel_width: float | None = None
    max_depth: int = 6
    min_weight_fraction: float = 0.01
    min_impurity_decrease: float = 1e-7
    strategy: str = "nearest"
    lam: float = 2.0

    def __post_init__(self) -> None:
        if self.method not in SAMPLING_METHODS:
            raise ValueError(f"unknown sampling method {self.method!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if not 0 < self.min_weight_fraction < 0.5:
            raise ValueError(f"min_weight_fraction must be in (0, 0.5), got {self.min_weight_fraction}")
        if self.m < MIN_SAMPLE_SIZE:
            raise ValueError(f"m must be >= {MIN_SAMPLE_SIZE}, got {self.m}")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.kernel_width is not None and self.kernel_width <= 0:
            raise ValueError(f"kernel_width must be positive, got {self.kernel_width}")
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if self.min_impurity_decrease < 0:
            raise ValueError(f"min_impurity_decrease must be >= 0, got {self.min_impurity_decrease}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Explanation:
    """Result of one contrastive query.

    ``zero_length`` marks "the instance already sits in a contrast region"
    (empty literals, contrast found). ``foil_region_found`` is False when the
    tree has no contrast-labeled leaf at all; literals are empty then too,
    but the two cases read very differently and are kept distinct.
    """

    fact: int
    foil: int
    literals: list[Literal]
    x_q: np.ndarray
    fact_leaf: int
    foil_leaf: int | None
    tree_fidelity: float
    zero_length: bool

    @property
    def foil_region_found(self) -> bool:
        return self.foil_leaf is not None

    @property
    def length(self) -> int:
        return len(self.literals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Explanation):
            return NotImplemented
        return (
            self.fact == other.fact
            and self.foil == other.foil
            and self.literals == other.literals
            and np.array_equal(self.x_q, other.x_q)
            and self.fact_leaf == other.fact_leaf
            and self.foil_leaf == other.foil_leaf
            and self.tree_fidelity == other.tree_fidelity
            and self.zero_length == other.zero_length
        )


def explain(
    model: ClassifierOracle,
    train: Dataset,
    x_q: np.ndarray,
    requested_foil: int | None = None,
    config: ExplainerConfig | None = None,
    seed: int = 0,
    scaler: Scaler | None = None,
) -> Explanation:
    """Contrastive explanation for ``x_q`` against ``model``."""
    result, _tree = explain_with_tree(model, train, x_q, requested_foil, config, seed, scaler)
    return result


def explain_with_tree(
    model: ClassifierOracle,
    train: Dataset,
    x_q: np.ndarray,
    requested_foil: int | None = None,
    config: ExplainerConfig | None = None,
    seed: int = 0,
    scaler: Scaler | None = None,
) -> tuple[Explanation, FoilTree]:
    """Like :func:`explain` but also returns the trained tree, for callers
    that render it or score it on held-out data."""
    config = config or ExplainerConfig()
    x_q = np.asarray(x_q, dtype=float).ravel()
    fact = int(model.predict(x_q.reshape(1, -1))[0])
    foil = determine_foil(model, x_q, requested_foil)

    sample = generate_local(train, x_q, method=config.method, m=config.m, seed=seed)
    sample = append_query_point(sample, x_q)
    scaler = scaler or fit_scaler(train)
    sample = proximity_weights(sample, x_q, scaler, config.kernel_width)

    labels = np.asarray(model.predict(sample.points), dtype=np.intp) == foil
    params = TreeParams(
        max_depth=config.max_depth,
        min_weight_leaf=config.min_weight_fraction * float(sample.weights.sum()),
        min_impurity_decrease=config.min_impurity_decrease,
    )
    tree = train_foil_tree(sample, model, foil, params, seed=seed, fact=fact, labels=labels)

    fact_leaf = find_fact_leaf(tree, x_q)
    strategy = make_strategy(config.strategy, config.lam)
    foil_leaf = find_foil_leaf(tree, fact_leaf, strategy)

    if foil_leaf is None:
        literals: list[Literal] = []
        zero_length = False
    elif foil_leaf == fact_leaf:
        literals = []
        zero_length = True
    else:
        conds = complement(tree, fact_leaf, foil_leaf)
        literals = merge_literals(conds, train.features)
        zero_length = False

    agreement = tree.predict_foil_batch(sample.points) == labels
    fidelity = float(np.average(agreement, weights=sample.weights))

    result = Explanation(
        fact=fact,
        foil=foil,
        literals=literals,
        x_q=x_q,
        fact_leaf=fact_leaf,
        foil_leaf=foil_leaf,
        tree_fidelity=fidelity,
        zero_length=zero_length,
    )
    return result, tree


def format_number(v: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    for precision in range(1, 18):
        s = f"{v:.{precision}g}"
        if float(s) == v:
            return s
    return repr(v)


def _qualitative_phrase(literal: Literal, name: str) -> str:
    if literal.lower is not None and literal.upper is not None:
        return f"the '{name}' should be between two bounds"
    if literal.upper is not None:
        return f"the '{name}' should be smaller"
    return f"the '{name}' should be larger"


def _quantitative_phrase(literal: Literal, name: str) -> str:
    if literal.lower is not None and literal.upper is not None:
        return (
            f"the '{name}' should be between {format_number(literal.lower)}"
            f" and {format_number(literal.upper)}"
        )
    if literal.upper is not None:
        return f"the '{name}' should be smaller than or equal to {format_number(literal.upper)}"
    return f"the '{name}' should be larger than {format_number(literal.lower)}"


def _how_much_question(literals: list[Literal]) -> str:
    words = []
    interval = False
    for lit in literals:
        if lit.lower is not None and lit.upper is not None:
            interval = True
        elif lit.upper is not None:
            word = "smaller"
            if word not in words:
                words.append(word)
        else:
            word = "larger"
            if word not in words:
                words.append(word)
    if interval or not words:
        return "User: What are the exact values?"
    return f"User: How much {' and '.join(words)}?"


def render_text(
    explanation: Explanation,
    class_names: list[str],
    features: list[FeatureMeta],
    verbosity: str = "quantitative",
) -> list[str]:
    """Dialogue lines for an explanation.

    ``qualitative`` stops at directions ("should be smaller"); ``quantitative``
    adds a second exchange with the thresholds filled in.
    """
    if verbosity not in VERBOSITIES:
        raise ValueError(f"unknown verbosity {verbosity!r}; expected one of {VERBOSITIES}")
    fact_name = class_names[explanation.fact]
    foil_name = class_names[explanation.foil]
    lines = [
        f"System: The predicted class is '{fact_name}'.",
        f"User: Why '{fact_name}' and not '{foil_name}'?",
    ]
    if not explanation.foil_region_found:
        lines.append(
            f"System: No region for '{foil_name}' was found near this instance,"
            f" so no difference between '{fact_name}' and '{foil_name}' can be reported."
        )
        return lines
    if explanation.zero_length:
        lines.append(
            f"System: No difference between '{fact_name}' and '{foil_name}'"
            f" was found for this instance."
        )
        return lines

    names = [features[lit.feature].name for lit in explanation.literals]
    qual = " and ".join(_qualitative_phrase(lit, name) for lit, name in zip(explanation.literals, names))
    lines.append(f"System: Because for it to be '{foil_name}' {qual}.")
    if verbosity == "qualitative":
        return lines
    lines.append(_how_much_question(explanation.literals))
    quant = " and ".join(_quantitative_phrase(lit, name) for lit, name in zip(explanation.literals, names))
    lines.append(f"System: {quant[0].upper() + quant[1:]}.")
    return lines


def to_json(explanation: Explanation, features: list[FeatureMeta] | None = None) -> str:
    """Stable JSON form; :func:`from_json` inverts it exactly. Passing
    ``features`` adds a human-readable name next to each literal."""
    literals = []
    for lit in explanation.literals:
        entry: dict = {"feature": lit.feature, "lower": lit.lower, "upper": lit.upper}
        if features is not None:
            entry["feature_name"] = features[lit.feature].name
        literals.append(entry)
    payload = {
        "fact": explanation.fact,
        "foil": explanation.foil,
        "literals": literals,
        "x_q": [float(v) for v in explanation.x_q],
        "fact_leaf": explanation.fact_leaf,
        "foil_leaf": explanation.foil_leaf,
        "fidelity": explanation.tree_fidelity,
        "zero_length": explanation.zero_length,
        "foil_region_found": explanation.foil_region_found,
        "length": explanation.length,
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def from_json(text: str) -> Explanation:
    payload = json.loads(text)
    return Explanation(
        fact=int(payload["fact"]),
        foil=int(payload["foil"]),
        literals=[
            Literal(feature=int(d["feature"]), lower=d["lower"], upper=d["upper"])
            for d in payload["literals"]
        ],
        x_q=np.array(payload["x_q"], dtype=float),
        fact_leaf=int(payload["fact_leaf"]),
        foil_leaf=None if payload["foil_leaf"] is None else int(payload["foil_leaf"]),
        tree_fidelity=float(payload["fidelity"]),
        zero_length=bool(payload["zero_length"]),
    )
