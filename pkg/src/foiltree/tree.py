"""Locally weighted one-vs-all decision tree and contrastive rule extraction.

The tree is a plain binary CART over binary labels ("is this point the
contrast class?") with per-point sample weights. From a trained tree the
module locates the leaf holding the questioned point, searches for a
contrast-labeled leaf under a pluggable edge-weight strategy, and extracts
the rule complement: the conditions on the contrast leaf's path below the
two leaves' lowest common ancestor, merged into per-feature literals.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

import numpy as np

from .dataset import FeatureMeta
from .errors import FoilEqualsFact, InconsistentConditions, LeafNotInTree
from .models import ClassifierOracle
from .sampling import LocalSample

#: Gain differences below this are treated as ties and resolved toward the
#: lower (feature, threshold) candidate, keeping split choice stable against
#: floating-point summation order.
GAIN_TIE_TOL = 1e-12

LABEL_FOIL = "foil"
LABEL_NOT_FOIL = "not-foil"


@dataclass
class TreeParams:
    """Stopping rules for tree induction. ``min_weight_leaf`` is an absolute
    weight; callers wanting "x% of total sample weight" scale it themselves."""

    max_depth: int = 6
    min_weight_leaf: float = 1e-9
    min_impurity_decrease: float = 1e-7

    def __post_init__(self) -> None:
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.min_weight_leaf <= 0:
            raise ValueError(f"min_weight_leaf must be > 0, got {self.min_weight_leaf}")


@dataclass
class TreeNode:
    id: int
    depth: int
    parent: int | None
    foil_weight: float
    notfoil_weight: float
    split_feature: int | None = None  # None marks a leaf
    threshold: float | None = None    # x <= threshold goes left
    left: int | None = None
    right: int | None = None

    @property
    def is_leaf(self) -> bool:
        return self.split_feature is None

    @property
    def total_weight(self) -> float:
        return self.foil_weight + self.notfoil_weight

    @property
    def label(self) -> str:
        # ties go to not-foil: claiming a contrast region needs majority evidence
        return LABEL_FOIL if self.foil_weight > self.notfoil_weight else LABEL_NOT_FOIL

    @property
    def accuracy(self) -> float:
        total = self.total_weight
        if total <= 0:
            return 0.0
        return max(self.foil_weight, self.notfoil_weight) / total


@runtime_checkable
class SearchStrategy(Protocol):
    """Assigns a positive cost to traversing an edge into ``to_id``."""

    def edge_weight(self, tree: "FoilTree", from_id: int, to_id: int) -> float: ...


class NearestLeafStrategy:
    """Every edge costs one: minimizing picks the fewest decision nodes."""

    def edge_weight(self, tree: "FoilTree", from_id: int, to_id: int) -> float:
        return 1.0


@dataclass
class AccuracyWeightedStrategy:
    """Penalizes edges into low-accuracy nodes so the search can prefer a
    slightly more distant but better-supported contrast leaf. ``lam = 0``
    reduces to :class:`NearestLeafStrategy`."""

    lam: float = 2.0

    def edge_weight(self, tree: "FoilTree", from_id: int, to_id: int) -> float:
        return 1.0 + self.lam * (1.0 - tree.nodes[to_id].accuracy)


def make_strategy(name: str, lam: float = 2.0) -> SearchStrategy:
    if name == "nearest":
        return NearestLeafStrategy()
    if name == "accuracy-weighted":
        return AccuracyWeightedStrategy(lam=lam)
    raise ValueError(f"unknown strategy {name!r}; expected 'nearest' or 'accuracy-weighted'")


@dataclass
class FoilTree:
    """Binary weighted CART trained to recognize one contrast class."""

    nodes: list[TreeNode]
    root: int
    fact_class: int | None
    foil_class: int
    params: TreeParams
    train_seed: int
    n_features: int
    degenerate: bool = False  # single leaf because all labels agreed

    def node(self, node_id: int) -> TreeNode:
        if not 0 <= node_id < len(self.nodes):
            raise LeafNotInTree(f"node {node_id} not in tree of {len(self.nodes)} nodes")
        return self.nodes[node_id]

    def leaf_ids(self) -> list[int]:
        return [n.id for n in self.nodes if n.is_leaf]

    def route(self, x: np.ndarray) -> int:
        """Leaf id reached by thresholding ``x`` from the root down."""
        x = np.asarray(x, dtype=float)
        node = self.nodes[self.root]
        while not node.is_leaf:
            node = self.nodes[node.left if x[node.split_feature] <= node.threshold else node.right]
        return node.id

    def route_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.full(X.shape[0], self.root, dtype=np.intp)
        active = [self.root]
        while active:
            next_active = []
            for nid in active:
                node = self.nodes[nid]
                if node.is_leaf:
                    continue
                mask = out == nid
                goes_left = X[mask, node.split_feature] <= node.threshold
                idx = np.flatnonzero(mask)
                out[idx[goes_left]] = node.left
                out[idx[~goes_left]] = node.right
                next_active.extend((node.left, node.right))
            active = next_active
        return out

    def predict_foil_batch(self, X: np.ndarray) -> np.ndarray:
        """Boolean "classified as the contrast class" per row."""
        leaves = self.route_batch(X)
        is_foil = np.array([n.label == LABEL_FOIL for n in self.nodes])
        return is_foil[leaves]

    def path_from_root(self, node_id: int) -> list[int]:
        node = self.node(node_id)
        path = [node.id]
        while node.parent is not None:
            node = self.nodes[node.parent]
            path.append(node.id)
        path.reverse()
        return path

    def path_conditions(self, leaf_id: int) -> list[tuple[int, int, float, str]]:
        """(node_id, feature, threshold, branch) along root -> leaf."""
        path = self.path_from_root(leaf_id)
        conds = []
        for here, below in zip(path[:-1], path[1:]):
            node = self.nodes[here]
            branch = "<=" if below == node.left else ">"
            conds.append((node.id, node.split_feature, node.threshold, branch))
        return conds

    def export(self) -> dict:
        """Structured form of the tree for serialization and display."""
        return {
            "root": self.root,
            "fact_class": self.fact_class,
            "foil_class": self.foil_class,
            "n_features": self.n_features,
            "degenerate": self.degenerate,
            "nodes": [
                {
                    "id": n.id,
                    "depth": n.depth,
                    "parent": n.parent,
                    "is_leaf": n.is_leaf,
                    "feature": n.split_feature,
                    "threshold": n.threshold,
                    "left": n.left,
                    "right": n.right,
                    "foil_weight": n.foil_weight,
                    "notfoil_weight": n.notfoil_weight,
                    "accuracy": n.accuracy,
                    "label": n.label,
                }
                for n in self.nodes
            ],
        }


@dataclass(frozen=True)
class Literal:
    """Per-feature interval condition: ``lower < x``, ``x <= upper``, or both."""

    feature: int
    lower: float | None = None  # strict
    upper: float | None = None  # inclusive

    def __post_init__(self) -> None:
        if self.lower is None and self.upper is None:
            raise ValueError("a literal needs at least one bound")
        if self.lower is not None and self.upper is not None and self.lower >= self.upper:
            raise ValueError(f"empty interval: {self.lower} .. {self.upper}")

    def holds(self, x: np.ndarray) -> bool:
        v = x[self.feature]
        if self.lower is not None and not v > self.lower:
            return False
        if self.upper is not None and not v <= self.upper:
            return False
        return True


class DegenerateSampleWarning(UserWarning):
    """All local points got the same binary label; the tree is a single leaf."""


def determine_foil(model: ClassifierOracle, x_q: np.ndarray, requested: int | None = None) -> int:
    """Resolve the contrast class: an explicit request, else the model's
    second most likely class at ``x_q`` (ties to the lowest index)."""
    x_q = np.asarray(x_q, dtype=float)
    predicted = int(model.predict(x_q.reshape(1, -1))[0])
    if requested is not None:
        if requested == predicted:
            raise FoilEqualsFact(
                f"requested contrast class {requested} is the model's own output; nothing to contrast"
            )
        if not 0 <= requested < model.n_classes:
            raise ValueError(f"class index {requested} out of range for {model.n_classes} classes")
        return requested
    if model.n_classes < 2:
        raise FoilEqualsFact("model exposes a single class; no contrast exists")
    dist = np.array(model.predict_distribution(x_q.reshape(1, -1))[0], dtype=float)
    dist[predicted] = -np.inf
    return int(np.argmax(dist))


def train_foil_tree(
    sample: LocalSample,
    model: ClassifierOracle,
    foil: int,
    params: TreeParams | None = None,
    seed: int = 0,
    fact: int | None = None,
    labels: np.ndarray | None = None,
) -> FoilTree:
    """Greedy weighted-Gini CART on model-labeled local points.

    Labels are ``model.predict(point) == foil``; callers that already hold
    the model's predictions can pass ``labels`` to skip re-predicting.
    A sample whose labels all agree yields a single-leaf tree and a
    :class:`DegenerateSampleWarning`, not an error.
    """
    params = params or TreeParams()
    X = np.asarray(sample.points, dtype=float)
    w = np.asarray(sample.weights, dtype=float)
    if labels is None:
        labels = np.asarray(model.predict(X), dtype=np.intp) == foil
    b = np.asarray(labels, dtype=bool)
    if fact is not None and fact == foil:
        raise FoilEqualsFact(f"fact and foil are both class {foil}")

    nodes: list[TreeNode] = []
    total_weight = float(w.sum())

    def build(idx: np.ndarray, depth: int, parent: int | None) -> int:
        wn = w[idx]
        bn = b[idx]
        w_foil = float(wn[bn].sum())
        w_not = float(wn[~bn].sum())
        node = TreeNode(id=len(nodes), depth=depth, parent=parent, foil_weight=w_foil, notfoil_weight=w_not)
        nodes.append(node)

        w_node = w_foil + w_not
        pure = w_foil == 0.0 or w_not == 0.0
        if depth >= params.max_depth or pure or w_node < 2 * params.min_weight_leaf:
            return node.id
        best = _best_split(X[idx], bn, wn, params.min_weight_leaf)
        if best is None:
            return node.id
        feature, threshold, gain = best
        if (w_node / total_weight) * gain < params.min_impurity_decrease:
            return node.id
        node.split_feature = feature
        node.threshold = threshold
        goes_left = X[idx, feature] <= threshold
        node.left = build(idx[goes_left], depth + 1, node.id)
        node.right = build(idx[~goes_left], depth + 1, node.id)
        return node.id

    root = build(np.arange(X.shape[0]), 0, None)
    degenerate = len(nodes) == 1 and (b.all() or not b.any())
    if degenerate:
        warnings.warn(
            f"all {len(b)} local points carry the same label; returning a single-leaf tree",
            DegenerateSampleWarning,
            stacklevel=2,
        )
    return FoilTree(
        nodes=nodes,
        root=root,
        fact_class=fact,
        foil_class=foil,
        params=params,
        train_seed=seed,
        n_features=X.shape[1],
        degenerate=degenerate,
    )


def _best_split(Xn: np.ndarray, bn: np.ndarray, wn: np.ndarray, min_weight_leaf: float):
    """Champion (feature, threshold, gain) over midpoint candidates.

    Gain is the node-local weighted Gini decrease. Candidates are scanned in
    (feature, ascending threshold) order; a challenger must beat the champion
    by more than GAIN_TIE_TOL, so near-ties resolve to the earliest candidate.
    """
    W = wn.sum()
    W1 = wn[bn].sum()
    W0 = W - W1
    gini_node = 1.0 - (W1 * W1 + W0 * W0) / (W * W)

    champion = None
    champion_gain = -np.inf
    for feature in range(Xn.shape[1]):
        v = Xn[:, feature]
        order = np.argsort(v, kind="stable")
        vs = v[order]
        ws = wn[order]
        bs = bn[order]
        valid = vs[:-1] < vs[1:]
        if not valid.any():
            continue
        cw = np.cumsum(ws)[:-1]
        cw1 = np.cumsum(ws * bs)[:-1]
        WL, W1L = cw, cw1
        W0L = WL - W1L
        WR = W - WL
        W1R = W1 - W1L
        W0R = WR - W1R
        ok = valid & (WL >= min_weight_leaf) & (WR >= min_weight_leaf)
        if not ok.any():
            continue
        gini_left = 1.0 - (W1L * W1L + W0L * W0L) / (WL * WL)
        gini_right = 1.0 - (W1R * W1R + W0R * W0R) / (WR * WR)
        gains = np.where(ok, gini_node - (WL * gini_left + WR * gini_right) / W, -np.inf)
        j = int(np.argmax(gains))
        if gains[j] > champion_gain + GAIN_TIE_TOL:
            champion = (feature, float((vs[j] + vs[j + 1]) / 2.0), float(gains[j]))
            champion_gain = gains[j]
    return champion


def find_fact_leaf(tree: FoilTree, x_q: np.ndarray) -> int:
    """Leaf in which the questioned point resides (``<=`` routes left)."""
    return tree.route(x_q)


def find_foil_leaf(tree: FoilTree, fact_leaf: int, strategy: SearchStrategy | None = None) -> int | None:
    """Cheapest contrast-labeled leaf under the strategy's edge weights.

    Returns ``fact_leaf`` itself when it already carries the contrast label
    (the zero-length case) and ``None`` when no contrast leaf exists. Cost
    ties break toward the leaf with more contrast weight, then the lower id.
    """
    strategy = strategy or NearestLeafStrategy()
    fact_node = tree.node(fact_leaf)
    if not fact_node.is_leaf:
        raise LeafNotInTree(f"node {fact_leaf} is not a leaf")
    if fact_node.label == LABEL_FOIL:
        return fact_leaf

    fact_path = tree.path_from_root(fact_leaf)
    fact_depth_of = {nid: i for i, nid in enumerate(fact_path)}

    best = None  # (cost, -foil_weight, leaf_id)
    for leaf_id in tree.leaf_ids():
        leaf = tree.nodes[leaf_id]
        if leaf.label != LABEL_FOIL:
            continue
        cost = _path_cost(tree, fact_path, fact_depth_of, leaf_id, strategy)
        key = (cost, -leaf.foil_weight, leaf_id)
        if best is None or _beats(key, best):
            best = key
    return best[2] if best is not None else None


def _beats(key, best) -> bool:
    cost, neg_w, leaf_id = key
    bcost, bneg_w, bleaf = best
    if cost < bcost - GAIN_TIE_TOL:
        return True
    if cost > bcost + GAIN_TIE_TOL:
        return False
    return (neg_w, leaf_id) < (bneg_w, bleaf)


def _path_cost(tree: FoilTree, fact_path: list[int], fact_depth_of: dict, target: int, strategy) -> float:
    target_path = tree.path_from_root(target)
    lca_index = 0
    for i, nid in enumerate(target_path):
        if nid in fact_depth_of and fact_depth_of[nid] == i:
            lca_index = i
        else:
            break
    cost = 0.0
    # climb from the fact leaf up to the lowest common ancestor...
    for i in range(len(fact_path) - 1, lca_index, -1):
        cost += strategy.edge_weight(tree, fact_path[i], fact_path[i - 1])
    # ...then descend to the target leaf
    for i in range(lca_index, len(target_path) - 1):
        cost += strategy.edge_weight(tree, target_path[i], target_path[i + 1])
    return cost


def complement(tree: FoilTree, fact_leaf: int, foil_leaf: int) -> list[tuple[int, int, float, str]]:
    """Conditions on the contrast leaf's path not shared with the fact path.

    These are the decision nodes from the two leaves' lowest common ancestor
    (with the contrast-side branch) down to the contrast leaf. Empty exactly
    when the two leaves coincide.
    """
    fact_node = tree.node(fact_leaf)
    foil_node = tree.node(foil_leaf)
    if not fact_node.is_leaf or not foil_node.is_leaf:
        raise LeafNotInTree(f"{fact_leaf} and {foil_leaf} must both be leaves")
    if fact_leaf == foil_leaf:
        return []
    fact_path = tree.path_from_root(fact_leaf)
    foil_path = tree.path_from_root(foil_leaf)
    shared = 0
    for a, b_ in zip(fact_path, foil_path):
        if a != b_:
            break
        shared += 1
    conds = []
    for i in range(shared - 1, len(foil_path) - 1):
        node = tree.nodes[foil_path[i]]
        branch = "<=" if foil_path[i + 1] == node.left else ">"
        conds.append((node.id, node.split_feature, node.threshold, branch))
    return conds


def merge_literals(conds: list[tuple[int, int, float, str]], features: list[FeatureMeta] | None = None) -> list[Literal]:
    """Collapse same-feature conditions into single interval literals.

    All ``>`` thresholds tighten to their max (strict lower bound), all
    ``<=`` to their min (inclusive upper bound); output keeps the order in
    which features first appear along the path.
    """
    lower: dict[int, float] = {}
    upper: dict[int, float] = {}
    order: list[int] = []
    for _node_id, feature, threshold, branch in conds:
        if feature not in lower and feature not in upper:
            order.append(feature)
        if branch == ">":
            if feature not in lower or threshold > lower[feature]:
                lower[feature] = threshold
        elif branch == "<=":
            if feature not in upper or threshold < upper[feature]:
                upper[feature] = threshold
        else:
            raise ValueError(f"unknown branch {branch!r}")
    literals = []
    for feature in order:
        lo = lower.get(feature)
        hi = upper.get(feature)
        if lo is not None and hi is not None and lo >= hi:
            raise InconsistentConditions(
                f"feature {feature}: lower bound {lo} >= upper bound {hi}; tree path is corrupted"
            )
        literals.append(Literal(feature=feature, lower=lo, upper=hi))
    return literals
