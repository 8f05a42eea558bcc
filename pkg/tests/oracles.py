"""Independent reference implementations used to cross-check the library.

Everything here recomputes results from first principles with different
code paths (explicit loops, math.fsum) so agreement with the library is
meaningful rather than circular.
"""

from __future__ import annotations

import math

import numpy as np

from foiltree.tree import FoilTree, TreeNode, TreeParams

GAIN_TIE_TOL = 1e-12


def gini(w_pos: float, w_neg: float) -> float:
    total = w_pos + w_neg
    if total <= 0:
        return 0.0
    p = w_pos / total
    q = w_neg / total
    return 1.0 - p * p - q * q


def exhaustive_best_split(X, labels, weights, min_weight_leaf):
    """Reference split search: every (feature, midpoint) candidate scored
    directly with fsum accumulation. Within a feature the first maximum
    wins; across features a challenger must beat the champion by more than
    GAIN_TIE_TOL, scanning features in ascending order."""
    X = np.asarray(X, dtype=float)
    labels = np.asarray(labels, dtype=bool)
    weights = np.asarray(weights, dtype=float)
    W = math.fsum(weights)
    W1 = math.fsum(weights[labels])
    W0 = W - W1
    g_node = gini(W1, W0)

    champion = None
    champion_gain = -math.inf
    for feature in range(X.shape[1]):
        values = sorted(set(X[:, feature].tolist()))
        best_gain = -math.inf
        best_threshold = None
        for a, b in zip(values[:-1], values[1:]):
            t = (a + b) / 2.0
            left = X[:, feature] <= t
            wl1 = math.fsum(weights[left & labels])
            wl0 = math.fsum(weights[left & ~labels])
            wr1 = math.fsum(weights[~left & labels])
            wr0 = math.fsum(weights[~left & ~labels])
            wl = wl1 + wl0
            wr = wr1 + wr0
            if wl < min_weight_leaf or wr < min_weight_leaf:
                continue
            gain = g_node - (wl * gini(wl1, wl0) + wr * gini(wr1, wr0)) / W
            if gain > best_gain:
                best_gain = gain
                best_threshold = t
        if best_threshold is not None and best_gain > champion_gain + GAIN_TIE_TOL:
            champion = (feature, best_threshold, best_gain)
            champion_gain = best_gain
    return champion


def ancestors_of(tree: FoilTree, node_id: int) -> list[int]:
    path = [node_id]
    while tree.nodes[path[-1]].parent is not None:
        path.append(tree.nodes[path[-1]].parent)
    return path  # node -> root order


def path_edges(tree: FoilTree, a: int, b: int) -> list[tuple[int, int]]:
    """Edge sequence of the unique tree path from node a to node b."""
    up_a = ancestors_of(tree, a)
    up_b = ancestors_of(tree, b)
    in_a = {n: i for i, n in enumerate(up_a)}
    lca = next(n for n in up_b if n in in_a)
    edges = []
    for i in range(in_a[lca]):
        edges.append((up_a[i], up_a[i + 1]))
    down = up_b[: up_b.index(lca) + 1][::-1]  # lca -> b
    for i in range(len(down) - 1):
        edges.append((down[i], down[i + 1]))
    return edges


def brute_force_foil_leaf(tree: FoilTree, fact_leaf: int, strategy=None):
    """Enumerate every contrast-labeled leaf and pick the cheapest path,
    ties resolved toward larger contrast weight then lower id."""
    if tree.nodes[fact_leaf].label == "foil":
        return fact_leaf
    best = None
    for leaf_id in tree.leaf_ids():
        node = tree.nodes[leaf_id]
        if node.label != "foil":
            continue
        edges = path_edges(tree, fact_leaf, leaf_id)
        if strategy is None:
            cost = float(len(edges))
        else:
            cost = math.fsum(strategy.edge_weight(tree, u, v) for u, v in edges)
        key = (cost, -node.foil_weight, leaf_id)
        if best is None:
            best = key
        else:
            if cost < best[0] - GAIN_TIE_TOL:
                best = key
            elif cost <= best[0] + GAIN_TIE_TOL and (key[1], key[2]) < (best[1], best[2]):
                best = key
    return None if best is None else best[2]


def conditions_box(conds, n_features: int):
    """Interval propagation: tightest (strict lower, inclusive upper) box
    satisfying every condition, or None when the conjunction is empty."""
    lo = [-math.inf] * n_features
    hi = [math.inf] * n_features
    for cond in conds:
        _node, feature, threshold, branch = cond
        if branch == "<=":
            hi[feature] = min(hi[feature], threshold)
        else:
            lo[feature] = max(lo[feature], threshold)
        if lo[feature] >= hi[feature]:
            return None
    return list(zip(lo, hi))


def satisfies_conditions(x, conds) -> bool:
    for _node, feature, threshold, branch in conds:
        if branch == "<=" and not x[feature] <= threshold:
            return False
        if branch == ">" and not x[feature] > threshold:
            return False
    return True


def make_random_tree(rng: np.random.Generator, n_features: int = 4, max_depth: int = 5,
                     split_prob: float = 0.8) -> FoilTree:
    """Random geometrically consistent tree: thresholds at every node stay
    inside the feasible box inherited from its ancestors, leaf weights are
    random positives, internal weights are the sums of their children."""
    nodes: list[TreeNode] = []

    def build(depth, parent, lo, hi):
        node = TreeNode(id=len(nodes), depth=depth, parent=parent, foil_weight=0.0, notfoil_weight=0.0)
        nodes.append(node)
        splittable = [f for f in range(n_features) if hi[f] - lo[f] > 1e-3]
        if depth >= max_depth or not splittable or rng.random() > split_prob:
            node.foil_weight = float(rng.uniform(0.0, 10.0))
            node.notfoil_weight = float(rng.uniform(0.0, 10.0))
            return node
        feature = int(rng.choice(splittable))
        t = float(rng.uniform(lo[feature] + 1e-4, hi[feature] - 1e-4))
        node.split_feature = feature
        node.threshold = t
        left_hi = hi.copy()
        left_hi[feature] = t
        right_lo = lo.copy()
        right_lo[feature] = t
        left = build(depth + 1, node.id, lo.copy(), left_hi)
        node.left = left.id
        right = build(depth + 1, node.id, right_lo, hi.copy())
        node.right = right.id
        node.foil_weight = left.foil_weight + right.foil_weight
        node.notfoil_weight = left.notfoil_weight + right.notfoil_weight
        return node

    root = build(0, None, [0.0] * n_features, [1.0] * n_features)
    # re-split single-leaf draws so every tree has something to search
    if root.is_leaf:
        return make_random_tree(rng, n_features, max_depth, split_prob=1.0)
    return FoilTree(
        nodes=nodes,
        root=root.id,
        fact_class=0,
        foil_class=1,
        params=TreeParams(max_depth=max_depth),
        train_seed=0,
        n_features=n_features,
    )


def make_random_conditions(rng: np.random.Generator, n_features: int = 4, max_conds: int = 8):
    """Random consistent condition path over the unit box, with feature
    repeats so merging has real work to do."""
    lo = [0.0] * n_features
    hi = [1.0] * n_features
    conds = []
    for node_id in range(int(rng.integers(1, max_conds + 1))):
        open_features = [f for f in range(n_features) if hi[f] - lo[f] > 1e-3]
        if not open_features:
            break
        feature = int(rng.choice(open_features))
        t = float(rng.uniform(lo[feature] + 1e-4, hi[feature] - 1e-4))
        if rng.random() < 0.5:
            conds.append((node_id, feature, t, "<="))
            hi[feature] = t
        else:
            conds.append((node_id, feature, t, ">"))
            lo[feature] = t
    return conds
