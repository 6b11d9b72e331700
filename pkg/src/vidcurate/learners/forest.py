"""Random forest of binary CART trees with Gini-impurity splits.

Determinism contract: the forest is a pure function of (data, params, seed).
Each tree draws its bootstrap sample and per-node feature subsets from its
own generator seeded as (seed, tree_index), so parallel and sequential
training produce bit-identical forests. Split ties break toward the lower
feature index, then the lower threshold.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from ..features import FeatureVector

__all__ = ["ForestParams", "TreeNode", "ForestModel", "fit_forest",
           "predict_proba_forest", "save_forest", "load_forest"]

FORMAT_HEADER = "vidcurate-forest v1"


@dataclass
class ForestParams:
    n_trees: int = 100
    max_depth: int = 16
    mtry: Optional[int] = None   # None -> ceil(sqrt(dimension)) at fit time
    min_leaf: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")


@dataclass
class TreeNode:
    feature: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None
    proba: Optional[tuple[float, float]] = None   # leaves only; sums to 1

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())


@dataclass
class ForestModel:
    trees: list[TreeNode]
    params: ForestParams
    dimension: int


def _leaf(y: np.ndarray) -> TreeNode:
    n = len(y)
    pos = int(y.sum())
    return TreeNode(proba=((n - pos) / n, pos / n))


def _best_split_for_feature(values: np.ndarray, y: np.ndarray,
                            min_leaf: int) -> Optional[tuple[float, float]]:
    """Minimal weighted Gini and its threshold, or None if no valid split."""
    n = len(y)
    order = np.argsort(values, kind="stable")
    sv = values[order]
    sy = y[order]
    cum_pos = np.cumsum(sy)
    total_pos = cum_pos[-1]
    k = np.arange(min_leaf, n - min_leaf + 1)
    if len(k) == 0:
        return None
    distinct = sv[k - 1] < sv[k]
    k = k[distinct]
    if len(k) == 0:
        return None
    left_pos = cum_pos[k - 1]
    left_n = k.astype(float)
    right_n = n - left_n
    right_pos = total_pos - left_pos
    gini_l = 1.0 - (left_pos / left_n) ** 2 - ((left_n - left_pos) / left_n) ** 2
    gini_r = 1.0 - (right_pos / right_n) ** 2 - ((right_n - right_pos) / right_n) ** 2
    weighted = (left_n * gini_l + right_n * gini_r) / n
    best = int(np.argmin(weighted))   # argmin takes the first (lowest threshold) tie
    thr = (sv[k[best] - 1] + sv[k[best]]) / 2.0
    return float(weighted[best]), thr


def _grow(X: np.ndarray, y: np.ndarray, depth: int, params: ForestParams,
          mtry: int, rng: np.random.Generator) -> TreeNode:
    if y.min() == y.max():          # pure node: Gini 0, leaf immediately
        return _leaf(y)
    if depth >= params.max_depth or len(y) < 2 * params.min_leaf:
        return _leaf(y)
    # sorted sample keeps the lower-feature-index tie rule well defined
    features = np.sort(rng.permutation(X.shape[1])[:mtry])
    best: Optional[tuple[float, int, float]] = None
    for f in features:
        found = _best_split_for_feature(X[:, f], y, params.min_leaf)
        if found is None:
            continue
        gini, thr = found
        cand = (gini, int(f), thr)
        if best is None or cand < best:
            best = cand
    if best is None:
        return _leaf(y)
    _, f, thr = best
    mask = X[:, f] < thr
    return TreeNode(
        feature=f, threshold=thr,
        left=_grow(X[mask], y[mask], depth + 1, params, mtry, rng),
        right=_grow(X[~mask], y[~mask], depth + 1, params, mtry, rng),
    )


def _as_matrix(X: Sequence[Union[FeatureVector, Sequence[float]]]) -> np.ndarray:
    rows = [x.to_dense() if isinstance(x, FeatureVector) else np.asarray(x, dtype=float)
            for x in X]
    return np.vstack(rows)


def _build_tree(X: np.ndarray, y: np.ndarray, params: ForestParams,
                mtry: int, index: int) -> TreeNode:
    rng = np.random.default_rng([params.seed, index])
    boot = rng.integers(0, len(y), len(y))
    return _grow(X[boot], y[boot], 0, params, mtry, rng)


def fit_forest(X: Sequence, y: Sequence[int],
               params: Optional[ForestParams] = None,
               n_jobs: int = 1) -> ForestModel:
    """Grow ``params.n_trees`` trees on seeded bootstrap resamples.

    ``n_jobs`` > 1 builds trees in a thread pool; the result is identical to
    sequential training because every tree owns its generator.
    """
    params = params or ForestParams()
    Xm = _as_matrix(X)
    yv = np.asarray(y, dtype=int)
    if len(Xm) != len(yv):
        raise ValueError(f"length mismatch: {len(Xm)} rows vs {len(yv)} labels")
    if len(yv) < 2 or yv.min() == yv.max():
        raise ValueError("degenerate labels: need both classes present")
    dim = Xm.shape[1]
    mtry = params.mtry if params.mtry is not None else math.ceil(math.sqrt(dim))
    if mtry > dim:
        raise ValueError(f"mtry {mtry} exceeds dimension {dim}")

    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            trees = list(pool.map(
                lambda i: _build_tree(Xm, yv, params, mtry, i),
                range(params.n_trees)))
    else:
        trees = [_build_tree(Xm, yv, params, mtry, i)
                 for i in range(params.n_trees)]
    return ForestModel(trees=trees, params=params, dimension=dim)


def _tree_proba(node: TreeNode, x: np.ndarray) -> float:
    while not node.is_leaf:
        node = node.left if x[node.feature] < node.threshold else node.right
    return node.proba[1]


def predict_proba_forest(model: ForestModel,
                         x: Union[FeatureVector, Sequence[float]]) -> float:
    """Mean positive-class leaf probability across trees (index order)."""
    xv = x.to_dense() if isinstance(x, FeatureVector) else np.asarray(x, dtype=float)
    if xv.shape[0] != model.dimension:
        raise ValueError(f"dimension mismatch: {xv.shape[0]} vs {model.dimension}")
    total = 0.0
    for tree in model.trees:
        total += _tree_proba(tree, xv)
    return total / len(model.trees)


def _write_node(fh, node: TreeNode) -> None:
    if node.is_leaf:
        fh.write(f"leaf {node.proba[0].hex()} {node.proba[1].hex()}\n")
    else:
        fh.write(f"node {node.feature} {node.threshold.hex()}\n")
        _write_node(fh, node.left)
        _write_node(fh, node.right)


def _read_node(lines, pos: int) -> tuple[TreeNode, int]:
    parts = lines[pos].split()
    if parts[0] == "leaf":
        return TreeNode(proba=(float.fromhex(parts[1]), float.fromhex(parts[2]))), pos + 1
    feature, thr = int(parts[1]), float.fromhex(parts[2])
    left, pos = _read_node(lines, pos + 1)
    right, pos = _read_node(lines, pos)
    return TreeNode(feature=feature, threshold=thr, left=left, right=right), pos


def save_forest(model: ForestModel, path) -> None:
    """Versioned flat file, preorder node list per tree; bit-exact round-trip."""
    p = model.params
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(FORMAT_HEADER + "\n")
        fh.write(f"dim {model.dimension}\n")
        fh.write(f"params {p.n_trees} {p.max_depth} "
                 f"{p.mtry if p.mtry is not None else -1} {p.min_leaf} {p.seed}\n")
        for tree in model.trees:
            fh.write("tree\n")
            _write_node(fh, tree)


def load_forest(path) -> ForestModel:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != FORMAT_HEADER:
        raise ValueError(f"{path}: not a {FORMAT_HEADER} file")
    dim = int(lines[1].split()[1])
    pv = lines[2].split()[1:]
    params = ForestParams(n_trees=int(pv[0]), max_depth=int(pv[1]),
                          mtry=None if int(pv[2]) == -1 else int(pv[2]),
                          min_leaf=int(pv[3]), seed=int(pv[4]))
    trees = []
    pos = 3
    while pos < len(lines):
        if lines[pos] != "tree":
            raise ValueError(f"{path}: expected 'tree' at line {pos + 1}")
        root, pos = _read_node(lines, pos + 1)
        trees.append(root)
    if len(trees) != params.n_trees:
        raise ValueError(f"{path}: expected {params.n_trees} trees, found {len(trees)}")
    return ForestModel(trees=trees, params=params, dimension=dim)
