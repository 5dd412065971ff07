"""Random forest of weighted-Gini CART trees.

Each tree draws its bootstrap sample and its per-node feature permutations
from its own generator, spawned from the forest seed, so a fit is identical
for a given seed regardless of the worker thread count.

Split rule: a row goes left when ``x <= threshold``. Candidate thresholds are
midpoints between consecutive distinct values. Among equally good splits the
lower feature index wins, then the lower threshold.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np

from lingforge.errors import (
    ArityMismatch,
    ConfigError,
    InsufficientRows,
    ModelFormatError,
    SingleClass,
)
from lingforge.learn.logistic import balanced_class_weights
from lingforge.learn.standardize import StandardizerParams, fit_standardizer
from lingforge.models.enums import Label, ModelKind

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
LEAF = -1
_TIE_EPS = 1e-12


@dataclass(frozen=True)
class ForestConfig:
    """Random forest hyperparameters.

    Attributes:
        n_trees: Number of trees.
        max_features: Features evaluated per split: ``"sqrt"``, an int, or
            None for all of them.
        min_leaf: Minimum distinct training rows per leaf.
        max_depth: Depth limit, None to grow until pure.
        class_weighting: ``balanced`` or ``none``.
        seed: Forest seed.
        threads: Worker threads used to grow trees.
    """

    n_trees: int = 200
    max_features: str | int | None = "sqrt"
    min_leaf: int = 1
    max_depth: int | None = None
    class_weighting: str = "balanced"
    seed: int = 42
    threads: int = 1

    def __post_init__(self) -> None:
        if self.n_trees < 1:
            raise ConfigError(f"n_trees must be positive, got {self.n_trees}")
        if self.min_leaf < 1:
            raise ConfigError(f"min_leaf must be positive, got {self.min_leaf}")
        if self.max_depth is not None and self.max_depth < 0:
            raise ConfigError(f"max_depth must be >= 0, got {self.max_depth}")
        if isinstance(self.max_features, str) and self.max_features != "sqrt":
            raise ConfigError("max_features must be 'sqrt', an int or None")
        if self.class_weighting not in ("balanced", "none"):
            raise ConfigError(f"Unknown class_weighting: '{self.class_weighting}'")

    def features_per_split(self, n_features: int) -> int:
        if self.max_features is None:
            return n_features
        if self.max_features == "sqrt":
            return max(1, math.isqrt(n_features))
        return max(1, min(int(self.max_features), n_features))


# =============================================================================
# Tree
# =============================================================================


@dataclass(frozen=True)
class DecisionTree:
    """A fitted tree stored as flat node arrays.

    ``left[i] == -1`` marks node ``i`` as a leaf. ``value[i]`` holds the
    normalized weighted class distribution ``[p_control, p_dementia]``.
    ``importance`` is the per-feature sum of weighted impurity decrease,
    divided by the root weight.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    importance: np.ndarray

    @property
    def n_nodes(self) -> int:
        return int(self.left.size)

    @property
    def n_leaves(self) -> int:
        return int((self.left == LEAF).sum())

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by each row."""
        node = np.zeros(X.shape[0], dtype=int)
        while True:
            active = np.flatnonzero(self.left[node] != LEAF)
            if active.size == 0:
                return node
            current = node[active]
            go_left = X[active, self.feature[current]] <= self.threshold[current]
            node[active] = np.where(go_left, self.left[current], self.right[current])

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.apply(X)]

    def to_dict(self) -> dict[str, Any]:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
            "importance": self.importance.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> DecisionTree:
        return cls(
            feature=np.asarray(data["feature"], dtype=int),
            threshold=np.asarray(data["threshold"], dtype=float),
            left=np.asarray(data["left"], dtype=int),
            right=np.asarray(data["right"], dtype=int),
            value=np.asarray(data["value"], dtype=float).reshape(-1, 2),
            importance=np.asarray(data["importance"], dtype=float),
        )


def _weighted_gini(w0: np.ndarray | float, w1: np.ndarray | float) -> Any:
    """``W * gini`` for class weight sums ``w0`` and ``w1``."""
    total = w0 + w1
    return total - (w0 * w0 + w1 * w1) / total


def _best_split_on_feature(
    x: np.ndarray, w0: np.ndarray, w1: np.ndarray, node_wg: float, min_leaf: int
) -> tuple[float, float] | None:
    """Best ``(decrease, threshold)`` on one feature, None if no valid threshold."""
    order = np.argsort(x, kind="stable")
    xs = x[order]
    m = xs.size
    left_counts = np.arange(1, m)
    valid = (xs[:-1] < xs[1:]) & (left_counts >= min_leaf) & (m - left_counts >= min_leaf)
    if not valid.any():
        return None
    c0 = np.cumsum(w0[order])
    c1 = np.cumsum(w1[order])
    l0, l1 = c0[:-1], c1[:-1]
    r0, r1 = c0[-1] - l0, c1[-1] - l1
    decrease = node_wg - _weighted_gini(l0, l1) - _weighted_gini(r0, r1)
    decrease = np.where(valid, decrease, -np.inf)
    i = int(np.argmax(decrease))
    threshold = (xs[i] + xs[i + 1]) / 2.0
    if threshold >= xs[i + 1]:
        threshold = xs[i]
    return float(decrease[i]), float(threshold)


def fit_tree(
    X: np.ndarray,
    y: np.ndarray,
    sample_weight: np.ndarray,
    rng: np.random.Generator,
    max_features: int | None = None,
    min_leaf: int = 1,
    max_depth: int | None = None,
) -> DecisionTree:
    """Grow one CART tree on rows with positive ``sample_weight``.

    Args:
        X: Feature rows without NaN.
        y: Class codes.
        sample_weight: Row weights (bootstrap counts times class weights).
        rng: Source of per-node feature permutations.
        max_features: Features evaluated before falling back to the rest.
        min_leaf: Minimum rows on each side of a split.
        max_depth: Depth limit.
    """
    n_features = X.shape[1]
    mtry = n_features if max_features is None else max(1, min(max_features, n_features))
    w0_all = np.where(y == 0, sample_weight, 0.0)
    w1_all = np.where(y == 1, sample_weight, 0.0)

    features: list[int] = []
    thresholds: list[float] = []
    lefts: list[int] = []
    rights: list[int] = []
    values: list[tuple[float, float]] = []
    importance = np.zeros(n_features)

    def new_node() -> int:
        features.append(LEAF)
        thresholds.append(0.0)
        lefts.append(LEAF)
        rights.append(LEAF)
        values.append((0.0, 0.0))
        return len(lefts) - 1

    rows0 = np.flatnonzero(sample_weight > 0)
    root_weight = float(sample_weight[rows0].sum())
    stack = [(new_node(), rows0, 0)]
    while stack:
        node, rows, depth = stack.pop()
        w0, w1 = w0_all[rows], w1_all[rows]
        s0, s1 = float(w0.sum()), float(w1.sum())
        values[node] = (s0 / (s0 + s1), s1 / (s0 + s1))
        if s0 == 0 or s1 == 0 or rows.size < 2 * min_leaf:
            continue
        if max_depth is not None and depth >= max_depth:
            continue

        node_wg = float(_weighted_gini(s0, s1))
        best: tuple[float, int, float] | None = None
        order = rng.permutation(n_features)
        for rank, f in enumerate(order):
            if rank >= mtry and best is not None:
                break
            found = _best_split_on_feature(X[rows, f], w0, w1, node_wg, min_leaf)
            if found is None:
                continue
            dec, thr = found
            if (
                best is None
                or dec > best[0] + _TIE_EPS
                or (abs(dec - best[0]) <= _TIE_EPS and (int(f), thr) < (best[1], best[2]))
            ):
                best = (dec, int(f), thr)
        if best is None:
            continue

        dec, f, thr = best
        features[node] = f
        thresholds[node] = thr
        importance[f] += max(dec, 0.0)
        go_left = X[rows, f] <= thr
        left, right = new_node(), new_node()
        lefts[node], rights[node] = left, right
        stack.append((right, rows[~go_left], depth + 1))
        stack.append((left, rows[go_left], depth + 1))

    return DecisionTree(
        feature=np.asarray(features, dtype=int),
        threshold=np.asarray(thresholds, dtype=float),
        left=np.asarray(lefts, dtype=int),
        right=np.asarray(rights, dtype=int),
        value=np.asarray(values, dtype=float).reshape(-1, 2),
        importance=importance / root_weight if root_weight > 0 else importance,
    )


# =============================================================================
# Forest
# =============================================================================


@dataclass(frozen=True)
class ForestModel:
    """A fitted random forest.

    ``standardizer`` only imputes MISSING cells with training medians; trees
    are invariant to feature scaling.
    """

    trees: tuple[DecisionTree, ...]
    feature_names: tuple[str, ...]
    standardizer: StandardizerParams
    class_weights: tuple[float, float]
    seed: int
    n_trees: int
    max_features: str | int | None = "sqrt"
    min_leaf: int = 1
    max_depth: int | None = None

    @property
    def model_kind(self) -> ModelKind:
        return ModelKind.FOREST

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Soft vote: mean of per-tree P(dementia)."""
        data = np.atleast_2d(np.asarray(X, dtype=float))
        if data.shape[1] != self.n_features:
            raise ArityMismatch(f"Expected {self.n_features} features, got {data.shape[1]}")
        filled = self.standardizer.apply(data)
        total = np.zeros(filled.shape[0])
        for tree in self.trees:
            total += tree.predict_proba(filled)[:, 1]
        return total / len(self.trees)

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Class codes; a 0.5 vote goes to dementia."""
        return (self.predict_proba(X) >= 0.5).astype(int)

    def predict_row(self, row: np.ndarray) -> tuple[float, Label]:
        proba = float(self.predict_proba(np.asarray(row, dtype=float)[None, :])[0])
        return proba, Label.DEMENTIA if proba >= 0.5 else Label.CONTROL

    def mdi(self) -> np.ndarray:
        """Mean decrease in impurity, normalized to sum to 1 (zeros if no splits)."""
        raw = np.mean([tree.importance for tree in self.trees], axis=0)
        total = raw.sum()
        return raw / total if total > 0 else np.zeros_like(raw)

    def to_dict(self) -> dict[str, Any]:
        return {
            "model_kind": ModelKind.FOREST.value,
            "format_version": FORMAT_VERSION,
            "feature_names": list(self.feature_names),
            "standardizer": self.standardizer.to_dict(),
            "class_weights": list(self.class_weights),
            "seed": self.seed,
            "n_trees": self.n_trees,
            "max_features": self.max_features,
            "min_leaf": self.min_leaf,
            "max_depth": self.max_depth,
            "trees": [tree.to_dict() for tree in self.trees],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ForestModel:
        if data.get("model_kind") != ModelKind.FOREST.value:
            raise ModelFormatError(f"Not a forest model: {data.get('model_kind')!r}")
        if data.get("format_version") != FORMAT_VERSION:
            raise ModelFormatError(
                f"Unsupported forest model format: {data.get('format_version')!r}"
            )
        try:
            w0, w1 = data["class_weights"]
            trees = tuple(DecisionTree.from_dict(t) for t in data["trees"])
            return cls(
                trees=trees,
                feature_names=tuple(data["feature_names"]),
                standardizer=StandardizerParams.from_dict(data["standardizer"]),
                class_weights=(float(w0), float(w1)),
                seed=int(data["seed"]),
                n_trees=int(data["n_trees"]),
                max_features=data.get("max_features", "sqrt"),
                min_leaf=int(data.get("min_leaf", 1)),
                max_depth=data.get("max_depth"),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ModelFormatError(f"Malformed forest model: {e}") from e


def fit_forest(
    X: np.ndarray,
    y: np.ndarray,
    config: ForestConfig | None = None,
    feature_names: tuple[str, ...] | list[str] | None = None,
) -> ForestModel:
    """Fit a random forest on raw feature rows.

    Raises:
        InsufficientRows: With fewer than two rows.
        SingleClass: When ``y`` holds one class.
    """
    config = config or ForestConfig()
    data = np.atleast_2d(np.asarray(X, dtype=float))
    labels = np.asarray(y, dtype=int)
    n, d = data.shape
    if n < 2:
        raise InsufficientRows(f"Random forest needs at least 2 rows, got {n}")
    if labels.shape != (n,):
        raise ArityMismatch(f"Expected {n} labels, got {labels.shape}")
    if np.unique(labels).size < 2:
        raise SingleClass("Training labels contain a single class")
    names = tuple(feature_names) if feature_names is not None else tuple(
        f"f{i}" for i in range(d)
    )
    if len(names) != d:
        raise ArityMismatch(f"Expected {d} feature names, got {len(names)}")

    class_weights = (
        balanced_class_weights(labels) if config.class_weighting == "balanced" else (1.0, 1.0)
    )
    row_weight = np.where(labels == 1, class_weights[1], class_weights[0])
    standardizer = fit_standardizer(data, scale=False)
    filled = standardizer.apply(data)
    mtry = config.features_per_split(d)
    children = np.random.SeedSequence(config.seed).spawn(config.n_trees)

    def grow(seed_seq: np.random.SeedSequence) -> DecisionTree:
        rng = np.random.default_rng(seed_seq)
        counts = np.bincount(rng.integers(0, n, n), minlength=n)
        return fit_tree(
            filled,
            labels,
            counts * row_weight,
            rng,
            max_features=mtry,
            min_leaf=config.min_leaf,
            max_depth=config.max_depth,
        )

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            trees = tuple(pool.map(grow, children))
    else:
        trees = tuple(grow(child) for child in children)

    logger.debug(
        "Forest fit: %d trees, %d features per split, mean %.1f leaves",
        len(trees),
        mtry,
        float(np.mean([t.n_leaves for t in trees])),
    )
    return ForestModel(
        trees=trees,
        feature_names=names,
        standardizer=standardizer,
        class_weights=class_weights,
        seed=config.seed,
        n_trees=config.n_trees,
        max_features=config.max_features,
        min_leaf=config.min_leaf,
        max_depth=config.max_depth,
    )
