"""Tests for the random forest."""

import numpy as np
import pytest

from lingforge.errors import ConfigError, InsufficientRows, ModelFormatError, SingleClass
from lingforge.learn.forest import (
    LEAF,
    ForestConfig,
    ForestModel,
    fit_forest,
    fit_tree,
)


@pytest.fixture
def sign_data():
    """40 rows whose class is the sign of the first feature; the second is noise."""
    rng = np.random.default_rng(11)
    x = rng.uniform(-1.0, 1.0, size=40)
    X = np.column_stack([x, rng.normal(size=40)])
    return X, (x > 0).astype(int)


def _gini_decrease(x, y, w, threshold):
    def wg(mask):
        w0 = w[mask & (y == 0)].sum()
        w1 = w[mask & (y == 1)].sum()
        total = w0 + w1
        return total - (w0 * w0 + w1 * w1) / total if total > 0 else 0.0

    everything = np.ones_like(y, dtype=bool)
    left = x <= threshold
    return wg(everything) - wg(left) - wg(~left)


class TestFitTree:
    """Test cases for single CART trees."""

    @pytest.mark.parametrize("seed", range(50))
    def test_root_split_matches_exhaustive_search(self, seed):
        rng = np.random.default_rng(seed)
        X = rng.normal(size=(10, 3))
        y = np.array([0, 1] + rng.integers(0, 2, size=8).tolist())
        w = rng.uniform(0.2, 3.0, size=10)
        tree = fit_tree(X, y, w, np.random.default_rng(seed), max_features=None, max_depth=1)

        best = None
        for f in range(X.shape[1]):
            values = np.unique(X[:, f])
            for lo, hi in zip(values[:-1], values[1:], strict=True):
                threshold = (lo + hi) / 2.0
                decrease = _gini_decrease(X[:, f], y, w, threshold)
                if best is None or decrease > best[0] + 1e-9:
                    best = (decrease, f, threshold)
        assert tree.feature[0] == best[1]
        assert tree.threshold[0] == pytest.approx(best[2])
        assert tree.importance[best[1]] * w.sum() == pytest.approx(best[0])

    def test_tie_goes_to_lower_feature(self):
        """Two identical columns: the lower index is chosen."""
        x = np.array([0.0, 1.0, 2.0, 3.0])
        X = np.column_stack([x, x])
        y = np.array([0, 0, 1, 1])
        for seed in range(5):
            tree = fit_tree(X, y, np.ones(4), np.random.default_rng(seed), max_features=None)
            assert tree.feature[0] == 0
            assert tree.threshold[0] == 1.5

    def test_min_leaf(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(30, 2))
        y = (rng.random(30) > 0.5).astype(int)
        tree = fit_tree(X, y, np.ones(30), np.random.default_rng(0), min_leaf=4)
        _, sizes = np.unique(tree.apply(X), return_counts=True)
        assert sizes.min() >= 4

    def test_max_depth_zero_is_a_leaf(self):
        X = np.array([[0.0], [1.0], [2.0]])
        y = np.array([0, 1, 1])
        tree = fit_tree(X, y, np.array([2.0, 1.0, 1.0]), np.random.default_rng(0), max_depth=0)
        assert tree.n_nodes == 1
        assert tree.left[0] == LEAF
        assert tree.value[0].tolist() == [0.5, 0.5]

    def test_zero_weight_rows_ignored(self):
        """Rows outside the bootstrap sample do not shape the tree."""
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([0, 1, 0, 1])
        tree = fit_tree(X, y, np.array([1.0, 0.0, 0.0, 1.0]), np.random.default_rng(0))
        assert tree.threshold[0] == 1.5
        assert tree.n_leaves == 2


class TestFitForest:
    """Test cases for fit_forest."""

    def test_sign_rule_learned(self, sign_data):
        X, y = sign_data
        model = fit_forest(X, y, ForestConfig(n_trees=50, max_features=None, seed=1))
        grid = np.column_stack([np.array([-0.9, -0.6, -0.3, 0.3, 0.6, 0.9]), np.zeros(6)])
        assert model.predict(grid).tolist() == [0, 0, 0, 1, 1, 1]
        assert (model.predict(X) == y).mean() >= 0.95

    def test_threads_do_not_change_fit(self, sign_data):
        X, y = sign_data
        one = fit_forest(X, y, ForestConfig(n_trees=20, seed=5, threads=1))
        four = fit_forest(X, y, ForestConfig(n_trees=20, seed=5, threads=4))
        assert one.to_dict() == four.to_dict()

    def test_seed_changes_fit(self, sign_data):
        X, y = sign_data
        a = fit_forest(X, y, ForestConfig(n_trees=10, seed=1))
        b = fit_forest(X, y, ForestConfig(n_trees=10, seed=2))
        assert a.to_dict()["trees"] != b.to_dict()["trees"]

    def test_mdi_single_split(self):
        """One informative feature takes all the importance."""
        X = np.array([[0.0, 5.0], [1.0, 5.0], [2.0, 5.0], [3.0, 5.0]] * 3)
        y = np.array([0, 0, 1, 1] * 3)
        model = fit_forest(X, y, ForestConfig(n_trees=15, max_features=None, seed=0))
        assert model.mdi().tolist() == pytest.approx([1.0, 0.0])

    def test_mdi_sums_to_one(self, sign_data):
        X, y = sign_data
        mdi = fit_forest(X, y, ForestConfig(n_trees=20)).mdi()
        assert mdi.sum() == pytest.approx(1.0)
        assert mdi[0] > mdi[1]

    def test_missing_values(self, sign_data):
        X, y = sign_data
        X = X.copy()
        X[::5, 1] = np.nan
        model = fit_forest(X, y, ForestConfig(n_trees=10))
        assert np.all(np.isfinite(model.predict_proba(np.array([[0.5, np.nan]]))))

    def test_probability_range(self, sign_data):
        X, y = sign_data
        proba = fit_forest(X, y, ForestConfig(n_trees=10)).predict_proba(X)
        assert np.all((proba >= 0.0) & (proba <= 1.0))

    def test_dict_round_trip(self, sign_data):
        X, y = sign_data
        model = fit_forest(X, y, ForestConfig(n_trees=5, max_depth=3))
        restored = ForestModel.from_dict(model.to_dict())
        assert np.array_equal(restored.predict_proba(X), model.predict_proba(X))
        assert restored.max_depth == 3

    def test_wrong_format_version(self, sign_data):
        X, y = sign_data
        data = fit_forest(X, y, ForestConfig(n_trees=2)).to_dict()
        data["format_version"] = 99
        with pytest.raises(ModelFormatError):
            ForestModel.from_dict(data)

    def test_single_class(self):
        with pytest.raises(SingleClass):
            fit_forest(np.array([[1.0], [2.0]]), np.array([0, 0]))

    def test_too_few_rows(self):
        with pytest.raises(InsufficientRows):
            fit_forest(np.array([[1.0]]), np.array([0]))


class TestForestConfig:
    """Test cases for ForestConfig."""

    def test_features_per_split(self):
        assert ForestConfig().features_per_split(26) == 5
        assert ForestConfig(max_features=None).features_per_split(26) == 26
        assert ForestConfig(max_features=40).features_per_split(26) == 26
        assert ForestConfig().features_per_split(1) == 1

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n_trees": 0},
            {"min_leaf": 0},
            {"max_depth": -1},
            {"max_features": "log2"},
            {"class_weighting": "auto"},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            ForestConfig(**kwargs)
