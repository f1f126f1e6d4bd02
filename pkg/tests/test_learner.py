import numpy as np
import pytest

from rankal.data import make_two_blobs, split_pool, SplitSpec
from rankal.learner import (
    Committee,
    LearnerConfig,
    fit,
    fit_committee,
    posterior,
)

CFG = LearnerConfig(kernel="rbf", gamma=1.0)


def test_separable_points_classified():
    x = np.array([[0.0, 0.0], [2.0, 2.0]])
    y = np.array([-1, 1])
    m = fit(CFG, x, y)
    p = m.predict_proba(x)
    assert p[0] < 0.5 < p[1]


def test_midpoint_symmetry():
    x = np.array([[0.0], [2.0]])
    y = np.array([-1, 1])
    m = fit(CFG, x, y)
    p = m.predict_proba(np.array([[1.0]]))[0]
    assert abs(p - 0.5) < 1e-6


def centroid_accuracy(train, test):
    mu_pos = train.features[train.labels == 1].mean(axis=0)
    mu_neg = train.features[train.labels == -1].mean(axis=0)
    d_pos = np.linalg.norm(test.features - mu_pos, axis=1)
    d_neg = np.linalg.norm(test.features - mu_neg, axis=1)
    preds = np.where(d_pos <= d_neg, 1, -1)
    return np.mean(preds == test.labels)


def test_two_blob_accuracy_matches_centroid_oracle():
    learner_acc, oracle_acc = [], []
    for seed in range(10):
        d = make_two_blobs(n=200, center_distance=3.0, sigma=0.5, seed=seed)
        test, pool = split_pool(d, SplitSpec(0.5, seed))
        train = pool.data
        m = fit(LearnerConfig(), train.features, train.labels)
        learner_acc.append(np.mean(m.predict(test.features) == test.labels))
        oracle_acc.append(centroid_accuracy(train, test))
    assert np.mean(oracle_acc) >= 0.95  # the oracle itself clears the bar
    assert np.mean(learner_acc) >= 0.95
    assert np.mean(learner_acc) >= np.mean(oracle_acc) - 0.01


def test_posterior_contract():
    x = np.array([[0.0, 0.0], [2.0, 2.0], [0.1, 0.0]])
    y = np.array([-1, 1, -1])
    m = fit(CFG, x, y)
    grid = np.random.default_rng(0).normal(size=(50, 2))
    p_pos, y_max, p_max = posterior(m, grid)
    assert np.all((p_pos > 0) & (p_pos < 1))
    assert np.allclose(p_pos + (1 - p_pos), 1.0, atol=1e-12)
    assert np.all(p_max >= 0.5 - 1e-12)
    assert np.all(np.where(p_pos >= 0.5, 1, -1) == y_max)


def test_half_probability_tie_goes_positive():
    x = np.array([[0.0], [2.0]])
    m = fit(CFG, x, np.array([-1, 1]))
    _, y_max, p_max = posterior(m, np.array([[1.0]]))
    assert y_max[0] == 1
    assert abs(p_max[0] - 0.5) < 1e-6


def test_linear_model_monotone_in_1d():
    rng = np.random.default_rng(3)
    x = rng.uniform(-2, 2, size=(40, 1))
    y = np.where(x[:, 0] > 0, 1, -1)
    m = fit(LearnerConfig(kernel="linear", reg=1e-3), x, y)
    grid = np.linspace(-3, 3, 41).reshape(-1, 1)
    p = m.predict_proba(grid)
    assert np.all(np.diff(p) >= -1e-9)


def test_permutation_invariance():
    rng = np.random.default_rng(4)
    d = make_two_blobs(n=60, seed=4)
    perm = rng.permutation(60)
    m1 = fit(LearnerConfig(), d.features, d.labels)
    m2 = fit(LearnerConfig(), d.features[perm], d.labels[perm])
    grid = rng.normal(size=(30, d.n_features))
    np.testing.assert_allclose(
        m1.predict_proba(grid), m2.predict_proba(grid), atol=1e-8
    )


def test_strong_regularization_approaches_prior():
    d = make_two_blobs(n=200, pos_fraction=0.3, seed=7)
    m = fit(LearnerConfig(reg=1e6), d.features, d.labels)
    p = m.predict_proba(d.features)
    assert np.all(np.abs(p - 0.3) < 0.05)


def test_single_class_degenerate():
    x = np.array([[0.0], [1.0]])
    m = fit(CFG, x, np.array([1, 1]))
    assert m.degenerate
    assert np.allclose(m.predict_proba(x), 0.99)
    m2 = fit(CFG, x, np.array([-1, -1]))
    assert np.allclose(m2.predict_proba(x), 0.01)


def test_fit_errors():
    with pytest.raises(ValueError):
        fit(CFG, np.zeros((0, 2)), np.array([], dtype=int))
    m = fit(CFG, np.array([[0.0, 1.0], [1.0, 0.0]]), np.array([-1, 1]))
    with pytest.raises(ValueError, match="dimension"):
        m.predict_proba(np.zeros((3, 5)))


def test_determinism():
    d = make_two_blobs(n=80, seed=8)
    m1 = fit(LearnerConfig(), d.features, d.labels)
    m2 = fit(LearnerConfig(), d.features, d.labels)
    np.testing.assert_array_equal(m1.dual_coeffs, m2.dual_coeffs)


class TestCommittee:
    def test_same_seed_identical(self):
        d = make_two_blobs(n=60, seed=9)
        c1 = fit_committee(LearnerConfig(), d.features, d.labels, g=3, seed=11)
        c2 = fit_committee(LearnerConfig(), d.features, d.labels, g=3, seed=11)
        probs1 = c1.member_proba(d.features[:5])
        probs2 = c2.member_proba(d.features[:5])
        np.testing.assert_array_equal(probs1, probs2)

    def test_members_near_single_model_accuracy(self):
        d = make_two_blobs(n=300, seed=10)
        test, pool = split_pool(d, SplitSpec(0.5, 10))
        train = pool.data
        single = fit(LearnerConfig(), train.features, train.labels)
        single_acc = np.mean(single.predict(test.features) == test.labels)
        committee = fit_committee(LearnerConfig(), train.features, train.labels, g=5, seed=0)
        for member in committee.members:
            acc = np.mean(member.predict(test.features) == test.labels)
            assert abs(acc - single_acc) <= 0.1

    def test_degenerate_members_agree(self):
        # identical single-class resamples: every member predicts the class
        x = np.array([[0.0], [1.0], [2.0]])
        y = np.array([1, 1, 1])
        committee = fit_committee(CFG, x, y, g=2, seed=0)
        probs = committee.member_proba(x)
        assert np.allclose(probs.std(axis=0), 0.0)

    def test_small_committee_rejected(self):
        with pytest.raises(ValueError):
            fit_committee(CFG, np.zeros((2, 1)), np.array([-1, 1]), g=1)
