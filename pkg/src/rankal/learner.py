"""Probabilistic binary kernel classifier and a bagged committee.

The model is kernel logistic regression (RBF or linear kernel) fitted by
damped Newton iterations, so posterior probabilities come straight from the
model instead of a separate calibration step.  Committees are built by
bootstrap bagging with per-member RNG streams derived from (seed, member).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PROB_CLAMP = 1e-6


@dataclass(frozen=True)
class LearnerConfig:
    kernel: str = "rbf"
    gamma: float | None = None  # None -> 1 / n_features
    reg: float = 1e-2
    max_iter: int = 50
    tol: float = 1e-8

    def __post_init__(self):
        if self.kernel not in ("rbf", "linear"):
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if self.gamma is not None and self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.reg <= 0 or self.tol <= 0:
            raise ValueError("reg and tol must be positive")


def kernel_matrix(config: LearnerConfig, a, b, gamma=None):
    """Gram matrix between rows of ``a`` and rows of ``b``."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if config.kernel == "linear":
        return a @ b.T
    g = gamma if gamma is not None else config.gamma
    if g is None:
        g = 1.0 / a.shape[1]
    sq = (
        np.sum(a * a, axis=1)[:, None]
        + np.sum(b * b, axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    return np.exp(-g * np.maximum(sq, 0.0))


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-np.clip(z, -35.0, 35.0)))


@dataclass(frozen=True)
class Model:
    """Trained classifier: dual coefficients over the support samples."""

    config: LearnerConfig
    support: np.ndarray
    dual_coeffs: np.ndarray
    intercept: float
    gamma: float | None
    degenerate: bool = False
    degenerate_label: int = 0

    def predict_proba(self, x):
        """Posterior P(y = +1 | x) for each row of ``x``, clamped to (0, 1)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.support.shape[1]:
            raise ValueError(
                f"dimension mismatch: model expects {self.support.shape[1]} "
                f"features, got {x.shape[1]}"
            )
        if self.degenerate:
            p = 0.99 if self.degenerate_label == 1 else 0.01
            return np.full(len(x), p)
        k = kernel_matrix(self.config, x, self.support, gamma=self.gamma)
        p = _sigmoid(k @ self.dual_coeffs + self.intercept)
        return np.clip(p, PROB_CLAMP, 1.0 - PROB_CLAMP)

    def predict(self, x):
        return np.where(self.predict_proba(x) >= 0.5, 1, -1)


def posterior(model: Model, x):
    """Return (p_pos, y_max, p_max); the 0.5 tie resolves toward +1."""
    p_pos = model.predict_proba(x)
    y_max = np.where(p_pos >= 0.5, 1, -1)
    p_max = np.maximum(p_pos, 1.0 - p_pos)
    return p_pos, y_max, p_max


def _penalized_nll(k, target, alpha, intercept, reg):
    z = k @ alpha + intercept
    # log(1 + exp(-|z|)) formulation keeps the loss finite for large |z|
    nll = np.sum(np.logaddexp(0.0, z) - target * z)
    return nll + 0.5 * reg * float(alpha @ (k @ alpha))


def fit(config: LearnerConfig, features, labels) -> Model:
    """Train kernel logistic regression on labels in {-1,+1}.

    A single-class labeled set yields a degenerate model that predicts the
    observed class with probability 0.99 (flagged via ``Model.degenerate``).
    """
    x = np.atleast_2d(np.asarray(features, dtype=float))
    y = np.asarray(labels, dtype=int)
    if len(x) == 0:
        raise ValueError("cannot fit on an empty labeled set")
    gamma = config.gamma if config.gamma is not None else 1.0 / x.shape[1]
    classes = np.unique(y)
    if len(classes) == 1:
        return Model(
            config=config,
            support=x,
            dual_coeffs=np.zeros(len(x)),
            intercept=0.0,
            gamma=gamma,
            degenerate=True,
            degenerate_label=int(classes[0]),
        )

    n = len(x)
    target = (y + 1) / 2.0
    k = kernel_matrix(config, x, x, gamma=gamma)
    alpha = np.zeros(n)
    intercept = 0.0
    obj = _penalized_nll(k, target, alpha, intercept, config.reg)
    jitter = 1e-9 * (np.trace(k) / n + 1.0)

    for _ in range(config.max_iter):
        z = k @ alpha + intercept
        p = _sigmoid(z)
        w = np.maximum(p * (1.0 - p), 1e-10)
        grad_a = k @ (p - target) + config.reg * (k @ alpha)
        grad_b = np.sum(p - target)

        kw = k * w[None, :]
        h = np.empty((n + 1, n + 1))
        h[:n, :n] = kw @ k + config.reg * k
        h[:n, :n] += jitter * np.eye(n)
        h[:n, n] = k @ w
        h[n, :n] = h[:n, n]
        h[n, n] = np.sum(w) + jitter
        try:
            step = np.linalg.solve(h, np.concatenate([grad_a, [grad_b]]))
        except np.linalg.LinAlgError:
            step = np.concatenate([grad_a, [grad_b]]) / (np.sum(w) + 1.0)

        scale = 1.0
        for _ in range(30):
            a_new = alpha - scale * step[:n]
            b_new = intercept - scale * step[n]
            obj_new = _penalized_nll(k, target, a_new, b_new, config.reg)
            if obj_new <= obj + 1e-12:
                break
            scale *= 0.5
        moved = scale * np.max(np.abs(step))
        alpha, intercept, obj = a_new, b_new, obj_new
        if moved < config.tol:
            break

    return Model(
        config=config,
        support=x,
        dual_coeffs=alpha,
        intercept=float(intercept),
        gamma=gamma,
    )


@dataclass(frozen=True)
class Committee:
    """Bagged committee of g >= 2 models trained on bootstrap resamples."""

    members: tuple
    g: int

    def member_proba(self, x):
        """(g, n_samples) matrix of positive-class posteriors."""
        return np.vstack([m.predict_proba(x) for m in self.members])


def fit_committee(config: LearnerConfig, features, labels, g=5, seed=0) -> Committee:
    """Train g models on size-n bootstrap resamples of the labeled set.

    ``seed`` may be an int or a sequence; member j resamples with the stream
    seeded by (*seed, j), so committees are reproducible per member.
    """
    if g < 2:
        raise ValueError("committee size g must be >= 2")
    x = np.atleast_2d(np.asarray(features, dtype=float))
    y = np.asarray(labels, dtype=int)
    if len(x) == 0:
        raise ValueError("cannot fit a committee on an empty labeled set")
    base = (seed,) if np.isscalar(seed) else tuple(seed)
    members = []
    for j in range(g):
        rng = np.random.default_rng(base + (j,))
        idx = rng.integers(0, len(x), size=len(x))
        members.append(fit(config, x[idx], y[idx]))
    return Committee(members=tuple(members), g=g)
