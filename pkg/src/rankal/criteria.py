"""Per-criterion scoring of unlabeled samples, normalization and ranking.

Every scorer obeys one sign convention: the most valuable sample (most
uncertain, most diverse, most disagreed-upon, most representative) receives
the MINIMUM score.  Scorers whose natural quantity grows with value are
multiplied by -1.

``normalize_and_rank`` min-max scales a score list to [0, 1] (rounded to 12
decimals, which also defines score equality for ties) and produces
competition-style ranks: equal scores share the smallest applicable rank
("1224" pattern).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .learner import Committee, LearnerConfig, Model, kernel_matrix, posterior

ROUND_DECIMALS = 12

# criterion name -> family; "committee" membership drives the weighting rule
CRITERION_GROUPS = {
    "margin": "certainty",
    "qbc": "committee",
    "diversity": "representativeness",
    "ted": "representativeness",
    "random": "representativeness",
}


def is_committee(name: str) -> bool:
    try:
        return CRITERION_GROUPS[name] == "committee"
    except KeyError:
        raise ValueError(f"unknown criterion {name!r}") from None


@dataclass(frozen=True)
class NormalizedScores:
    """Scores scaled to [0, 1] plus the permutation sorting them ascending."""

    values: np.ndarray
    sort_order: np.ndarray

    @property
    def sorted_values(self):
        return self.values[self.sort_order]


def score_margin(model: Model, pool_features) -> np.ndarray:
    """Top-posterior confidence; minimal at the decision boundary (no flip)."""
    _, _, p_max = posterior(model, pool_features)
    return p_max


def score_diversity(
    labeled_features, pool_features, config: LearnerConfig, reduce="max"
) -> np.ndarray:
    """Negated kernel angle to the labeled set.

    angle(x, a) = arccos(k(x,a) / sqrt(k(x,x) k(a,a))), cosine clipped to
    [-1, 1].  ``reduce`` picks the max (default) or min angle over labeled
    samples; the result is negated so wide angles score low.  A sample with
    k(x,x) = 0 contributes angle pi/2.
    """
    if reduce not in ("max", "min"):
        raise ValueError("reduce must be 'max' or 'min'")
    labeled = np.atleast_2d(np.asarray(labeled_features, dtype=float))
    pool = np.atleast_2d(np.asarray(pool_features, dtype=float))
    if len(labeled) == 0:
        raise ValueError("diversity needs at least one labeled sample")
    cross = kernel_matrix(config, pool, labeled)
    k_pool = np.diag(kernel_matrix(config, pool, pool))
    k_lab = np.diag(kernel_matrix(config, labeled, labeled))
    denom = np.sqrt(np.outer(k_pool, k_lab))
    with np.errstate(divide="ignore", invalid="ignore"):
        cos = np.where(denom > 0, cross / np.where(denom > 0, denom, 1.0), 0.0)
    angles = np.arccos(np.clip(cos, -1.0, 1.0))
    agg = angles.max(axis=1) if reduce == "max" else angles.min(axis=1)
    return -agg


def score_qbc(committee: Committee, pool_features) -> np.ndarray:
    """Negated population standard deviation of member posteriors."""
    probs = committee.member_proba(pool_features)
    return -probs.std(axis=0, ddof=0)


@dataclass(frozen=True)
class TedSolution:
    """Self-reconstruction solution: coefficients, objective trace, flags."""

    Z: np.ndarray
    lam: float
    residual: float
    objective_history: tuple
    converged: bool


def _ted_objective(d, z, lam, transpose_reg=True):
    resid = d - d @ z
    col_norms = np.sqrt(np.sum(resid * resid, axis=0))
    pen_mat = z if transpose_reg else z.T
    row_norms = np.sqrt(np.sum(pen_mat * pen_mat, axis=1))
    return float(col_norms.sum() + lam * row_norms.sum())


def solve_ted(
    pool_features,
    lam=0.1,
    max_iter=100,
    tol=1e-8,
    transpose_reg=True,
) -> TedSolution:
    """Sparse self-reconstruction of the pool by iteratively reweighted ridge.

    Minimizes  sum_j ||d_j - D z_j||_2  +  lam * sum_i ||row_i(Z)||_2  where
    D has samples as columns.  Each sweep fixes diagonal reweighting matrices
    from the current residual column norms and coefficient row norms, then
    solves the induced ridge problem for all columns through one
    eigendecomposition.  The true objective is non-increasing across sweeps.
    ``transpose_reg=False`` penalizes columns of Z instead of rows.
    """
    x = np.atleast_2d(np.asarray(pool_features, dtype=float))
    n = len(x)
    if n < 2:
        raise ValueError("need at least 2 pool samples")
    if lam <= 0:
        raise ValueError("lam must be positive")
    d = x.T  # samples as columns
    gram = d.T @ d
    eps = 1e-10

    z = np.zeros((n, n))
    history = [_ted_objective(d, z, lam, transpose_reg)]
    converged = False
    for _ in range(max_iter):
        resid = d - d @ z
        col_norms = np.maximum(np.sqrt(np.sum(resid * resid, axis=0)), eps)
        pen_mat = z if transpose_reg else z.T
        row_norms = np.maximum(np.sqrt(np.sum(pen_mat * pen_mat, axis=1)), eps)
        u = 1.0 / col_norms  # residual weights, one per column
        v = 1.0 / row_norms  # penalty weights, one per row of the penalized matrix

        if transpose_reg:
            # (G + (lam/u_j) diag(v)) z_j = G[:, j]; shared eigenbasis after
            # the diag(v) similarity scaling
            v_isqrt = 1.0 / np.sqrt(v)
            m = gram * np.outer(v_isqrt, v_isqrt)
            evals, evecs = np.linalg.eigh(m)
            evals = np.maximum(evals, 0.0)
            rhs = evecs.T @ (gram * v_isqrt[:, None])
            scale = lam / u
            y = rhs / (evals[:, None] + scale[None, :])
            z_new = v_isqrt[:, None] * (evecs @ y)
        else:
            # column penalty: (G + (lam*v_j/u_j) I) z_j = G[:, j]
            evals, evecs = np.linalg.eigh(gram)
            evals = np.maximum(evals, 0.0)
            rhs = evecs.T @ gram
            scale = lam * v / u
            y = rhs / (evals[:, None] + scale[None, :])
            z_new = evecs @ y

        obj = _ted_objective(d, z_new, lam, transpose_reg)
        history.append(obj)
        z = z_new
        if abs(history[-2] - obj) < tol * max(1.0, abs(history[-2])):
            converged = True
            break

    return TedSolution(
        Z=z,
        lam=lam,
        residual=history[-1],
        objective_history=tuple(history),
        converged=converged,
    )


def score_ted(
    pool_features, lam=0.1, max_iter=100, tol=1e-8,
    transpose_reg=True, row_aggregate=True,
) -> np.ndarray:
    """Negated reconstruction responsibility per sample.

    Row (default) or column absolute sums of the self-reconstruction matrix,
    negated: samples that reconstruct many others score low (most valuable).
    Computed once per pool and cached by the query loop.
    """
    sol = solve_ted(pool_features, lam=lam, max_iter=max_iter, tol=tol,
                    transpose_reg=transpose_reg)
    energy = np.abs(sol.Z).sum(axis=1 if row_aggregate else 0)
    return -energy


def score_random(n, rng) -> np.ndarray:
    """Uniform random scores; a plumbing baseline criterion."""
    return rng.random(n)


def normalize_and_rank(scores):
    """Min-max normalize to [0, 1] and rank competition-style.

    Returns (NormalizedScores, ranks).  A constant list maps to all 0.5.
    Normalized values are rounded to 12 decimals; ranks use exact equality on
    the rounded values, so rank(i) = 1 + #{j : s_j < s_i}.
    """
    s = np.asarray(scores, dtype=float)
    if not np.all(np.isfinite(s)):
        raise ValueError("scores must be finite")
    lo, hi = s.min(), s.max()
    if hi > lo:
        values = (s - lo) / (hi - lo)
    else:
        values = np.full_like(s, 0.5)
    values = np.round(values, ROUND_DECIMALS)
    order = np.argsort(values, kind="stable")
    uniq, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    below = np.concatenate([[0], np.cumsum(counts)[:-1]])
    ranks = below[inverse] + 1
    return NormalizedScores(values=values, sort_order=order), ranks.astype(int)
