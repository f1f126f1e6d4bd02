"""Metrics, paired significance tests and win/tie/loss reporting.

The same machinery the experiment runner uses to decide whether one method
beats another at a checkpoint: per-seed paired t-tests at the 95% level,
tabulated into the win/tie/loss format.
"""

import numpy as np

from rankal import LearningCurve, accuracy, auc, f1, paired_t_test, win_tie_loss

# --- the three classification metrics -------------------------------------
pred = np.array([1, 1, -1, -1, 1])
true = np.array([1, -1, -1, -1, 1])
scores = np.array([0.9, 0.6, 0.2, 0.4, 0.8])
print(f"accuracy = {accuracy(pred, true):.3f}")
print(f"f1       = {f1(pred, true):.3f}")
print(f"auc      = {auc(scores, true):.3f}")

# --- paired t-test over per-seed results -----------------------------------
method_a = np.array([0.91, 0.93, 0.90, 0.94, 0.92, 0.91, 0.93, 0.92, 0.90, 0.94])
method_b = method_a - np.array([0.02, 0.01, 0.03, 0.02, 0.01, 0.02, 0.02, 0.01, 0.03, 0.02])
result = paired_t_test(method_a, method_b)
print(f"\nA vs B: mean diff {result.mean_diff:+.4f}, t = {result.t_stat:.2f}, "
      f"p = {result.p_value:.2e} -> {result.verdict}")

noisy = method_a + np.random.default_rng(0).normal(0, 0.05, size=10)
print("A vs noisy copy:", paired_t_test(method_a, noisy).verdict)

# --- the win/tie/loss table across checkpoints -----------------------------
rng = np.random.default_rng(1)
grid = (0.1, 0.2, 0.3)
target = LearningCurve("fused", grid, rng.uniform(0.90, 0.95, size=(10, 3)))
weaker = LearningCurve("random", grid, target.values - 0.02)
peer = LearningCurve("margin", grid,
                     target.values + rng.normal(0, 0.03, size=(10, 3)))

table = win_tie_loss(target, [weaker, peer])
print()
print(table.format())
