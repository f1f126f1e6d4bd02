"""Loading tabular data, normalizing it, and managing a labeling pool.

Walks through both supported file formats, the min-max normalization rule,
the deterministic test/pool split, and the simulated label oracle.
"""

import os

import numpy as np

from rankal import SplitSpec, load_table, normalize_features, oracle_label, split_pool

HERE = os.path.dirname(__file__)
SAMPLES = os.path.join(HERE, "..", "sample_data")

# --- dense CSV: header row, label in the last column --------------------
dense = load_table(os.path.join(SAMPLES, "iris_2class.csv"), "dense-csv")
print(f"dense CSV: {len(dense)} samples x {dense.n_features} features")
print(f"labels coerced to {{-1,+1}}: {np.unique(dense.labels)}")

# --- sparse index:value lines, 1-based indices ---------------------------
sparse = load_table(os.path.join(SAMPLES, "tiny_sparse.txt"), "sparse-index-value")
print(f"\nsparse file: {len(sparse)} samples x {sparse.n_features} features")
print("row 0 feature vector:", sparse.features[0])

# --- normalization: every column lands in [0, 1] -------------------------
norm = normalize_features(dense)
print("\nafter normalization, per-column ranges:")
print("  min:", norm.features.min(axis=0))
print("  max:", norm.features.max(axis=0))
print("idempotent:", np.allclose(norm.features, normalize_features(norm).features))

# --- deterministic split into held-out test set and unlabeled pool -------
test, pool = split_pool(norm, SplitSpec(test_fraction=0.5, seed=7))
print(f"\nsplit: {len(test)} test samples, {pool.n_unlabeled} pool samples")
test2, pool2 = split_pool(norm, SplitSpec(test_fraction=0.5, seed=7))
print("same seed, same split:", np.array_equal(test.ids, test2.ids))

# --- the oracle reveals ground-truth labels for a queried batch ----------
batch = pool.unlabeled_idx[:2]
after = oracle_label(pool, batch)
print(f"\nqueried {len(batch)} samples: labeled {after.n_labeled}, "
      f"unlabeled {after.n_unlabeled}, iteration {after.iteration}")
print("revealed labels:", after.labeled_labels)
