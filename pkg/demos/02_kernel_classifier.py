"""The probabilistic kernel classifier and its bagged committee.

Kernel logistic regression returns calibrated posteriors directly, which the
margin criterion consumes; the committee's member disagreement drives the
query-by-committee criterion.
"""

import numpy as np

from rankal import LearnerConfig, SplitSpec, fit, fit_committee, make_two_blobs, posterior, split_pool

data = make_two_blobs(n=400, center_distance=3.0, sigma=0.5, seed=1)
test, pool = split_pool(data, SplitSpec(0.5, 1))
train = pool.data

config = LearnerConfig(kernel="rbf", reg=1e-2)  # gamma defaults to 1/n_features
model = fit(config, train.features, train.labels)

preds = model.predict(test.features)
print(f"test accuracy on well-separated blobs: {np.mean(preds == test.labels):.3f}")

p_pos, y_max, p_max = posterior(model, test.features[:5])
print("\nfirst five test posteriors:")
for p, y, pm in zip(p_pos, y_max, p_max):
    print(f"  P(+1)={p:.3f}  predicted={y:+d}  confidence={pm:.3f}")

# a point midway between the class centers is maximally uncertain
mid = np.zeros((1, train.n_features))
print(f"\nposterior at the midpoint: {model.predict_proba(mid)[0]:.4f} (should be ~0.5)")

committee = fit_committee(config, train.features, train.labels, g=5, seed=0)
member_probs = committee.member_proba(test.features[:5])
print("\ncommittee posteriors (rows = members):")
print(np.round(member_probs, 3))
print("per-sample member disagreement (std):", np.round(member_probs.std(axis=0), 4))
