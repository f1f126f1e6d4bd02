"""Regression pins for the embedded 10-sample benchmark.

The acceptance suite checks the spec-level tolerances; these tests freeze the
stronger facts the implementation actually achieves, so a regression shows up
even inside the tolerance window.
"""

import numpy as np

from rankal.toy import (
    TOY_RANK_LISTS,
    TOY_SAMPLE_IDS,
    aggregate_toy,
    ranking_distances,
    run_toy_benchmark,
)


def test_all_methods_pass_their_expectations():
    results = run_toy_benchmark()
    assert len(results) == 8
    assert all(r.passed for r in results), [
        (r.method, r.kendall, r.spearman) for r in results if not r.passed
    ]


def test_pnorm_distances_exact():
    ranking = aggregate_toy("borda-pnorm")
    assert ranking_distances(ranking.ranks, TOY_RANK_LISTS) == (81, 156)


def test_bucklin_confirms_sample3_first():
    ranking = aggregate_toy("bucklin")
    assert ranking.ids[0] == 3


def test_mc2_full_column_frozen():
    # computed from the tie-aware lists; matches the reference column exactly
    ranking = aggregate_toy("mc2")
    assert tuple(ranking.ranks) == (3, 4, 1, 2, 8, 9, 10, 6, 7, 5)
    assert ranking_distances(ranking.ranks, TOY_RANK_LISTS) == (79, 154)


def test_stationary_scores_sorted_with_order():
    ranking = aggregate_toy("mc3")
    assert np.all(np.diff(ranking.scores) <= 1e-15)
    assert sorted(ranking.ids.tolist()) == TOY_SAMPLE_IDS.tolist()
