"""Evaluation utilities: rank correlation, label maps, threshold search,
and the feature-predictor table."""

import numpy as np

from amrsim.evaluate import (
    binary_map,
    feature_analysis,
    likert3_map,
    minmax_normalize,
    spearman,
    threshold_search_f1,
)


def main():
    ratings = [0, 1, 2, 3, 4, 5]
    print("min-max normalized 0..5 ratings:", minmax_normalize(ratings))

    x = [1, 2, 2, 4]
    y = [1, 3, 2, 4]
    print("Spearman with tied ranks %s vs %s: %.6f (= sqrt(0.9))"
          % (x, y, spearman(x, y)))

    labels = ["dissimilar", "unrelated", "somewhat similar", "highly similar"]
    print("\nargument-similarity label maps:")
    for lab in labels:
        print("   %-18s likert3=%.1f binary=%d"
              % (lab, likert3_map(lab), binary_map(lab)))

    rng = np.random.default_rng(0)
    gold = rng.integers(0, 2, 120)
    scores = 0.55 * gold + 0.45 * rng.uniform(0, 1, 120)
    search = np.arange(60)  # search the cutoff on half, report on the rest
    result = threshold_search_f1(scores, gold, search_idx=search)
    print("\nthreshold search on noisy scores:")
    print("   threshold %.3f  macro-F1 %.3f  (Sim %.3f / not-Sim %.3f)"
          % (result.threshold, result.f1_macro, result.f1_sim, result.f1_notsim))

    hum = rng.uniform(0, 1, 80)
    system = 0.8 * hum + 0.2 * rng.uniform(0, 1, 80)
    features = {
        "Concepts": (0.7 * hum + 0.3 * rng.uniform(0, 1, 80)).tolist(),
        "Negation": rng.uniform(0, 1, 80).tolist(),
        "Residual": system.tolist(),
    }
    print("\nfeature-predictor table (rho vs system / vs human):")
    for name, vs_sim, vs_hum in feature_analysis(features, system, hum):
        print("   %-10s %+.3f  %+.3f" % (name, vs_sim, vs_hum))


if __name__ == "__main__":
    main()
