"""Correlation and classification evaluation utilities.

Spearman uses average ranks for ties.  The four-way argument-similarity
labels map to a 3-point scale (0 / 0.5 / 1) for correlation and to binary
labels for F1, where the decision threshold is found by exhaustive search
over midpoints of adjacent unique scores.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats


class DegenerateInput(ValueError):
    """Raised when an input has no variation to rank or normalize."""


def spearman(x, y) -> float:
    """Spearman rank correlation (Pearson on tie-averaged ranks)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-d arrays of equal length")
    if x.shape[0] < 3:
        raise ValueError("need at least 3 observations")
    rx = stats.rankdata(x, method="average")
    ry = stats.rankdata(y, method="average")
    if np.all(rx == rx[0]) or np.all(ry == ry[0]):
        raise DegenerateInput("constant input has no ranking")
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    return float(np.dot(rx, ry) / np.sqrt(np.dot(rx, rx) * np.dot(ry, ry)))


def minmax_normalize(labels) -> np.ndarray:
    """Scale labels linearly onto [0, 1]."""
    labels = np.asarray(labels, dtype=np.float64)
    lo, hi = labels.min(), labels.max()
    if hi == lo:
        raise DegenerateInput("cannot min-max normalize constant labels")
    return (labels - lo) / (hi - lo)


_CANONICAL_LABELS = {
    "dissimilar": 0.0,
    "unrelated": 0.0,
    "somewhat-similar": 0.5,
    "highly-similar": 1.0,
}


def _canonical_label(label: str) -> str:
    return label.strip().lower().replace(" ", "-").replace("_", "-")


def likert3_map(label: str) -> float:
    """dissimilar/unrelated -> 0, somewhat similar -> 0.5, highly similar -> 1."""
    key = _canonical_label(label)
    if key not in _CANONICAL_LABELS:
        raise ValueError("unknown argument-similarity label: %r" % label)
    return _CANONICAL_LABELS[key]


def binary_map(label: str) -> int:
    """The similar family maps to 1, dissimilar and unrelated to 0."""
    return int(likert3_map(label) >= 0.5)


def _f1(pred, gold, positive) -> float:
    tp = int(np.sum((pred == positive) & (gold == positive)))
    fp = int(np.sum((pred == positive) & (gold != positive)))
    fn = int(np.sum((pred != positive) & (gold == positive)))
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2 * precision * recall / (precision + recall)


def _f1_triplet(scores, labels, threshold):
    pred = (scores >= threshold).astype(int)
    f1_sim = _f1(pred, labels, 1)
    f1_not = _f1(pred, labels, 0)
    return (f1_sim + f1_not) / 2.0, f1_sim, f1_not


def _midpoints(scores) -> np.ndarray:
    uniq = np.unique(scores)
    if uniq.shape[0] < 2:
        return uniq  # constant scores: single trivial candidate
    return (uniq[:-1] + uniq[1:]) / 2.0


@dataclass
class ThresholdResult:
    threshold: float
    f1_macro: float
    f1_sim: float
    f1_notsim: float


def threshold_search_f1(scores, labels, search_idx=None) -> ThresholdResult:
    """Pick the macro-F1-maximizing midpoint threshold.

    The search runs over every midpoint between adjacent sorted unique
    scores of the search split (``search_idx``, default: all data; ties
    resolved toward the smallest threshold).  Reported F1 values are
    computed on the evaluation split: the complement of ``search_idx``
    when one is given, otherwise the full data.  Scores >= threshold
    classify as similar.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=int)
    if search_idx is None:
        search_scores, search_labels = scores, labels
        eval_scores, eval_labels = scores, labels
    else:
        search_idx = np.asarray(search_idx, dtype=int)
        mask = np.ones(scores.shape[0], dtype=bool)
        mask[search_idx] = False
        search_scores, search_labels = scores[search_idx], labels[search_idx]
        eval_scores, eval_labels = scores[mask], labels[mask]
        if eval_scores.shape[0] == 0:
            eval_scores, eval_labels = search_scores, search_labels
    if len(set(search_labels.tolist())) < 2:
        raise DegenerateInput("threshold search needs both classes present")
    best = None
    for t in _midpoints(search_scores):
        macro, _, _ = _f1_triplet(search_scores, search_labels, t)
        if best is None or macro > best[0] + 1e-15:
            best = (macro, t)
    threshold = best[1]
    macro, f1_sim, f1_not = _f1_triplet(eval_scores, eval_labels, threshold)
    return ThresholdResult(float(threshold), macro, f1_sim, f1_not)


def feature_analysis(feature_sims: dict, system_sims, human_sims) -> list:
    """Per-feature Spearman against system and human similarities.

    ``feature_sims`` maps feature name -> per-pair similarity list.
    Returns rows of (feature, rho_vs_sim, rho_vs_hum); degenerate cells
    come back as NaN rather than failing the whole table.
    """
    rows = []
    for name, values in feature_sims.items():
        cells = []
        for target in (system_sims, human_sims):
            try:
                cells.append(spearman(values, target))
            except DegenerateInput:
                cells.append(math.nan)
        rows.append((name, cells[0], cells[1]))
    return rows


def write_feature_csv(rows, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["feature", "spearman_vs_sim", "spearman_vs_hum"])
        for name, vs_sim, vs_hum in rows:
            writer.writerow([name, "%.6f" % vs_sim, "%.6f" % vs_hum])


def paired_ttest(a, b):
    """Paired t-test over per-seed scores; returns (statistic, p-value)."""
    res = stats.ttest_rel(np.asarray(a, dtype=np.float64),
                          np.asarray(b, dtype=np.float64))
    return float(res.statistic), float(res.pvalue)
