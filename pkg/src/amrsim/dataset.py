"""Metric-labeled sentence-pair records and their JSONL interchange format.

Each input pair of similar sentences yields one positive record and one
negative record whose second graph comes from a different input pair, so
the positive:negative ratio is exactly 1:1.  Building is deterministic for
a fixed seed, down to the output bytes.

JSONL schema (one record per line, UTF-8):
    {"sa": ..., "sb": ..., "amra": ..., "amrb": ..., "m": [15 floats],
     "pol": "positive"|"negative"}
"""

import json
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np

from amrsim.aspects import NUM_ASPECTS, MetricConfig, metric_vector
from amrsim.graph import parse_penman

POSITIVE = "positive"
NEGATIVE = "negative"


class DatasetError(ValueError):
    """Raised for malformed records or infeasible build/split requests."""


@dataclass
class PairRecord:
    sa: str
    sb: str
    amra: str
    amrb: str
    metrics: list
    polarity: str

    def validate(self):
        if len(self.metrics) != NUM_ASPECTS:
            raise DatasetError(
                "metrics must have length %d, got %d" % (NUM_ASPECTS, len(self.metrics))
            )
        for x in self.metrics:
            if not (0.0 <= x <= 1.0):
                raise DatasetError("metric value %r outside [0, 1]" % x)
        if self.polarity not in (POSITIVE, NEGATIVE):
            raise DatasetError("polarity must be positive/negative, got %r" % self.polarity)

    def to_json(self) -> str:
        obj = {
            "sa": self.sa,
            "sb": self.sb,
            "amra": self.amra,
            "amrb": self.amrb,
            "m": self.metrics,
            "pol": self.polarity,
        }
        return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def _score_pair(args):
    amra, amrb, config = args
    m = metric_vector(parse_penman(amra), parse_penman(amrb), config)
    return [float(x) for x in m]


def build_pairs(sentence_amr_pairs, seed: int = 0, config: MetricConfig = None,
                jobs: int = 1) -> list:
    """Build positive+negative PairRecords from aligned similar pairs.

    ``sentence_amr_pairs`` is a list of (sentence_a, sentence_b, amr_a,
    amr_b) tuples with PENMAN strings.  The negative partner of pair i is
    the first graph of a uniformly sampled different pair (a seeded
    permutation cycle: no fixed points, each pair used once).  Output order
    follows input order regardless of ``jobs``.
    """
    pairs = list(sentence_amr_pairs)
    n = len(pairs)
    if n < 2:
        raise DatasetError("need at least 2 input pairs for negative sampling")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    partner = np.empty(n, dtype=int)
    for t in range(n):
        partner[order[t]] = order[(t + 1) % n]

    tasks = []
    for i, (sa, sb, amra, amrb) in enumerate(pairs):
        j = int(partner[i])
        tasks.append((amra, amrb, config))
        tasks.append((amra, pairs[j][2], config))
    if jobs > 1:
        with Pool(jobs) as pool:
            scored = pool.map(_score_pair, tasks)
    else:
        scored = [_score_pair(t) for t in tasks]

    records = []
    for i, (sa, sb, amra, amrb) in enumerate(pairs):
        j = int(partner[i])
        records.append(PairRecord(sa, sb, amra, amrb, scored[2 * i], POSITIVE))
        records.append(
            PairRecord(sa, pairs[j][0], amra, pairs[j][2], scored[2 * i + 1], NEGATIVE)
        )
    for r in records:
        r.validate()
    return records


def split(records, dev_n: int, test_n: int, seed: int = 0):
    """Hold out positive-only dev/test sets; the remainder is train.

    Dev and test are disjoint and keep their original relative order.
    """
    positives = [i for i, r in enumerate(records) if r.polarity == POSITIVE]
    if dev_n + test_n > len(positives):
        raise DatasetError(
            "cannot hold out %d positives, only %d available" % (dev_n + test_n, len(positives))
        )
    rng = np.random.default_rng(seed)
    chosen = rng.permutation(len(positives))
    dev_idx = sorted(positives[k] for k in chosen[:dev_n])
    test_idx = sorted(positives[k] for k in chosen[dev_n : dev_n + test_n])
    held = set(dev_idx) | set(test_idx)
    train = [r for i, r in enumerate(records) if i not in held]
    dev = [records[i] for i in dev_idx]
    test = [records[i] for i in test_idx]
    return train, dev, test


def write_jsonl(records, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(r.to_json())
            f.write("\n")


def read_jsonl(path) -> list:
    records = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise DatasetError("line %d: invalid JSON (%s)" % (lineno, e))
            try:
                record = PairRecord(
                    sa=obj["sa"], sb=obj["sb"], amra=obj["amra"], amrb=obj["amrb"],
                    metrics=[float(x) for x in obj["m"]], polarity=obj["pol"],
                )
            except KeyError as e:
                raise DatasetError("line %d: missing key %s" % (lineno, e))
            try:
                record.validate()
            except DatasetError as e:
                raise DatasetError("line %d: %s" % (lineno, e))
            records.append(record)
    return records


def metric_matrix(records) -> np.ndarray:
    """Stack record metric vectors into an (n, 15) array."""
    return np.array([r.metrics for r in records], dtype=np.float64)
