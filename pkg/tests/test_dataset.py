import hashlib
import json

import numpy as np
import pytest

from amrsim.aspects import MetricConfig
from amrsim.dataset import (
    NEGATIVE,
    POSITIVE,
    DatasetError,
    PairRecord,
    build_pairs,
    metric_matrix,
    read_jsonl,
    split,
    write_jsonl,
)

PAIRS = [
    ("the man likes cheese", "the man does not like cheese",
     "(l / like-01 :ARG0 (m / man) :ARG1 (c / cheese))",
     "(l / like-01 :polarity - :ARG0 (m / man) :ARG1 (c / cheese))"),
    ("a cat sleeps", "a cat is sleeping",
     "(s / sleep-01 :ARG0 (c / cat))",
     "(s / sleep-01 :ARG0 (c / cat) :aspect (p / progressive))"),
    ("three dogs run", "dogs are running",
     "(r / run-02 :ARG0 (d / dog :quant 3))",
     "(r / run-02 :ARG0 (d / dog))"),
    ("a city called Bonn", "Bonn is a city",
     '(c / city :name (n / name :op1 "Bonn"))',
     '(c / city :domain (b / Bonn))'),
]

CFG = MetricConfig(restarts=2, seed=0)


@pytest.fixture(scope="module")
def records():
    return build_pairs(PAIRS, seed=0, config=CFG)


def test_build_counts_and_ratio(records):
    assert len(records) == 2 * len(PAIRS)
    assert sum(r.polarity == POSITIVE for r in records) == len(PAIRS)
    assert sum(r.polarity == NEGATIVE for r in records) == len(PAIRS)


def test_negative_partner_is_different_pair(records):
    for i, (sa, sb, amra, amrb) in enumerate(PAIRS):
        neg = records[2 * i + 1]
        assert neg.polarity == NEGATIVE
        assert neg.sa == sa
        assert neg.amra == amra
        assert neg.amrb != amrb
        assert neg.amrb in [p[2] for p in PAIRS]
        assert neg.amrb != amra


def test_metrics_in_unit_interval(records):
    m = metric_matrix(records)
    assert m.shape == (len(records), 15)
    assert np.all(m >= 0.0) and np.all(m <= 1.0)


def test_build_requires_two_pairs():
    with pytest.raises(DatasetError, match="at least 2"):
        build_pairs(PAIRS[:1], seed=0, config=CFG)


def test_build_deterministic_bytes(tmp_path, records):
    digests = []
    for run in range(2):
        path = tmp_path / ("run%d.jsonl" % run)
        write_jsonl(build_pairs(PAIRS, seed=0, config=CFG), path)
        digests.append(hashlib.sha256(path.read_bytes()).hexdigest())
    assert digests[0] == digests[1]
    other = tmp_path / "other.jsonl"
    write_jsonl(build_pairs(PAIRS, seed=1, config=CFG), other)
    assert hashlib.sha256(other.read_bytes()).hexdigest() != digests[0]


def test_parallel_jobs_keep_order(records):
    parallel = build_pairs(PAIRS, seed=0, config=CFG, jobs=2)
    assert [r.to_json() for r in parallel] == [r.to_json() for r in records]


def test_split_counts(records):
    train, dev, test = split(records, dev_n=1, test_n=1, seed=0)
    assert len(dev) == 1 and len(test) == 1
    assert len(train) == len(records) - 2
    assert all(r.polarity == POSITIVE for r in dev + test)
    ids = {id(r) for r in dev} & {id(r) for r in test}
    assert not ids
    train2, dev2, test2 = split(records, dev_n=0, test_n=2, seed=3)
    assert dev2 == []
    assert len(test2) == 2


def test_split_insufficient_positives(records):
    with pytest.raises(DatasetError, match="hold out"):
        split(records, dev_n=3, test_n=2, seed=0)


def test_jsonl_roundtrip(tmp_path, records):
    path = tmp_path / "data.jsonl"
    write_jsonl(records, path)
    again = read_jsonl(path)
    assert [r.to_json() for r in again] == [r.to_json() for r in records]


def test_jsonl_error_reports_line(tmp_path, records):
    path = tmp_path / "bad.jsonl"
    lines = [records[0].to_json()]
    obj = json.loads(records[1].to_json())
    del obj["m"]
    lines.append(json.dumps(obj))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(DatasetError, match="line 2"):
        read_jsonl(path)


def test_jsonl_length_check(tmp_path, records):
    path = tmp_path / "bad.jsonl"
    obj = json.loads(records[0].to_json())
    obj["m"] = obj["m"][:7]
    path.write_text(json.dumps(obj) + "\n", encoding="utf-8")
    with pytest.raises(DatasetError, match="length 15"):
        read_jsonl(path)


def test_record_validate_bounds():
    r = PairRecord("a", "b", "(x / y)", "(z / w)", [0.5] * 15, POSITIVE)
    r.validate()
    r.metrics[3] = 1.5
    with pytest.raises(DatasetError, match="outside"):
        r.validate()
