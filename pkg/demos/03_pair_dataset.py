"""Build a metric-labeled pair dataset and split off dev/test positives.

Every input pair produces a positive record and a negative record whose
second graph is borrowed from another pair, so the model later sees both
related and unrelated graph pairs with their metric profiles.
"""

import tempfile
from pathlib import Path

from amrsim.dataset import build_pairs, read_jsonl, split, write_jsonl

PAIRS = [
    ("the man likes cheese", "the man loves cheese",
     "(l / like-01 :ARG0 (m / man) :ARG1 (c / cheese))",
     "(l / love-01 :ARG0 (m / man) :ARG1 (c / cheese))"),
    ("a cat sleeps", "the cat is sleeping",
     "(s / sleep-01 :ARG0 (c / cat))",
     "(s / sleep-01 :ARG0 (c / cat) :time (n / now))"),
    ("three dogs run", "some dogs run",
     "(r / run-02 :ARG0 (d / dog :quant 3))",
     "(r / run-02 :ARG0 (d / dog :quant (s / some)))"),
    ("Bonn is a city", "Bonn, a German city",
     '(c / city :name (n / name :op1 "Bonn"))',
     '(c / city :mod (g / german) :name (n / name :op1 "Bonn"))'),
    ("a boy wants to go", "the boy wants to leave",
     "(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))",
     "(w / want-01 :ARG0 (b / boy) :ARG1 (l / leave-01 :ARG0 b))"),
]


def main():
    records = build_pairs(PAIRS, seed=7)
    print("built %d records from %d input pairs (1:1 positive:negative)"
          % (len(records), len(PAIRS)))
    for r in records[:4]:
        print("   %-8s  %-28s | %-28s  Smatch=%.2f Negation=%.2f quant=%.2f"
              % (r.polarity, r.sa[:28], r.sb[:28],
                 r.metrics[0], r.metrics[6], r.metrics[14]))

    train, dev, test = split(records, dev_n=1, test_n=1, seed=7)
    print("\nsplit: %d train / %d dev / %d test (dev and test are positives only)"
          % (len(train), len(dev), len(test)))

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "pairs.jsonl"
        write_jsonl(records, path)
        line = path.read_text(encoding="utf-8").splitlines()[0]
        print("\nJSONL record (sa/sb sentences, amra/amrb graphs, m metrics, pol):")
        print("   %s..." % line[:120])
        again = read_jsonl(path)
        assert [r.to_json() for r in again] == [r.to_json() for r in records]
        print("\nround-trip through disk is lossless")


if __name__ == "__main__":
    main()
