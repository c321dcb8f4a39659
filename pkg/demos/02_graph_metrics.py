"""Score illustrative sentence pairs with the whole metric suite.

The pairs mirror classic contrasts: negation flips, quantifier changes,
role swaps, and coreference differences.  Watch which aspect reacts to
each edit while the others stay high.
"""

from amrsim import ASPECT_NAMES, MetricConfig, metric_vector, parse_penman

PAIRS = [
    (
        "the man likes cheese / the man does not like cheese",
        "(l / like-01 :ARG0 (m / man) :ARG1 (c / cheese))",
        "(l / like-01 :polarity - :ARG0 (m / man) :ARG1 (c / cheese))",
    ),
    (
        "two cats look at a window / a cat looks at a window",
        "(l / look-01 :ARG0 (c / cat :quant 2) :ARG1 (w / window))",
        "(l / look-01 :ARG0 (c / cat) :ARG1 (w / window))",
    ),
    (
        "recruits talk to an officer / an officer talks to recruits",
        "(t / talk-01 :ARG0 (r / recruit) :ARG2 (o / officer))",
        "(t / talk-01 :ARG0 (o / officer) :ARG2 (r / recruit))",
    ),
    (
        "the cat scratches itself / the cat scratches another cat",
        "(s / scratch-01 :ARG0 (c / cat) :ARG1 c)",
        "(s / scratch-01 :ARG0 (c / cat) :ARG1 (c2 / cat :mod (a / another)))",
    ),
]


def main():
    cfg = MetricConfig(restarts=4, seed=0)
    for title, amr_a, amr_b in PAIRS:
        a = parse_penman(amr_a)
        b = parse_penman(amr_b)
        scores = metric_vector(a, b, cfg)
        print("=" * 72)
        print(title)
        lowest = sorted(zip(scores, ASPECT_NAMES))[:3]
        for name, value in zip(ASPECT_NAMES, scores):
            marker = "  <-- reacts" if any(n == name for _, n in lowest) else ""
            print("   %-18s %.3f%s" % (name, value, marker))


if __name__ == "__main__":
    main()
