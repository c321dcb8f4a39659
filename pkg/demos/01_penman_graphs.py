"""Walk through PENMAN parsing: triples, degrees, inverse roles, round-trips."""

from amrsim import extract_triples, node_degrees, parse_penman, serialize_penman

TEXT = "(l / like-01 :polarity - :ARG0 (m / man) :ARG1 (c / cheese))"


def main():
    print("input:", TEXT)
    g = parse_penman(TEXT)
    print("\nroot:", g.root)
    print("nodes:", g.nodes)
    print("edges:")
    for s, r, t in g.edges:
        print("   %s -[%s]-> %s" % (s, r, t))

    print("\ntriple view (instances, attributes incl. the top marker, relations):")
    for t in extract_triples(g):
        print("   %-9s %s %s %s" % (t.kind, t.source, t.label, t.target))

    print("\nnode degrees (in, out):", node_degrees(g))

    print("\ncanonical serialization:")
    print(serialize_penman(g, indent=True))

    inverse = "(c / cheese :ARG1-of (l / like-01 :ARG0 (m / man)))"
    h = parse_penman(inverse)
    print("\ninverse roles normalize to forward edges:")
    print("   input :", inverse)
    print("   edges :", h.edges)
    print("   note the root stays on the original node:", h.root)

    reentrant = "(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))"
    r = parse_penman(reentrant)
    print("\nre-entrancy survives a round-trip:")
    print("   ", serialize_penman(r))
    assert extract_triples(parse_penman(serialize_penman(r))) == extract_triples(r)
    print("   triple sets identical after reparse")


if __name__ == "__main__":
    main()
