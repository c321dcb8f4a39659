"""Command line: export sentence embeddings to an EMB1 file.

Exit codes: 0 success, 1 usage error, 2 data/model error.
"""

import argparse
import sys

from embed_export.encoder import DEFAULT_MODEL, ModelUnavailableError
from embed_export.writer import export_embeddings


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print("usage error: %s" % message, file=sys.stderr)
        raise SystemExit(1)


def main(argv=None) -> int:
    parser = _Parser(prog="embed-export", description=__doc__)
    parser.add_argument("--model", default=DEFAULT_MODEL,
                        help="sentence-transformers model name, or hash:<dim> "
                             "for the deterministic offline encoder")
    parser.add_argument("--in", dest="infile", required=True,
                        help="UTF-8 text file, one sentence per line")
    parser.add_argument("--out", required=True, help="output EMB1 path")
    parser.add_argument("--batch-size", type=int, default=32)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        count, dim = export_embeddings(args.infile, args.model, args.out,
                                       batch_size=args.batch_size)
    except (ModelUnavailableError, OSError, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    print("wrote %d embeddings of dim %d to %s" % (count, dim, args.out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
