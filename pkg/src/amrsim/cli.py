"""Command-line surface for batch metric scoring, dataset construction,
training, partitioning and evaluation.

Exit codes: 0 success, 1 usage error, 2 data error.  Every subcommand is
deterministic given its flags and seed.  A flat ``key = value`` config
file can preset most flags; explicit flags win.  Relative paths inside the
config file resolve against the ``S3_DATA_DIR`` environment variable when
it is set.
"""

import argparse
import os
import sys

import numpy as np

from amrsim import baselines, dataset, decompose, embfile, evaluate, trainer
from amrsim.aspects import ASPECT_NAMES, NUM_ASPECTS, MetricConfig, metric_vector
from amrsim.graph import PenmanError, read_penman_file, serialize_penman
from amrsim.wordvec import VectorFileError, load_vectors


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_PATH_KEYS = {"word_vectors", "embeddings", "train", "dev", "test", "data", "out"}


def read_config(path) -> dict:
    """Flat ``key = value`` config file; '#' starts a comment."""
    root = os.environ.get("S3_DATA_DIR", "")
    values = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DataError("%s:%d: expected key = value" % (path, lineno))
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            value = value.strip().strip("\"'")
            if key in _PATH_KEYS:
                if root and not os.path.isabs(value):
                    value = os.path.join(root, value)
                values[key] = value
                continue
            try:
                values[key] = int(value)
            except ValueError:
                try:
                    values[key] = float(value)
                except ValueError:
                    values[key] = value
    return values


def _setting(args, config, key, default):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in config:
        return config[key]
    return default


def _load_vectors(path):
    return load_vectors(path) if path else None


def _metric_config(args, config):
    return MetricConfig(
        restarts=int(_setting(args, config, "restarts", 4)),
        seed=int(_setting(args, config, "seed", 0)),
        wl_iterations=int(_setting(args, config, "wl_iterations", 2)),
        vectors=_load_vectors(_setting(args, config, "word_vectors", None)),
    )


def _embedding_table(path):
    matrix, sentences = embfile.read_embeddings(path, with_sentences=True)
    if sentences is None:
        raise DataError("embedding file %s has no sentence sidecar (%s)"
                        % (path, embfile.sidecar_path(path)))
    return embfile.embedding_lookup(matrix.astype(np.float64), sentences), matrix.shape[1]


def _records_to_arrays(records, table):
    e1, e2 = [], []
    for r in records:
        for sentence, out in ((r.sa, e1), (r.sb, e2)):
            if sentence not in table:
                raise DataError("no embedding for sentence: %r" % sentence)
            out.append(table[sentence])
    return np.array(e1), np.array(e2), dataset.metric_matrix(records)


def _read_pair_file(path):
    """A pairs corpus: blocks 2i and 2i+1 form pair i; ``::snt`` required."""
    graphs = read_penman_file(path)
    if len(graphs) % 2 != 0:
        raise DataError("%s holds %d graphs; a pairs file needs an even count"
                        % (path, len(graphs)))
    pairs = []
    for i in range(0, len(graphs), 2):
        ga, gb = graphs[i], graphs[i + 1]
        for g, pos in ((ga, i), (gb, i + 1)):
            if "snt" not in g.metadata:
                raise DataError("graph %d in %s lacks a '# ::snt' line" % (pos, path))
        pairs.append((ga.metadata["snt"], gb.metadata["snt"],
                      serialize_penman(ga), serialize_penman(gb)))
    return pairs


def _read_sentence_tsv(path, expect_numeric):
    """TSV rows: sentence_a, sentence_b, label [, topic]."""
    rows = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) < 3:
                raise DataError("%s:%d: expected at least 3 tab-separated columns"
                                % (path, lineno))
            sa, sb, label = parts[0], parts[1], parts[2]
            topic = parts[3] if len(parts) > 3 else ""
            if expect_numeric:
                try:
                    label = float(label)
                except ValueError:
                    raise DataError("%s:%d: label %r is not numeric" % (path, lineno, label))
            rows.append((sa, sb, label, topic))
    if not rows:
        raise DataError("no rows in %s" % path)
    return rows


def _pair_scores(rows, table, model):
    scores = []
    for sa, sb, _, _ in rows:
        for s in (sa, sb):
            if s not in table:
                raise DataError("no embedding for sentence: %r" % s)
        if model is None:
            scores.append(decompose.cosine(table[sa], table[sb]))
        else:
            scores.append(model.similarity(table[sa], table[sb]))
    return np.array(scores)


def _print_table(rows, header=None, stream=None):
    stream = stream or sys.stdout
    if header:
        stream.write("\t".join(header) + "\n")
    for row in rows:
        stream.write("\t".join(str(c) for c in row) + "\n")


# ---------------------------------------------------------------- commands


def _cmd_amr(args, config):
    graphs = read_penman_file(args.file)
    if args.action == "check":
        for g in graphs:
            g.validate()
        print("%d graphs OK" % len(graphs))
        return 0
    blocks = []
    for g in graphs:
        lines = ["# ::%s %s" % (k, v) for k, v in g.metadata.items()]
        lines.append(serialize_penman(g, indent=args.indent))
        blocks.append("\n".join(lines))
    print("\n\n".join(blocks))
    return 0


def _select_metrics(spec):
    if spec in (None, "all"):
        return list(ASPECT_NAMES)
    names = [s.strip() for s in spec.split(",") if s.strip()]
    unknown = [n for n in names if n not in ASPECT_NAMES]
    if unknown:
        raise UsageError("unknown metrics: %s (choose from %s)"
                         % (", ".join(unknown), ", ".join(ASPECT_NAMES)))
    return names


def _cmd_score(args, config):
    metrics = _select_metrics(args.metrics)
    cfg = _metric_config(args, config)
    graphs_a = read_penman_file(args.file_a)
    graphs_b = read_penman_file(args.file_b)
    if len(graphs_a) != len(graphs_b):
        raise DataError("files hold %d vs %d graphs; they must align"
                        % (len(graphs_a), len(graphs_b)))
    jobs = int(_setting(args, config, "jobs", 1))
    pairs = list(zip(graphs_a, graphs_b))
    if jobs > 1:
        from multiprocessing import Pool

        with Pool(jobs) as pool:
            vectors = pool.starmap(metric_vector, [(a, b, cfg) for a, b in pairs])
    else:
        vectors = [metric_vector(a, b, cfg) for a, b in pairs]
    if len(pairs) == 1:
        rows = [(name, "%.6f" % v)
                for name, v in zip(ASPECT_NAMES, vectors[0]) if name in metrics]
        _print_table(rows)
    else:
        keep = [k for k, name in enumerate(ASPECT_NAMES) if name in metrics]
        header = ["pair"] + [ASPECT_NAMES[k] for k in keep]
        rows = [[i] + ["%.6f" % v[k] for k in keep] for i, v in enumerate(vectors)]
        _print_table(rows, header)
    return 0


def _cmd_dataset_build(args, config):
    pairs = _read_pair_file(args.pairs)
    cfg = _metric_config(args, config)
    seed = int(_setting(args, config, "seed", 0))
    jobs = int(_setting(args, config, "jobs", 1))
    records = dataset.build_pairs(pairs, seed=seed, config=cfg, jobs=jobs)
    dataset.write_jsonl(records, args.out)
    print("wrote %d records to %s" % (len(records), args.out))
    dev_n = int(_setting(args, config, "dev", 0))
    test_n = int(_setting(args, config, "test", 0))
    if dev_n or test_n:
        _write_split(records, args.out, dev_n, test_n, seed)
    return 0


def _write_split(records, out, dev_n, test_n, seed):
    train, dev, test = dataset.split(records, dev_n, test_n, seed=seed)
    base = out[:-6] if str(out).endswith(".jsonl") else str(out)
    for part, name in ((train, "train"), (dev, "dev"), (test, "test")):
        path = "%s.%s.jsonl" % (base, name)
        dataset.write_jsonl(part, path)
        print("wrote %d records to %s" % (len(part), path))


def _cmd_dataset_split(args, config):
    records = dataset.read_jsonl(args.data)
    seed = int(_setting(args, config, "seed", 0))
    _write_split(records, args.out, int(args.dev), int(args.test), seed)
    return 0


def _train_config(args, config):
    return trainer.TrainConfig(
        lr=float(_setting(args, config, "lr", 1e-5)),
        warmup=int(_setting(args, config, "warmup", 100)),
        epochs=int(_setting(args, config, "epochs", 8)),
        batch=int(_setting(args, config, "batch", 64)),
        eval_every=int(_setting(args, config, "eval_every", 1000)),
        seed=int(_setting(args, config, "seed", 0)),
        alpha=float(_setting(args, config, "alpha", 1.0)),
        cons_weight=float(_setting(args, config, "cons_weight", 1.0)),
    )


def _cmd_train(args, config):
    table, d = _embedding_table(args.embeddings)
    train_records = dataset.read_jsonl(args.train)
    dev_records = dataset.read_jsonl(args.dev)
    train_data = _records_to_arrays(train_records, table)
    dev_data = _records_to_arrays(dev_records, table)
    h = int(_setting(args, config, "h", 16))
    partition = decompose.make_partition(d, h, ASPECT_NAMES)
    model = decompose.ProjectionModel(partition)
    cfg = _train_config(args, config)
    model, history = trainer.train(model, train_data, dev_data, cfg)
    model.save(args.out)
    _print_table(
        [(p.step, "%.8f" % p.dev_loss, "%.8f" % p.dev_decomposition,
          "%.8f" % p.dev_consistency) for p in history],
        header=["step", "dev_loss", "dev_decomposition", "dev_consistency"],
    )
    print("saved checkpoint to %s" % args.out)
    return 0


def _aspect_spearman_rows(model, records, table, scaled=False):
    e1, e2, m = _records_to_arrays(records, table)
    rows = []
    for k, name in enumerate(ASPECT_NAMES):
        preds = []
        for i in range(e1.shape[0]):
            p = model.sub_similarities(e1[i], e2[i])[k]
            preds.append(model.betas[k] * p if scaled else p)
        try:
            rho = evaluate.spearman(np.array(preds), m[:, k])
            rows.append((name, "%.4f" % rho))
        except evaluate.DegenerateInput:
            rows.append((name, "nan"))
    return rows


def _cmd_eval(args, config):
    table, _ = _embedding_table(args.embeddings)
    model = decompose.ProjectionModel.load(args.model) if args.model else None
    if args.task == "aspects" or args.report == "aspects":
        if model is None:
            raise UsageError("per-aspect evaluation requires --model")
        records = dataset.read_jsonl(args.data)
        rows = _aspect_spearman_rows(model, records, table, scaled=args.scaled)
        _print_table(rows, header=["aspect", "spearman"])
        return 0
    if args.task in ("sts", "sick"):
        rows = _read_sentence_tsv(args.data, expect_numeric=True)
        scores = _pair_scores(rows, table, model)
        labels = evaluate.minmax_normalize([r[2] for r in rows])
        rho = evaluate.spearman(scores, labels)
        _print_table([(args.task, len(rows), "%.4f" % rho)],
                     header=["task", "pairs", "spearman"])
        return 0
    # ukpa: binary F1 via threshold search plus 3-point correlation
    rows = _read_sentence_tsv(args.data, expect_numeric=False)
    scores = _pair_scores(rows, table, model)
    likert = np.array([evaluate.likert3_map(r[2]) for r in rows])
    binary = np.array([evaluate.binary_map(r[2]) for r in rows])
    rho = evaluate.spearman(scores, likert)
    if args.search_on_test:
        search_idx = None
    else:
        rng = np.random.default_rng(int(_setting(args, config, "seed", 0)))
        topics = [r[3] for r in rows]
        search_mask = np.zeros(len(rows), dtype=bool)
        for topic in sorted(set(topics)):  # held-out search portion per topic
            idx = [i for i, t in enumerate(topics) if t == topic]
            chosen = rng.permutation(len(idx))[: max(1, len(idx) // 2)]
            search_mask[[idx[c] for c in chosen]] = True
        search_idx = np.flatnonzero(search_mask)
    result = evaluate.threshold_search_f1(scores, binary, search_idx)
    _print_table(
        [("ukpa", len(rows), "%.4f" % rho, "%.4f" % result.threshold,
          "%.4f" % result.f1_macro, "%.4f" % result.f1_sim, "%.4f" % result.f1_notsim)],
        header=["task", "pairs", "likert3_spearman", "threshold",
                "f1_macro", "f1_sim", "f1_notsim"],
    )
    return 0


def _cmd_partition(args, config):
    if args.kind == "rand":
        d = int(_setting(args, config, "dims", 384))
        h = int(_setting(args, config, "h", 16))
        seed = int(_setting(args, config, "seed", 0))
        assignment = baselines.sb_rand_partition(d, h, ASPECT_NAMES, seed=seed)
    else:
        table, d = _embedding_table(args.embeddings)
        records = dataset.read_jsonl(args.data)
        e1, e2, m = _records_to_arrays(records, table)
        omega = baselines.correlation_weights(e1, e2, m)
        assignment = baselines.ilp_partition(omega, ASPECT_NAMES)
    text = assignment.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        print("wrote assignment to %s" % args.out)
    else:
        print(text)
    return 0


def _cmd_analyze(args, config):
    table, _ = _embedding_table(args.embeddings)
    model = decompose.ProjectionModel.load(args.model)
    rows = _read_sentence_tsv(args.data, expect_numeric=True)
    hum = np.array([r[2] for r in rows], dtype=np.float64)
    start, end = model.partition.residual
    with_residual = end > start
    feature_sims = {name: [] for name in ASPECT_NAMES}
    if with_residual:
        feature_sims["Residual"] = []
    sims = []
    for sa, sb, _, _ in rows:
        if sa not in table or sb not in table:
            raise DataError("no embedding for sentence: %r" % (sa if sa not in table else sb))
        p = model.sub_similarities(table[sa], table[sb])
        if args.scaled:
            p = model.betas * p
        for k, name in enumerate(ASPECT_NAMES):
            feature_sims[name].append(float(p[k]))
        if with_residual:
            feature_sims["Residual"].append(model.residual_similarity(table[sa], table[sb]))
        sims.append(model.similarity(table[sa], table[sb]))
    result = evaluate.feature_analysis(feature_sims, np.array(sims), hum)
    if args.out:
        evaluate.write_feature_csv(result, args.out)
        print("wrote feature table to %s" % args.out)
    else:
        _print_table([(n, "%.4f" % a, "%.4f" % b) for n, a, b in result],
                     header=["feature", "vs_sim", "vs_hum"])
    return 0


def _cmd_ablate(args, config):
    table, d = _embedding_table(args.embeddings)
    train_records = dataset.read_jsonl(args.train)
    dev_records = dataset.read_jsonl(args.dev)
    test_records = dataset.read_jsonl(args.test)
    train_all = _records_to_arrays(train_records, table)
    dev_data = _records_to_arrays(dev_records, table)
    e1_test, e2_test, m_test = _records_to_arrays(test_records, table)
    h = int(_setting(args, config, "h", 16))
    partition = decompose.make_partition(d, h, ASPECT_NAMES)
    cfg = _train_config(args, config)
    fractions = [float(x) for x in
                 str(_setting(args, config, "fractions", "0,0.0333,0.2,1.0")).split(",")]

    columns = []
    for frac in fractions:
        if frac <= 0.0:
            assignment = baselines.sb_rand_partition(
                d, h, ASPECT_NAMES, seed=cfg.seed)
            preds = np.array([assignment.predict(e1_test[i], e2_test[i])
                              for i in range(e1_test.shape[0])])
        else:
            n = max(cfg.batch, int(round(frac * train_all[0].shape[0])))
            n = min(n, train_all[0].shape[0])
            subset = tuple(a[:n] for a in train_all)
            model, _ = trainer.train(
                decompose.ProjectionModel(partition), subset, dev_data, cfg)
            preds = np.array([model.sub_similarities(e1_test[i], e2_test[i])
                              for i in range(e1_test.shape[0])])
        rhos = []
        for k in range(NUM_ASPECTS):
            try:
                rhos.append("%.4f" % evaluate.spearman(preds[:, k], m_test[:, k]))
            except evaluate.DegenerateInput:
                rhos.append("nan")
        columns.append(rhos)

    header = ["aspect"] + ["frac=%g" % f for f in fractions]
    rows = [[name] + [columns[c][k] for c in range(len(fractions))]
            for k, name in enumerate(ASPECT_NAMES)]
    _print_table(rows, header)
    return 0


# ---------------------------------------------------------------- wiring


def build_parser() -> _Parser:
    parser = _Parser(prog="amrsim", description=__doc__)
    parser.add_argument("--config", help="flat key = value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("amr", help="parse or validate PENMAN files")
    p.add_argument("action", choices=["parse", "check"])
    p.add_argument("file")
    p.add_argument("--indent", action="store_true")
    p.set_defaults(func=_cmd_amr)

    p = sub.add_parser("score", help="score aligned graph pairs with all metrics")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--metrics", default="all",
                   help="'all' or a comma-separated subset of metric names")
    p.add_argument("--word-vectors", dest="word_vectors")
    p.add_argument("--restarts", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--wl-iterations", dest="wl_iterations", type=int)
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("dataset", help="build or split metric-labeled pair data")
    dsub = p.add_subparsers(dest="action", required=True)
    b = dsub.add_parser("build")
    b.add_argument("--pairs", required=True,
                   help="PENMAN corpus where blocks 2i, 2i+1 form pair i")
    b.add_argument("--out", required=True)
    b.add_argument("--seed", type=int)
    b.add_argument("--dev", type=int)
    b.add_argument("--test", type=int)
    b.add_argument("--jobs", type=int)
    b.add_argument("--word-vectors", dest="word_vectors")
    b.add_argument("--restarts", type=int)
    b.add_argument("--wl-iterations", dest="wl_iterations", type=int)
    b.set_defaults(func=_cmd_dataset_build)
    s = dsub.add_parser("split")
    s.add_argument("--data", required=True)
    s.add_argument("--out", required=True, help="output prefix")
    s.add_argument("--dev", type=int, required=True)
    s.add_argument("--test", type=int, required=True)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=_cmd_dataset_split)

    p = sub.add_parser("train", help="train the projection model")
    p.add_argument("--train", required=True)
    p.add_argument("--dev", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--out", required=True)
    for flag, typ in (("--h", int), ("--alpha", float), ("--cons-weight", float),
                      ("--lr", float), ("--warmup", int), ("--epochs", int),
                      ("--batch", int), ("--eval-every", int), ("--seed", int)):
        p.add_argument(flag, dest=flag[2:].replace("-", "_"), type=typ)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate similarity predictions")
    p.add_argument("task", choices=["sts", "sick", "ukpa", "aspects"])
    p.add_argument("--data", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--model")
    p.add_argument("--report", choices=["overall", "aspects"], default="overall",
                   help="'aspects' switches any task to the per-aspect table "
                        "(requires metric-labeled JSONL data)")
    p.add_argument("--scaled", action="store_true",
                   help="report scale-adjusted aspect predictions")
    p.add_argument("--search-on-test", dest="search_on_test", action="store_true",
                   help="legacy mode: search the F1 threshold on the full data")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("partition", help="baseline dimension assignments")
    p.add_argument("kind", choices=["rand", "ilp"])
    p.add_argument("--dims", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--data", help="dev JSONL (ilp)")
    p.add_argument("--embeddings", help="EMB1 file (ilp)")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_partition)

    p = sub.add_parser("analyze", help="feature-predictor analysis")
    p.add_argument("what", choices=["features"])
    p.add_argument("--data", required=True, help="TSV with human labels")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--scaled", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("ablate", help="re-train on shrinking data slices")
    p.add_argument("what", choices=["datasize"])
    p.add_argument("--train", required=True)
    p.add_argument("--dev", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--fractions")
    p.add_argument("--h", type=int)
    for flag, typ in (("--alpha", float), ("--cons-weight", float),
                      ("--lr", float), ("--warmup", int), ("--epochs", int),
                      ("--batch", int), ("--eval-every", int), ("--seed", int)):
        p.add_argument(flag, dest=flag[2:].replace("-", "_"), type=typ)
    p.set_defaults(func=_cmd_ablate)

    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print("usage error: %s" % e, file=sys.stderr)
        return 1
    except SystemExit as e:  # --help
        return int(e.code or 0)
    config = {}
    try:
        if args.config:
            config = read_config(args.config)
        if args.command == "partition" and args.kind == "ilp":
            if not args.data or not args.embeddings:
                raise UsageError("partition ilp requires --data and --embeddings")
        return args.func(args, config)
    except UsageError as e:
        print("usage error: %s" % e, file=sys.stderr)
        return 1
    except (DataError, dataset.DatasetError, PenmanError, VectorFileError,
            embfile.EmbeddingFileError, evaluate.DegenerateInput,
            baselines.InfeasiblePartition, trainer.TrainingDiverged,
            OSError, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
