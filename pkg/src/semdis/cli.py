"""Command-line interface.

Each subcommand prints a one-line summary on stdout and writes its detailed
output to ``--out``. Exit codes: 0 success, 1 usage error, 2 parse/format
error, 3 numeric/domain error, 4 I/O error.
"""

import argparse
import sys
from pathlib import Path

from threadpoolctl import threadpool_limits

from . import __version__
from .compare import DEFAULT_LMAX, compare_networks
from .core import SYMMETRIZE_RULES, induced_subnetwork, read_network, symmetrize, write_network
from .descriptors import describe, distribution_points, strength_and_degree
from .errors import SemdisError
from .featuresim import fp_cosine_network
from .ingest import ordered_intersection, parse_fa, parse_fp
from .rim import DANGLING_POLICIES, DEFAULT_STEPS, RimConfig, mc_inheritance, restrict, rim_pipeline
from .tsv import format_float, write_matrix

EXIT_USAGE = 1
EXIT_IO = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _nonnegative_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _read_words(path):
    with open(path, encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip() and not line.startswith("#")]


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load_network(path, symmetrize_rule=None):
    """Canonical network file, or a header-less edge list read as directed."""
    net = read_network(path, directed=None if _has_header(path) else True, dup_policy="sum")
    if symmetrize_rule and net.directed:
        net = symmetrize(net, symmetrize_rule)
    return net


def _has_header(path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("# directed="):
                return True
            if line.strip() and not line.startswith("#"):
                return False
    return False


def _sibling(out, suffix):
    p = Path(out)
    return str(p.with_name(p.stem + suffix))


# -- subcommands -----------------------------------------------------------


def cmd_ingest_fa(args):
    net = parse_fa(args.input, dup_policy=args.dup_policy)
    dangling = int((net.matrix.getnnz(axis=1) == 0).sum())
    if args.symmetrize:
        net = symmetrize(net, args.symmetrize)
    write_network(net, args.out)
    return f"ingest-fa: N={net.n} edges={net.edge_count} dangling={dangling} -> {args.out}"


def cmd_ingest_fp(args):
    fm = parse_fp(args.input)
    lines = []
    coo = fm.values.tocoo()
    for i, j, v in sorted(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist())):
        lines.append(f"{fm.vocab[i]}\t{fm.features[j]}\t{format_float(v)}\n")
    _write_text(args.out, "".join(lines))
    return f"ingest-fp: concepts={len(fm.vocab)} features={len(fm.features)} -> {args.out}"


def cmd_intersect(args):
    fa = parse_fa(args.fa)
    fp = parse_fp(args.fp)
    words = ordered_intersection(fa.vocab, fp.vocab)
    _write_text(args.out, "".join(w + "\n" for w in words))
    if args.fa_out:
        write_network(induced_subnetwork(fa, words), args.fa_out)
    if args.fp_out:
        sub = restrict(fp_cosine_network(fp, threshold=args.threshold), words)
        write_network(sub.network, args.fp_out)
    return f"intersect: FA={len(fa.vocab)} FP={len(fp.vocab)} common={len(words)} -> {args.out}"


def cmd_stats(args):
    net = _load_network(args.input, symmetrize_rule=args.symmetrize)
    report = describe(net)
    if args.format == "csv":
        _write_text(args.out, report.to_csv())
    else:
        _write_text(args.out, report.to_json(per_node=args.per_node, tokens=net.vocab.tokens))
    r = "NA" if report.assortativity is None else f"{report.assortativity:.4f}"
    length = "NA" if report.avg_path_length is None else f"{report.avg_path_length:.2f}"
    return (
        f"stats: N={report.n} <s>={report.mean_strength:.2f} L={length} D={report.diameter} "
        f"C={report.avg_clustering:.4f} r={r} -> {args.out}"
    )


def _load_fa(args):
    fa = parse_fa(args.input)
    if args.keep:
        fa = induced_subnetwork(fa, _read_words(args.keep))
    return fa


def cmd_rim(args):
    fa = _load_fa(args)
    config = RimConfig(
        dangling=args.dangling, include_identity=args.include_identity, threshold=args.threshold
    )
    sim = rim_pipeline(fa, steps=args.steps, config=config)
    if args.restrict:
        sim = restrict(sim, _read_words(args.restrict))
    write_matrix(args.out, sim.vocab.tokens, sim.matrix)
    net_out = args.network_out or _sibling(args.out, ".network.tsv")
    write_network(sim.network, net_out)
    return f"rim: N={sim.n} S={args.steps} edges={sim.network.edge_count} -> {args.out}, {net_out}"


def cmd_mc_rim(args):
    fa = _load_fa(args)
    t = mc_inheritance(
        fa, steps=args.steps, runs=args.runs, seed=args.seed, threads=args.threads,
        dangling=args.dangling,
    )
    write_matrix(args.out, t.vocab.tokens, t.matrix)
    return f"mc-rim: N={len(t.vocab)} S={args.steps} runs={args.runs} seed={args.seed} -> {args.out}"


def cmd_fpnet(args):
    fm = parse_fp(args.input)
    sim = fp_cosine_network(fm, threshold=args.threshold)
    if args.keep:
        sim = restrict(sim, _read_words(args.keep))
    write_network(sim.network, args.out)
    if args.matrix_out:
        write_matrix(args.matrix_out, sim.vocab.tokens, sim.matrix)
    return f"fpnet: N={sim.n} edges={sim.network.edge_count} -> {args.out}"


def cmd_compare(args):
    ref = _load_network(args.reference, symmetrize_rule="max")
    cand = _load_network(args.candidate, symmetrize_rule="max")
    words = _read_words(args.words) if args.words else None
    report = compare_networks(ref, cand, l_max=args.lmax, words=words)
    _write_text(args.out, report.to_json() if args.format == "json" else report.to_csv())
    return (
        f"compare: words={len(report.words)} lmax={args.lmax} "
        f"mean_match={report.grand_mean_match_pct:.2f}% mean_error={report.grand_mean_error:.4f} "
        f"-> {args.out}"
    )


def cmd_dist(args):
    net = _load_network(args.input, symmetrize_rule=args.symmetrize)
    k, s = strength_and_degree(net)
    values = s if args.quantity == "strength" else k
    points = distribution_points(values, mode=args.mode)
    lines = [f"{args.quantity},fraction\n"]
    lines += [f"{format_float(x)},{format_float(f)}\n" for x, f in points]
    _write_text(args.out, "".join(lines))
    return f"dist: {args.quantity} {args.mode} points={len(points)} -> {args.out}"


# -- parser ----------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", required=True, help="output path")
    common.add_argument(
        "--threads", type=_positive_int, default=1,
        help="maximum worker threads; results do not depend on it",
    )

    parser = _Parser(prog="semdis", description="Feature-similarity networks from free-association norms.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(
            name, parents=[common], help=help_text, description=help_text,
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )
        p.set_defaults(func=func)
        return p

    def walk_options(p):
        p.add_argument("input", help="free-association TSV (cue, target, frequency)")
        p.add_argument(
            "--steps", type=_positive_int, default=DEFAULT_STEPS,
            help="random-walk length S",
        )
        p.add_argument(
            "--dangling", choices=DANGLING_POLICIES, default="keep_zero",
            help="treatment of words with no outgoing associations",
        )
        p.add_argument("--keep", help="word list; restrict the association network to these words first")

    p = add("ingest-fa", cmd_ingest_fa, "validate free-association norms and write a network file")
    p.add_argument("input")
    p.add_argument("--dup-policy", choices=("sum", "error"), default="sum",
                   help="how repeated cue/target rows are merged")
    p.add_argument("--symmetrize", choices=SYMMETRIZE_RULES, default=None,
                   help="write an undirected network using this rule")

    p = add("ingest-fp", cmd_ingest_fp, "validate feature-production norms and write them normalized")
    p.add_argument("input")

    p = add("intersect", cmd_intersect, "list the words shared by FA and FP norms")
    p.add_argument("fa")
    p.add_argument("fp")
    p.add_argument("--fa-out", help="also write the FA subnetwork over the shared words")
    p.add_argument("--fp-out", help="also write the FP cosine network over the shared words")
    p.add_argument("--threshold", type=_nonnegative_float, default=0.0,
                   help="minimum cosine for an FP edge")

    p = add("stats", cmd_stats, "compute network descriptors (N, <s>, L, D, C, r)")
    p.add_argument("input", help="network file; header-less files are read as directed")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--per-node", action="store_true", help="include k, s, C for every node (json only)")
    p.add_argument("--symmetrize", choices=SYMMETRIZE_RULES, default="max",
                   help="rule for turning directed input undirected")

    p = add("rim", cmd_rim, "synthetic feature-similarity network from random-walk inheritance")
    walk_options(p)
    p.add_argument("--include-identity", action="store_true",
                   help="keep each word's own basis vector in its feature vector")
    p.add_argument("--threshold", type=_nonnegative_float, default=0.0,
                   help="minimum cosine for a network edge")
    p.add_argument("--restrict", help="word list; keep only these words in the output")
    p.add_argument("--network-out", help="network file path; None means <out stem>.network.tsv")

    p = add("mc-rim", cmd_mc_rim, "Monte Carlo estimate of the accumulated transition matrix")
    walk_options(p)
    p.add_argument("--runs", type=_positive_int, default=10_000, help="walks per start word")
    p.add_argument("--seed", type=int, default=0, help="master random seed")

    p = add("fpnet", cmd_fpnet, "cosine-similarity network from feature-production norms")
    p.add_argument("input")
    p.add_argument("--threshold", type=_nonnegative_float, default=0.0,
                   help="minimum cosine for an edge")
    p.add_argument("--keep", help="word list; restrict the network to these words")
    p.add_argument("--matrix-out", help="also write the dense cosine matrix")

    p = add("compare", cmd_compare, "score a candidate network's neighbour lists against a reference")
    p.add_argument("reference")
    p.add_argument("candidate")
    p.add_argument("--lmax", type=_positive_int, default=DEFAULT_LMAX,
                   help="longest neighbour list compared (the first 15 ranked neighbours by default)")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="csv: per-l means; json: per-word detail")
    p.add_argument("--words", help="word list; compare only these words")

    p = add("dist", cmd_dist, "cumulative degree or strength distribution")
    p.add_argument("input")
    p.add_argument("--quantity", choices=("strength", "degree"), default="strength")
    p.add_argument("--mode", choices=("survival", "below"), default="survival",
                   help="survival: fraction >= x; below: fraction < x")
    p.add_argument("--symmetrize", choices=SYMMETRIZE_RULES, default="max")
    return parser


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with threadpool_limits(limits=args.threads):
            summary = args.func(args)
    except SemdisError as exc:
        print(f"semdis {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"semdis {args.command}: {exc}", file=sys.stderr)
        return SemdisError.exit_code
    except OSError as exc:
        print(f"semdis {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(summary)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
