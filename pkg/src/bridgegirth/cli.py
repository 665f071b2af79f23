"""Command-line entry point.

Exit codes: 0 when the checked property holds, 1 when it is violated (a
witness is printed), 2 for unreadable input or failed preconditions.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import random
import sys
from dataclasses import asdict, dataclass, is_dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from . import bridges, constructions, core, gaps, reductions, search, transforms

SEED_ENV = "BRIDGEGIRTH_SEED"
BIG_INT = 2**53


class InputError(Exception):
    """Bad input: reported on stderr with exit code 2."""


@dataclass
class RunConfig:
    verb: str
    seed: int | None
    output: str
    csv: bool


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def write_text(text: str, path: str = "-") -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def load_system(path: str) -> core.PathSystem:
    return core.check_valid(core.parse(read_text(path)))


def resolve_seed(seed: int | None) -> int:
    """Explicit flag, then the environment, then a fresh random seed."""
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return random.SystemRandom().randrange(2**32)


def _csv_value(value: Any) -> Any:
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return str(value) if abs(value) >= BIG_INT else value  # strings get quoted
    if isinstance(value, float):
        return "inf" if value == float("inf") else value
    return str(value)


def emit_csv(records: Sequence[Any], columns: Sequence[str] | None = None) -> str:
    """CSV text with a header row; big integers and non-numeric cells are quoted."""
    rows = [asdict(r) if is_dataclass(r) else dict(r) for r in records]
    if columns is None:
        columns = list(rows[0]) if rows else []
    out = io.StringIO()
    csv.writer(out, lineterminator="\n").writerow(columns)
    writer = csv.writer(out, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
    for row in rows:
        writer.writerow([_csv_value(row[c]) for c in columns])
    return out.getvalue()


STATS_COLUMNS = ["n", "p", "size", "d", "ell", "l2", "min_degree", "max_degree", "min_length", "max_length", "acyclic"]


def stats_record(system: core.PathSystem) -> dict:
    s = core.stats(system)
    return {
        "n": s.node_count,
        "p": s.path_count,
        "size": s.size,
        "d": s.avg_degree,
        "ell": s.avg_length,
        "l2": s.l2_norm_sq,
        "min_degree": s.min_degree,
        "max_degree": s.max_degree,
        "min_length": s.min_length,
        "max_length": s.max_length,
        "acyclic": s.acyclic,
    }


def emit_system(system: core.PathSystem, cfg: RunConfig, notes: Iterable[str] = ()) -> None:
    header = [f"# seed {cfg.seed}"] if cfg.seed is not None else []
    header += [f"# {note}" for note in notes]
    write_text("\n".join(header + [core.serialize(system).rstrip("\n")]) + "\n", cfg.output)


def _fmt_witness(w: bridges.BridgeWitness) -> str:
    return f"river {w.river} arcs {' '.join(map(str, w.arcs))} nodes {' '.join(map(str, w.nodes))}"


# verbs ------------------------------------------------------------------


def cmd_stats(args, cfg) -> int:
    system = load_system(args.file)
    record = stats_record(system)
    if cfg.csv:
        write_text(emit_csv([record], STATS_COLUMNS), cfg.output)
    else:
        write_text("".join(f"{k} {record[k]}\n" for k in STATS_COLUMNS), cfg.output)
    return 0


def cmd_construct(args, cfg) -> int:
    kind = args.kind
    if kind == "quad":
        system = constructions.quad_construction(args.q)
    elif kind == "lattice":
        system = constructions.lattice_construction((args.n, args.ell))
    elif kind == "rs":
        if args.set in ("greedy", "behrend"):
            A = constructions.ap_free_set(args.m, args.set)
        else:
            try:
                A = {int(x) for x in args.set.split(",") if x}
            except ValueError:
                raise InputError("--set takes greedy, behrend or a comma-separated list") from None
        system = constructions.rs_construction(args.m, A)
    else:
        graph = constructions.parse_bipartite(read_text(args.file))
        system = constructions.bipartite_to_path_system(graph)
    emit_system(system, cfg)
    return 0


def cmd_trim(args, cfg) -> int:
    system = load_system(args.file)
    emit_system(constructions.trim(system, args.nodes, args.paths, cfg.seed), cfg)
    return 0


def cmd_girth(args, cfg) -> int:
    system = load_system(args.file)
    ordered = args.ordered or system.ordered
    if args.certify:
        if not core.is_acyclic(system):
            raise InputError("certificates need an acyclic system; drop --certify for exhaustive search")
        if ordered:
            cert = bridges.certify_ordered_bridge_free_acyclic(system)
        else:
            cert = bridges.certify_bridge_free_acyclic(system)
        if cert.ok:
            print("ordered-bridge-free" if ordered else "bridge-free")
            return 0
        print(f"bridge on path {cert.path} between {cert.u} and {cert.v}")
        if cert.witness is not None:
            print(_fmt_witness(cert.witness))
        return 1
    w = bridges.find_bridge_upto(system, args.max_k, ordered=ordered, budget=args.budget)
    if w is None:
        print(f">{args.max_k}")
        return 0
    print(f"girth {w.size}")
    print(_fmt_witness(w))
    return 1


def cmd_search(args, cfg) -> int:
    if args.mode == "table":
        ks = [search.parse_k(k) for k in args.ks.split(",")]
        rows = search.beta_table(args.max_n, args.max_p, ks, args.acyclic, args.budget)
        text = search.table_csv(rows)
        write_text(text, args.csv_path or cfg.output)
        if args.witness_dir:
            os.makedirs(args.witness_dir, exist_ok=True)
            for r in rows:
                stem = f"n{r.n}-p{r.p}-k{search.format_k(r.k)}"
                write_text(core.serialize(r.witness), os.path.join(args.witness_dir, stem + ".ps"))
                write_text(core.serialize(r.witness_star), os.path.join(args.witness_dir, stem + "-ordered.ps"))
        return 0
    if args.n is None or args.p is None:
        raise InputError("search needs --n and --p")
    k = search.parse_k(args.k)
    try:
        result = search.max_system(args.n, args.p, k, args.ordered, args.acyclic, args.budget)
    except search.SearchBudgetExceeded as exc:
        print(f"# budget exceeded; lower bound {exc.best.value}", file=sys.stderr)
        write_text(core.serialize(exc.best.witness), cfg.output)
        return 2
    print(f"# value {result.value} explored {result.explored}")
    write_text(core.serialize(result.witness), cfg.output)
    return 0


def cmd_clean(args, cfg) -> int:
    system = load_system(args.file)
    out = transforms.clean_regularize(system)
    emit_system(out, cfg, [f"size {system.size} -> {out.size}"])
    return 0


def cmd_strip(args, cfg) -> int:
    system = load_system(args.file)
    out = transforms.strip_two_cycles(system)
    emit_system(out, cfg, [f"size {system.size} -> {out.size}"])
    return 0


def cmd_clean_sr(args, cfg) -> int:
    system = load_system(args.file)
    res = transforms.clean_source_restricted(system, Fraction(args.lam), cfg.seed)
    notes = [f"sources {' '.join(map(str, sorted(res.sources)))}", f"retention {res.retention}"]
    emit_system(res.system, cfg, notes)
    return 0


def cmd_subsample(args, cfg) -> int:
    system = load_system(args.file)
    emit_system(transforms.subsample(system, Fraction(args.c), cfg.seed), cfg)
    return 0


def cmd_sample_base(args, cfg) -> int:
    system = load_system(args.file)
    res = transforms.sample_base_subsystem(system, args.h, cfg.seed)
    notes = [f"base {res.base} {'forwards' if res.forwards else 'backwards'} crossing {res.crossing}"]
    emit_system(res.system, cfg, notes)
    return 0


def cmd_l2(args, cfg) -> int:
    records = []
    for path in args.files:
        r = transforms.l2_report(load_system(path))
        records.append({"file": path, **asdict(r)})
    if cfg.csv:
        write_text(emit_csv(records, ["file", "l2_norm_sq", "max_length", "n_times_max_length", "p_n_term", "ratio"]), cfg.output)
    else:
        for r in records:
            print(f"{r['file']}: l2 {r['l2_norm_sq']} nL {r['n_times_max_length']} ratio {r['ratio']:.4f}")
    return 0


def _load_undirected(path: str) -> reductions.UndirectedGraph:
    inst = reductions.parse_instance(read_text(path))
    return reductions.UndirectedGraph(inst.node_count, inst.edges)


def cmd_reduce(args, cfg) -> int:
    if args.kind == "spanner":
        graph = _load_undirected(args.file)
        sp = reductions.greedy_spanner(graph, args.k)
        stretch = reductions.spanner_stretch(graph, sp)
        notes = f"# k {args.k} edges {len(graph.edges)} -> {len(sp.edges)} stretch {stretch} girth {reductions.girth(sp)}\n"
        write_text(notes + reductions.serialize_instance(reductions.WeightedDigraphInstance(sp.node_count, sp.edges)), cfg.output)
        return 0
    system = load_system(args.file)
    if args.kind == "dp":
        inst = reductions.dp_hard_instance(system)
        header = ""
    elif args.kind == "rp":
        base = reductions.system_to_digraph(system)
        res = reductions.make_independent_rp(base.node_count, base.edges, base.demands)
        inst = res.instance
        header = f"# rewrite steps {len(res.log)} tree edges {res.tree_edges}\n"
    else:
        inst, report = reductions.adp_instance(system, args.k)
        header = f"# min hops after one edge removal {report.min_hops}\n"
    write_text(header + reductions.serialize_instance(inst), cfg.output)
    return 0


def cmd_verify(args, cfg) -> int:
    inst = reductions.parse_instance(read_text(args.file))
    if args.what == "unique-shortest":
        bad = []
        adj = inst.adj()
        for i, (s, t) in enumerate(inst.demands):
            _, count = reductions.count_shortest_paths(inst, s, t, adj)
            if count != 1:
                bad.append((i, s, t, count))
        for i, s, t, count in bad:
            print(f"demand {i} ({s}, {t}): {'no' if count == 0 else 'several'} shortest paths")
        if not bad:
            print("all demands have unique shortest paths")
        return 1 if bad else 0
    problem = reductions.check_independence(inst, args.mode)
    if problem is not None:
        print(f"not independent: {problem}")
        return 1
    if args.what == "independence":
        print("independent")
    else:
        print(reductions.preserver_size(inst, args.mode))
    return 0


def cmd_adversary(args, cfg) -> int:
    system = load_system(args.file)
    H = reductions.parse_instance(read_text(args.H)).edges
    if args.kind == "shortcut":
        res = reductions.shortcut_adversary(system, [(u, v) for u, v, _ in H])
    else:
        res = reductions.hopset_adversary(system, H)
    print(f"demand {res.demand} pair {res.pair[0]} {res.pair[1]} hops {res.hops}")
    return 0


def cmd_game(args, cfg) -> int:
    system = load_system(args.file)
    transcript = reductions.online_game(system, args.builder)
    for r, (adv, pair, built) in enumerate(transcript.rounds):
        print(f"round {r}: adversary +{len(adv)} demand {pair[0]} {pair[1]} builder +{len(built)}")
    print(f"final {transcript.final}")
    return 0


def cmd_gap(args, cfg) -> int:
    kind = args.kind
    if kind == "multicut":
        system = load_system(args.system)
        part = gaps.partition_paths(system, args.d, cfg.seed)
        g = gaps.build_product(gaps.build_gs(system, part.parts), gaps.build_h(args.d, cfg.seed))
        write_text(f"# seed {cfg.seed}\n" + gaps.serialize_gap(g), cfg.output)
        return 0
    if kind == "dsf":
        system = load_system(args.system)
        res = transforms.clean_source_restricted(system, Fraction(args.lam), cfg.seed)
        inst = gaps.build_dsf_instance(res.system, res.sources)
        counts = gaps.dsf_disjoint_counts(inst)
        print(f"# seed {cfg.seed}")
        bad = 0
        for x in inst.sources:
            deg = len(inst.families[x])
            bad += counts[x] != deg
            print(f"source {x} sink {inst.sink_of[x]} paths {deg} disjoint {counts[x]}")
        return 1 if bad else 0
    g = gaps.parse_gap(read_text(args.file))
    if kind == "check-long-paths":
        r = gaps.check_long_paths(g)
        print(f"min nonterminals {r.min_nonterminals} d' {g.d_prime} fractional {r.fractional_value}")
        print(f"unreachable {len(r.unreachable)} non-canonical {len(r.non_canonical)}")
        return 0 if r.feasible and not r.non_canonical else 1
    if kind == "multicut-exact":
        size, cut = gaps.brute_force_vertex_multicut(g, args.limit)
        frac = Fraction(g.N, max(1, g.d_prime))
        print(f"multicut {size} fractional {frac} ratio {Fraction(size) / frac if frac else 'inf'}")
        print("cut " + " ".join(map(str, cut)))
        return 0
    split = gaps.node_split(g.node_count, g.edges, g.terminals)
    inst = reductions.WeightedDigraphInstance(
        split.instance.node_count,
        split.instance.edges,
        tuple((split.outlet[s], split.inlet[t]) for s, t in g.demands),
    )
    write_text(reductions.serialize_instance(inst), cfg.output)
    return 0


# parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bridgegirth", description="Path systems of high bridge girth.")
    sub = parser.add_subparsers(dest="verb", metavar="verb")

    def verb(name, func, help_text, file_arg=True, seeded=False, csv_flag=True):
        p = sub.add_parser(name, help=help_text)
        if file_arg:
            p.add_argument("file", nargs="?", default="-", help="input file, - for stdin")
        p.add_argument("-o", "--output", default="-", help="output file, - for stdout")
        if csv_flag:
            p.add_argument("--csv", action="store_true", help="emit CSV")
        if seeded:
            p.add_argument("--seed", type=int, default=None, help=f"random seed (default ${SEED_ENV})")
        p.set_defaults(func=func, seeded=seeded)
        return p

    verb("stats", cmd_stats, "summary statistics")

    p = verb("construct", cmd_construct, "build a path system", file_arg=False)
    p.add_argument("kind", choices=["quad", "lattice", "rs", "from-bipartite"])
    p.add_argument("file", nargs="?", default="-", help="bipartite graph for from-bipartite")
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--ell", type=int, default=4)
    p.add_argument("--m", type=int, default=5)
    p.add_argument("--set", default="greedy", help="greedy, behrend or a comma-separated list")

    p = verb("trim", cmd_trim, "delete random nodes and paths", seeded=True)
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--paths", type=int, required=True)

    p = verb("girth", cmd_girth, "bridge girth up to a bound")
    p.add_argument("--max-k", type=int, default=3)
    p.add_argument("--ordered", action="store_true")
    p.add_argument("--certify", action="store_true", help="polynomial certificate (acyclic systems)")
    p.add_argument("--budget", type=int, default=bridges.DEFAULT_BUDGET)

    p = verb("search", cmd_search, "exhaustive extremal search", file_arg=False, csv_flag=False)
    p.add_argument("mode", nargs="?", choices=["one", "table"], default="one")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--k", default="inf")
    p.add_argument("--ordered", action="store_true")
    p.add_argument("--acyclic", action="store_true")
    p.add_argument("--budget", type=int, default=search.DEFAULT_SEARCH_BUDGET)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--max-p", type=int, default=3)
    p.add_argument("--ks", default="2,3,inf")
    p.add_argument("--csv", dest="csv_path", default=None, help="table CSV destination")
    p.add_argument("--witness-dir", default=None)

    verb("clean", cmd_clean, "regularize degrees and lengths")
    verb("strip-2cycles", cmd_strip, "remove 2-cycles")
    p = verb("clean-sr", cmd_clean_sr, "source-restricted cleaning", seeded=True)
    p.add_argument("--lambda", dest="lam", default="1/16")
    p = verb("subsample", cmd_subsample, "random node and path subsample", seeded=True)
    p.add_argument("--c", required=True)
    p = verb("sample-base", cmd_sample_base, "subsystem around a random base path", seeded=True)
    p.add_argument("--h", type=int, required=True)
    p = verb("l2-report", cmd_l2, "L2 norm diagnostics", file_arg=False)
    p.add_argument("files", nargs="+")

    p = verb("reduce", cmd_reduce, "compile into a graph instance", file_arg=False)
    p.add_argument("kind", choices=["dp", "rp", "adp", "spanner"])
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--k", type=int, default=3)

    p = verb("verify", cmd_verify, "check an instance", file_arg=False)
    p.add_argument("what", choices=["independence", "unique-shortest", "preserver-size"])
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--mode", choices=["dp", "rp"], default="dp")

    p = verb("adversary", cmd_adversary, "find a pair missed by a shortcut set or hopset", file_arg=False)
    p.add_argument("kind", choices=["shortcut", "hopset"])
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--H", required=True, help="edge set in digraph format")

    p = verb("game", cmd_game, "online preserver game", file_arg=False)
    p.add_argument("kind", choices=["online"])
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--builder", choices=["greedy-shortest", "lazy"], default="greedy-shortest")

    p = verb("gap", cmd_gap, "integrality-gap instances", file_arg=False, seeded=True)
    p.add_argument("kind", choices=["multicut", "check-long-paths", "multicut-exact", "dsf", "node-split"])
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--system")
    p.add_argument("--d", type=int, default=16)
    p.add_argument("--limit", type=int, default=22)
    p.add_argument("--lambda", dest="lam", default="1/16")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.verb is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        seed = resolve_seed(args.seed) if args.seeded else None
        if args.verb == "gap" and args.kind in ("multicut", "dsf") and not args.system:
            raise InputError(f"gap {args.kind} needs --system")
        cfg = RunConfig(args.verb, seed, args.output, getattr(args, "csv", False) is True)
        return args.func(args, cfg)
    except (InputError, core.ParseError, core.InvalidSystemError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (bridges.BudgetExceeded, gaps.ResourceLimitError, reductions.RetryBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
