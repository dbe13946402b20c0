"""Command-line entry point.

Exit codes: 0 success, 1 domain error (single grep-able ``Code: message``
line on stderr), 2 usage error.  Deterministic subcommands produce
byte-identical output across runs; nothing touches the network unless
``--backend web`` is given.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from fraglead import analysis, fragments, ontology, search, smiles
from fraglead.errors import FragleadError


class FragleadUsage(Exception):
    """Flag combination errors detected after argparse."""


def _schedule(value: str) -> fragments.SizeSchedule:
    try:
        return fragments.SizeSchedule.from_string(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _resolve_backend(args) -> search.BackendConfig:
    if args.config:
        config = search.BackendConfig.from_file(args.config)
        # network use requires an explicit --backend web
        if config.kind != args.backend:
            raise FragleadUsage(
                f"config file is kind {config.kind!r} but --backend is "
                f"{args.backend!r}"
            )
        return config
    if args.backend == "corpus":
        if not args.corpus:
            raise FragleadUsage("corpus backend needs --corpus or --config")
        return search.BackendConfig(kind="corpus", corpus_path=args.corpus)
    raise FragleadUsage("web backend needs --config")


def _write_out(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --- subcommand implementations ------------------------------------------

def _cmd_tokenize(args) -> int:
    tokens = smiles.tokenize(args.smiles)
    if args.count:
        print(len(tokens))
        return 0
    for token in tokens:
        print(f"{token.position}\t{token.kind.value}\t{token.text}")
    return 0


def _cmd_parse(args) -> int:
    graph = smiles.parse_smiles(args.smiles)
    print(f"atoms: {len(graph.atoms)}")
    print(f"bonds: {len(graph.bonds)}")
    print(f"formula: {smiles.molecular_formula(graph)}")
    for index, atom in enumerate(graph.atoms):
        print(f"atom {index}\t{atom.element}\tH{atom.implicit_h}")
    for bond in graph.bonds:
        print(f"bond {bond.a}-{bond.b}\torder {bond.order}")
    for warning in graph.valence_warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


def _cmd_formula(args) -> int:
    graph = smiles.parse_smiles(args.smiles)
    print(smiles.molecular_formula(graph))
    return 0


def _cmd_fragment(args) -> int:
    tokens = smiles.tokenize(args.smiles)
    if args.length is not None:
        picks = fragments.windows(tokens, args.length)
    else:
        picks = []
        for repeat in range(args.repeat):
            picks.extend(fragments.sample(tokens, args.sizes, args.seed + repeat))
    for fragment in picks:
        print(f"{fragment.start}\t{fragment.length}\t{fragment.text}")
    return 0


def _cmd_search(args) -> int:
    config = _resolve_backend(args)
    backend = search.open_backend(config)
    if args.cache:
        result = search.cached_execute(
            search.QueryCache(args.cache), backend, args.query, refresh=args.refresh
        )
    else:
        result = search.execute(backend, args.query)
    print(result.result_set_size)
    if args.list:
        if not isinstance(backend, search.CorpusBackend):
            print("--list is only available on the corpus backend", file=sys.stderr)
            return 1
        for doc_id in backend.matching_documents(args.query):
            print(doc_id)
    return 0


def _cmd_sweep(args) -> int:
    config = _resolve_backend(args)
    cache = search.QueryCache(args.cache) if args.cache else None
    table = search.sweep(
        args.smiles, args.sizes, args.seed, config, cache, refresh=args.refresh
    )
    fit = None
    if args.fit:
        fit = analysis.fit_trend(table)
    _write_out(args, analysis.emit_csv(table, fit))
    return 0


def _cmd_fit(args) -> int:
    table = analysis.read_csv(Path(args.infile).read_text(encoding="utf-8"))
    fit = analysis.fit_trend(table)
    print(f"slope\t{fit.slope:.6f}")
    print(f"intercept\t{fit.intercept:.6f}")
    print(f"r_squared\t{fit.r_squared:.6f}")
    print(f"points_used\t{fit.points_used}")
    print(f"excluded_zero_rows\t{fit.excluded_zero_rows}")
    if fit.slope < 0:
        length = analysis.threshold_length(fit, args.manageable)
        print(f"threshold_length({args.manageable})\t{length}")
    else:
        print(f"threshold_length({args.manageable})\tundefined (non-decreasing trend)")
    return 0


def _cmd_plot(args) -> int:
    table = analysis.read_csv(Path(args.infile).read_text(encoding="utf-8"))
    fit = None
    plottable = [row for row in table.rows if row.log_size is not None]
    if len(plottable) >= 2 and len({row.symbols for row in plottable}) >= 2:
        fit = analysis.fit_trend(table)
    svg = analysis.emit_plot(table, fit, width=args.width, height=args.height)
    _write_out(args, svg)
    return 0


# --- ontology subcommands --------------------------------------------------

def _read_ontology(path: str) -> ontology.DrugLeadOntology:
    return ontology.load(Path(path).read_bytes())


def _write_ontology(path: str, onto: ontology.DrugLeadOntology) -> None:
    Path(path).write_bytes(ontology.save(onto))


def _cmd_onto_init(args) -> int:
    _write_ontology(args.out, ontology.DrugLeadOntology(args.root))
    return 0


def _cmd_onto_add_drug(args) -> int:
    onto = _read_ontology(args.file)
    onto = ontology.add_drug(onto, args.name, args.smiles)
    _write_ontology(args.file, onto)
    return 0


def _cmd_onto_add_component(args) -> int:
    onto = _read_ontology(args.file)
    if args.fragment is not None:
        component: ontology.Component = ontology.FragmentComponent(args.fragment)
    elif args.named is not None:
        component = ontology.NamedComponent(args.named)
    else:
        component = ontology.Skeleton()
    onto = ontology.add_component(onto, args.drug, component)
    _write_ontology(args.file, onto)
    return 0


def _cmd_onto_validate(args) -> int:
    report = ontology.validate(_read_ontology(args.file))
    for message in report.errors:
        print(f"error: {message}")
    for message in report.warnings:
        print(f"warning: {message}")
    if report.ok:
        print(f"ok ({len(report.warnings)} warnings)")
        return 0
    return 1


def _cmd_onto_inputs(args) -> int:
    pairs = ontology.search_inputs(_read_ontology(args.file), args.drug)
    for name, fragment in pairs:
        print(f"{name}\t{fragment}")
    return 0


# --- parser wiring ----------------------------------------------------------

def _add_backend_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--backend", choices=["corpus", "web"], default="corpus",
                        help="backend kind (default corpus)")
    parser.add_argument("--corpus", help="corpus directory or line-delimited file")
    parser.add_argument("--config", help="backend config file (JSON)")
    parser.add_argument("--cache", help="query cache file")
    parser.add_argument("--refresh", action="store_true",
                        help="bypass cached results (still stores fresh ones)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraglead",
        description="Fragment linearized molecular structures and search with them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tokenize", help="split a SMILES string into symbols")
    p.add_argument("smiles")
    p.add_argument("--count", action="store_true", help="print only the symbol count")
    p.set_defaults(func=_cmd_tokenize)

    p = sub.add_parser("parse", help="parse a SMILES string and summarize the graph")
    p.add_argument("smiles")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("formula", help="molecular formula in Hill order")
    p.add_argument("smiles")
    p.set_defaults(func=_cmd_formula)

    p = sub.add_parser("fragment", help="emit symbol windows or a seeded sample")
    p.add_argument("--smiles", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--length", type=int, help="emit every window of this size")
    group.add_argument("--sizes", type=_schedule, metavar="MIN:MAX[:STEP]",
                       help="sample one window per size in the schedule")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    p.add_argument("--repeat", type=int, default=1,
                   help="number of samples per size (seeds seed..seed+N-1)")
    p.set_defaults(func=_cmd_fragment)

    p = sub.add_parser("search", help="run one query against a backend")
    p.add_argument("--query", required=True)
    p.add_argument("--list", action="store_true",
                   help="also list matching doc ids (corpus backend)")
    _add_backend_flags(p)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("sweep", help="sample fragments of increasing size and query each")
    p.add_argument("--smiles", required=True)
    p.add_argument("--sizes", type=_schedule, required=True, metavar="MIN:MAX[:STEP]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fit", action="store_true", help="append trend-fit comment lines")
    p.add_argument("--out", help="write CSV here instead of stdout")
    _add_backend_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("fit", help="least-squares trend over a sweep CSV")
    p.add_argument("--in", dest="infile", required=True, help="sweep CSV file")
    p.add_argument("--manageable", type=int, default=1000,
                   help="result-set size considered manageable (default 1000)")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("plot", help="SVG scatter + trend line from a sweep CSV")
    p.add_argument("--in", dest="infile", required=True, help="sweep CSV file")
    p.add_argument("--out", help="write SVG here instead of stdout")
    p.add_argument("--width", type=int, default=640)
    p.add_argument("--height", type=int, default=440)
    p.set_defaults(func=_cmd_plot)

    p = sub.add_parser("ontology", help="manage drug-lead ontology files")
    onto_sub = p.add_subparsers(dest="ontology_command", required=True)

    q = onto_sub.add_parser("init", help="create an empty ontology")
    q.add_argument("--root", required=True, help="root drug class name")
    q.add_argument("--out", required=True)
    q.set_defaults(func=_cmd_onto_init)

    q = onto_sub.add_parser("add-drug", help="add a drug instance")
    q.add_argument("--file", required=True)
    q.add_argument("--name", required=True)
    q.add_argument("--smiles", help="full linearized structure (optional)")
    q.set_defaults(func=_cmd_onto_add_drug)

    q = onto_sub.add_parser("add-component", help="add a component to a drug")
    q.add_argument("--file", required=True)
    q.add_argument("--drug", required=True)
    group = q.add_mutually_exclusive_group(required=True)
    group.add_argument("--fragment", help="linearized fragment text")
    group.add_argument("--named", help="conventional component label")
    group.add_argument("--skeleton", action="store_true",
                       help="mark that components do not cover the whole molecule")
    q.set_defaults(func=_cmd_onto_add_component)

    q = onto_sub.add_parser("validate", help="report structural errors and warnings")
    q.add_argument("--file", required=True)
    q.set_defaults(func=_cmd_onto_validate)

    q = onto_sub.add_parser("inputs", help="list (drug, fragment) search inputs")
    q.add_argument("--file", required=True)
    q.add_argument("--drug", help="restrict to one drug")
    q.set_defaults(func=_cmd_onto_inputs)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except FragleadUsage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except FragleadError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
