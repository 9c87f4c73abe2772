# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""SenseSplit command line.

Splits pre-trained word vectors into one vector per WordNet word sense.
Every stage writes its result to disk next to a `<file>.manifest.json`
sidecar, so later stages can be re-run with other settings without
recomputing the expensive ones.

Pipeline:
- build-graph : parse WordNet 3.0 data files into the synset graph
- bias        : Personalized PageRank per synset, turned into biasing word lists
- train       : closed-form sense vectors and unit synset vectors
- nn          : nearest neighbors in the joint word + sense space
- eval        : word similarity benchmarks (MaxSim, AvgSim, AvgSimC, S2W, S2A, Word)

Commands:
    build-graph --wordnet DIR --out FILE [--relations LIST]
    bias        --graph FILE (--synset ID | --all) --out FILE [--k N | --full] [--cache FILE]
    train       --graph FILE --bias FILE --vectors FILE --out-senses FILE --out-synsets FILE
    nn          --senses FILE --vectors FILE --query KEY [--top N] [--words-only]
    eval        --senses FILE --vectors FILE --dataset FILE --format NAME --strategy NAME
                [--graph FILE] [--antonym-adjust] [--report FILE]

Exit codes:
    0 success, 2 usage, 3 parse/format, 4 resource integrity, 5 uncomputable request

Environment (see settings.py and .env.example):
- PPR_DAMPING, PPR_MAX_ITERATIONS, PPR_TOLERANCE, BIAS_K
- DECONF_ALPHA, DECONF_LAMBDA, THREADS
- MULTIWORD_JOINER, CASE_FALLBACK, LOG_LEVEL, WORDNET_DIR

Author: BEDLAM520 Development
License: MIT
Version: 1.0.0
"""

import argparse
import json
import logging
import sys
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional

import settings
from bias_extractor import extract_bias_list, materialize_all, read_bias_lists, write_bias_lists
from deconflator import DeconfConfig, load_sense_space, train_all, write_sense_space
from errors import (
    ConfigError,
    FingerprintMismatchError,
    FormatError,
    IntegrityError,
    SenseSplitError,
    UncoveredPairError,
)
from eval_harness import DATASET_FORMATS, Resources, Strategy, format_report, run_benchmark
from ppr_engine import (
    PprConfig,
    TopKCache,
    build_transition,
    load_topk_cache,
    personalized_pagerank,
    save_topk_cache,
)
from vector_store import LookupPolicy, VectorStore, guess_format, load_word2vec, nearest, resolve
from wordnet_graph import (
    LEXICAL_RELATIONS,
    SYNSET_RELATIONS,
    build_graph,
    largest_component_fraction,
    load_graph,
    parse_synset_key,
    parse_wordnet,
    save_graph,
)


__version__ = "1.0.0"


# ---- Logging Setup -------------------------------------------------------------

logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL, logging.INFO),
    format="%(asctime)s [%(levelname)s] %(message)s",
)
logger = logging.getLogger("sensesplit")


# ---- Persistence ----------------------------------------------------------------


@dataclass
class RunManifest:
    """Provenance of one output file."""

    command: str
    graph_fingerprint: str = ""
    config: Dict[str, object] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)
    tool_version: str = __version__


def manifest_path(path: Path) -> Path:
    return path.with_name(path.name + ".manifest.json")


def save_manifest(path: Path, manifest: RunManifest) -> None:
    """Write the sidecar manifest next to `path`."""
    target = manifest_path(path)
    tmp = target.with_name(target.name + ".tmp")
    tmp.write_text(json.dumps(asdict(manifest), indent=2, sort_keys=True), encoding="utf-8")
    tmp.replace(target)


def load_manifest(path: Path) -> Optional[RunManifest]:
    """Read the sidecar manifest of `path`; None when absent."""
    source = manifest_path(path)
    if not source.exists():
        return None
    try:
        return RunManifest(**json.loads(source.read_text(encoding="utf-8")))
    except (ValueError, TypeError) as exc:
        raise FormatError(f"unreadable manifest {source}: {exc}")


def check_fingerprint(
    path: Path, expected: str, what: str, allow_unverified: bool = False
) -> Optional[str]:
    """Refuse an artifact built from another graph, or one whose graph is unknown.

    With `allow_unverified` an artifact without a recorded fingerprint is
    accepted with a warning and None is returned.
    """
    manifest = load_manifest(path)
    if manifest is None or not manifest.graph_fingerprint:
        if not allow_unverified:
            raise IntegrityError(
                f"{what} {path} has no recorded graph fingerprint; "
                f"pass --allow-unverified to use it anyway"
            )
        logger.warning(f"No graph fingerprint for {path}; using it unverified")
        return None
    if manifest.graph_fingerprint != expected:
        raise FingerprintMismatchError(expected, manifest.graph_fingerprint, what)
    return manifest.graph_fingerprint


@contextmanager
def timed(manifest: RunManifest, stage: str) -> Iterator[None]:
    start = time.perf_counter()
    yield
    manifest.timings[stage] = round(time.perf_counter() - start, 3)


# ---- Helpers --------------------------------------------------------------------


def _policy(args: argparse.Namespace) -> LookupPolicy:
    return LookupPolicy(args.joiner, not args.no_case_fallback)


def _load_vectors(args: argparse.Namespace) -> VectorStore:
    fmt = args.vectors_format or guess_format(args.vectors)
    return load_word2vec(args.vectors, fmt, limit=args.limit)


def _relations(text: Optional[str]) -> Optional[frozenset]:
    if not text or text == "all":
        return None
    symbols = frozenset(s.strip() for s in text.split(",") if s.strip())
    unknown = symbols - SYNSET_RELATIONS - LEXICAL_RELATIONS
    if unknown:
        raise ConfigError(f"unknown pointer symbols: {' '.join(sorted(unknown))}")
    return symbols


def _ppr_config(args: argparse.Namespace) -> PprConfig:
    return PprConfig(args.damping, args.max_iterations, args.tolerance)


# ---- Commands -------------------------------------------------------------------


def build_graph_command(args: argparse.Namespace) -> int:
    """Parse WordNet, build the graph, save it."""
    wordnet = args.wordnet or settings.WORDNET_DIR
    if wordnet is None:
        raise ConfigError("--wordnet is required when WORDNET_DIR is not set")
    manifest = RunManifest("build-graph", config={"relations": args.relations or "all"})
    with timed(manifest, "parse"):
        synsets = parse_wordnet(wordnet, n_jobs=args.threads)
    with timed(manifest, "graph"):
        graph = build_graph(synsets, _relations(args.relations))
    logger.info(f"Largest component holds {largest_component_fraction(graph):.2%} of synsets")
    out = Path(args.out)
    save_graph(graph, out)
    manifest.graph_fingerprint = graph.fingerprint
    save_manifest(out, manifest)
    return 0


def bias_command(args: argparse.Namespace) -> int:
    """Write biasing word lists for one synset or all of them."""
    graph_path = Path(args.graph)
    graph = load_graph(graph_path)
    config = _ppr_config(args)
    k = None if args.full else args.k
    out = Path(args.out)
    manifest = RunManifest(
        "bias",
        graph.fingerprint,
        {
            "damping": config.damping,
            "tolerance": config.tolerance,
            "max_iterations": config.max_iterations,
            "k": k,
        },
    )

    with timed(manifest, "ppr"):
        transition = build_transition(graph)
        if args.synset:
            target = parse_synset_key(args.synset)
            ppr = personalized_pagerank(transition, target, config)
            lists = {target: extract_bias_list(graph, ppr, k)}
        else:
            cache: Optional[TopKCache] = None
            cache_path = Path(args.cache) if args.cache else None
            if cache_path is not None and cache_path.exists():
                cache = load_topk_cache(cache_path)
            rankings: Dict = {}
            lists = materialize_all(
                graph, config, k, args.threads, transition=transition, cache=cache, rankings_out=rankings
            )
            if cache_path is not None and k is not None and not (
                cache is not None and cache.matches(graph.fingerprint, config, k)
            ):
                save_topk_cache(
                    cache_path,
                    TopKCache(
                        graph.fingerprint,
                        config.damping,
                        config.tolerance,
                        config.max_iterations,
                        k,
                        rankings,
                    ),
                )

    write_bias_lists(out, lists)
    save_manifest(out, manifest)
    return 0


def train_command(args: argparse.Namespace) -> int:
    """Compute and export the sense space."""
    graph = load_graph(Path(args.graph))
    bias_path = Path(args.bias)
    bias_fingerprint = check_fingerprint(
        bias_path, graph.fingerprint, "bias lists", args.allow_unverified
    )
    config = DeconfConfig(args.alpha, args.lam, args.k)
    policy = _policy(args)
    manifest = RunManifest(
        "train",
        graph.fingerprint,
        {
            "alpha": config.alpha,
            "lambda": config.lam,
            "k": config.k,
            "joiner": policy.multiword_joiner,
            "case_fallback": policy.case_fallback,
            "vectors": Path(args.vectors).name,
        },
    )

    with timed(manifest, "load"):
        lists = read_bias_lists(bias_path)
        store = _load_vectors(args)
    with timed(manifest, "train"):
        space, report = train_all(
            graph, lists, store, config, policy, args.threads, bias_fingerprint
        )

    senses_out = Path(args.out_senses)
    synsets_out = Path(args.out_synsets)
    write_sense_space(space, senses_out, synsets_out)
    save_manifest(senses_out, manifest)
    save_manifest(synsets_out, manifest)
    if args.coverage:
        report.write(args.coverage)
        save_manifest(Path(args.coverage), manifest)
    return 0


def nn_command(args: argparse.Namespace) -> int:
    """Print the nearest neighbors of a sense key or word."""
    senses = load_sense_space(Path(args.senses))
    words = _load_vectors(args)
    policy = _policy(args)

    exclude = {args.query}
    query = senses.sense_vectors.get(args.query)
    if query is None:
        resolved = resolve(words, args.query, policy)
        if resolved is not None:
            exclude.add(resolved)
            query = words[resolved]
    if query is None:
        raise UncoveredPairError(args.query, f"{args.query!r} is neither a sense key nor a known word")

    space = words if args.words_only else words.concat(senses.store)
    for rank, (key, similarity) in enumerate(
        nearest(space, query, args.top, exclude=exclude), start=1
    ):
        print(f"{rank}\t{key}\t{similarity:.4f}")
    return 0


def eval_command(args: argparse.Namespace) -> int:
    """Run one benchmark and report correlations."""
    senses_path = Path(args.senses)
    graph = None
    if args.graph:
        graph = load_graph(Path(args.graph))
        check_fingerprint(senses_path, graph.fingerprint, "sense space", args.allow_unverified)
    elif args.antonym_adjust:
        raise ConfigError("--antonym-adjust needs --graph")

    resources = Resources(load_sense_space(senses_path), _load_vectors(args), graph, _policy(args))
    report = run_benchmark(
        args.dataset, args.format, Strategy.parse(args.strategy), resources, args.antonym_adjust, args.threads
    )
    print(format_report(report))
    print(report.machine_line())
    if args.report:
        with open(args.report, "a", encoding="utf-8") as fh:
            fh.write(report.machine_line() + "\n")
    return 0


# ---- Argument parsing -----------------------------------------------------------


def _add_threads(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threads", type=int, default=settings.THREADS, help="worker threads")


def _add_unverified(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--allow-unverified",
        action="store_true",
        help="accept inputs whose manifest records no graph fingerprint",
    )


def _add_vectors(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--vectors", required=True, help="word2vec file")
    parser.add_argument("--vectors-format", choices=("binary", "text"), help="default: by suffix")
    parser.add_argument("--limit", type=int, help="load only the first N vectors")
    parser.add_argument("--joiner", default=settings.MULTIWORD_JOINER, help="multiword joiner")
    parser.add_argument(
        "--no-case-fallback",
        action="store_true",
        default=not settings.CASE_FALLBACK,
        help="do not retry lookups in lowercase",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sensesplit", description="Split word vectors into sense vectors.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("build-graph", help="parse WordNet into the synset graph")
    p.add_argument("--wordnet", type=Path, help="WordNet dict/ directory")
    p.add_argument("--out", required=True, help="graph file (.npz)")
    p.add_argument("--relations", help="comma-separated pointer symbols (default: all)")
    _add_threads(p)
    p.set_defaults(handler=build_graph_command)

    p = commands.add_parser("bias", help="biasing word lists via Personalized PageRank")
    p.add_argument("--graph", required=True)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--synset", help="one synset, as pos#offset")
    which.add_argument("--all", action="store_true", help="every non-isolated synset")
    size = p.add_mutually_exclusive_group()
    size.add_argument("--k", type=int, default=settings.BIAS_K, help="list length")
    size.add_argument("--full", action="store_true", help="keep the untruncated list")
    p.add_argument("--out", required=True)
    p.add_argument("--cache", help="top-K PPR cache file, read if valid and written otherwise")
    p.add_argument("--damping", type=float, default=settings.PPR_DAMPING)
    p.add_argument("--tolerance", type=float, default=settings.PPR_TOLERANCE)
    p.add_argument("--max-iterations", type=int, default=settings.PPR_MAX_ITERATIONS)
    _add_threads(p)
    p.set_defaults(handler=bias_command)

    p = commands.add_parser("train", help="compute sense and synset vectors")
    p.add_argument("--graph", required=True)
    p.add_argument("--bias", required=True)
    _add_vectors(p)
    p.add_argument("--out-senses", required=True)
    p.add_argument("--out-synsets", required=True)
    p.add_argument("--coverage", help="tab-separated list of uncomputable senses")
    p.add_argument("--alpha", type=float, default=settings.DECONF_ALPHA)
    p.add_argument("--lambda", dest="lam", type=float, default=settings.DECONF_LAMBDA)
    p.add_argument("--k", type=int, default=settings.BIAS_K)
    _add_unverified(p)
    _add_threads(p)
    p.set_defaults(handler=train_command)

    p = commands.add_parser("nn", help="nearest neighbors of a sense key or word")
    p.add_argument("--senses", required=True)
    _add_vectors(p)
    p.add_argument("--query", required=True, help="lemma#pos#offset or a word")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--words-only", action="store_true", help="search the word vectors only")
    p.set_defaults(handler=nn_command)

    p = commands.add_parser("eval", help="score a similarity benchmark")
    p.add_argument("--senses", required=True)
    _add_vectors(p)
    p.add_argument("--graph", help="needed for --antonym-adjust")
    p.add_argument("--dataset", required=True)
    p.add_argument("--format", required=True, choices=sorted(DATASET_FORMATS))
    p.add_argument("--strategy", required=True, help=", ".join(s.value for s in Strategy))
    p.add_argument("--antonym-adjust", action="store_true")
    p.add_argument("--report", help="append the machine-readable line to this file")
    _add_unverified(p)
    _add_threads(p)
    p.set_defaults(handler=eval_command)

    return parser


# ---- Lifecycle ------------------------------------------------------------------


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except SenseSplitError as exc:
        logger.error(f"{args.command}: {exc}")
        return exc.exit_code
    except OSError as exc:
        error = IntegrityError(f"{exc.filename or 'file'}: {exc.strerror or exc}")
        logger.error(f"{args.command}: {error}")
        return error.exit_code


if __name__ == "__main__":
    sys.exit(main())
