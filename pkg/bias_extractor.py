# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Sense-biasing word lists from PPR rankings.

A list starts with the target synset's own lemmas, then walks the other
synsets by descending PPR score (ties by ascending node index) and appends
every lemma not already present. Truncation to k counts all entries,
the target's own lemmas included; `k=None` keeps the full list.
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from errors import (
    BatchSummary,
    ConfigError,
    EmptyRankingError,
    FormatError,
    IntegrityError,
    SenseSplitError,
)
from ppr_engine import (
    PprConfig,
    PprVector,
    TopKCache,
    TransitionMatrix,
    build_transition,
    personalized_pagerank,
)
from wordnet_graph import SemanticGraph, SynsetId, parse_synset_key, synset_key


logger = logging.getLogger("sensesplit.bias")

DEFAULT_K = 25

# Exact ranking is computed for this many top nodes before falling back to a full sort.
_HEAD = 1024

_ENTRY = re.compile(r"(.+?):(\d+)(?:,|$)")


class BiasEntry(NamedTuple):
    word: str
    rank: int
    origin: Optional[SynsetId]


@dataclass(frozen=True)
class BiasList:
    """Ordered, de-duplicated biasing words for one target synset."""

    target: SynsetId
    entries: Tuple[BiasEntry, ...]

    @property
    def words(self) -> List[str]:
        return [entry.word for entry in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


# ---- Ranking --------------------------------------------------------------------


def _ranked_nodes(scores: np.ndarray, target_index: int) -> Iterator[int]:
    """Node indices except the target, by descending score then ascending index."""
    m = scores.shape[0]
    if m > _HEAD:
        threshold = np.partition(scores, m - _HEAD)[m - _HEAD]
        head = np.flatnonzero(scores >= threshold)
    else:
        head = np.arange(m)
    head = head[np.argsort(-scores[head], kind="stable")]
    for node in head:
        if node != target_index:
            yield int(node)
    if head.shape[0] < m:
        rest = np.ones(m, dtype=bool)
        rest[head] = False
        tail = np.flatnonzero(rest)
        tail = tail[np.argsort(-scores[tail], kind="stable")]
        for node in tail:
            if node != target_index:
                yield int(node)


def _assemble(
    graph: SemanticGraph, target: SynsetId, ranking: Iterable[int], k: Optional[int]
) -> Tuple[BiasList, List[int]]:
    """Build the list from a node ranking; also return the nodes it consumed."""
    entries: List[BiasEntry] = []
    seen = set()
    for word in graph.synset(target).lemmas:
        if k is not None and len(entries) >= k:
            break
        entries.append(BiasEntry(word, len(entries), target))
        seen.add(word)

    consumed: List[int] = []
    if k is None or len(entries) < k:
        for node in ranking:
            consumed.append(node)
            synset = graph.synsets[node]
            for word in synset.lemmas:
                if word in seen:
                    continue
                entries.append(BiasEntry(word, len(entries), synset.id))
                seen.add(word)
                if k is not None and len(entries) >= k:
                    break
            if k is not None and len(entries) >= k:
                break
    return BiasList(target, tuple(entries)), consumed


def _check_k(k: Optional[int]) -> None:
    if k is not None and k < 1:
        raise ConfigError(f"k must be at least 1, got {k}")


# ---- Operations -----------------------------------------------------------------


def extract_bias_list(
    graph: SemanticGraph, ppr: PprVector, k: Optional[int] = DEFAULT_K
) -> BiasList:
    """Turn one PPR vector into the target's biasing word list."""
    _check_k(k)
    if ppr.scores.shape[0] == 0:
        raise EmptyRankingError(f"empty PPR vector for {synset_key(ppr.target)}")
    if ppr.scores.shape[0] != graph.node_count:
        raise IntegrityError(
            f"PPR vector has {ppr.scores.shape[0]} entries, graph has {graph.node_count} nodes"
        )
    t = graph.index_of(ppr.target)
    bias_list, _ = _assemble(graph, ppr.target, _ranked_nodes(ppr.scores, t), k)
    return bias_list


def _materialize_one(
    graph: SemanticGraph,
    transition: TransitionMatrix,
    target: SynsetId,
    config: PprConfig,
    k: Optional[int],
    cached: Optional[Tuple[np.ndarray, np.ndarray]],
):
    try:
        if cached is not None:
            bias_list, _ = _assemble(graph, target, (int(n) for n in cached[0]), k)
            return bias_list, cached, None
        ppr = personalized_pagerank(transition, target, config)
        t = graph.index_of(target)
        bias_list, consumed = _assemble(graph, target, _ranked_nodes(ppr.scores, t), k)
        ranking = np.asarray(consumed, dtype=np.int64)
        return bias_list, (ranking, ppr.scores[ranking]), None
    except SenseSplitError as exc:
        return None, None, exc


def materialize_all(
    graph: SemanticGraph,
    config: PprConfig = PprConfig(),
    k: Optional[int] = DEFAULT_K,
    n_jobs: int = 1,
    summary: Optional[BatchSummary] = None,
    transition: Optional[TransitionMatrix] = None,
    cache: Optional[TopKCache] = None,
    rankings_out: Optional[Dict[int, Tuple[np.ndarray, np.ndarray]]] = None,
) -> Dict[SynsetId, BiasList]:
    """One BiasList per non-isolated synset, keyed by SynsetId in graph order.

    A matching `cache` replaces the PPR runs; `rankings_out`, when given, is
    filled with the ranked node prefix each list consumed.
    """
    _check_k(k)
    summary = summary if summary is not None else BatchSummary("bias lists")
    transition = transition if transition is not None else build_transition(graph)
    use_cache = cache is not None and k is not None and cache.matches(graph.fingerprint, config, k)
    if cache is not None and not use_cache:
        logger.warning("PPR cache does not match this graph and configuration; recomputing")

    targets = [sid for i, sid in enumerate(graph.ids) if not transition.isolated[i]]
    results = Parallel(n_jobs=n_jobs, prefer="threads", return_as="generator")(
        delayed(_materialize_one)(
            graph,
            transition,
            sid,
            config,
            k,
            cache.rankings.get(graph.index_of(sid)) if use_cache else None,
        )
        for sid in targets
    )

    lists: Dict[SynsetId, BiasList] = {}
    for sid, (bias_list, ranking, error) in zip(targets, results):
        if error is not None:
            summary.record_failure(synset_key(sid), error)
            continue
        summary.record_success()
        lists[sid] = bias_list
        if rankings_out is not None:
            rankings_out[graph.index_of(sid)] = ranking
    summary.log(logger)
    return lists


# ---- Text export ----------------------------------------------------------------


def write_bias_lists(path: Union[str, Path], lists: Dict[SynsetId, BiasList]) -> None:
    """One line per synset, `pos offset<TAB>word:rank,...`, ordered by (pos, offset)."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w", encoding="utf-8", newline="\n") as fh:
        for sid in sorted(lists):
            payload = ",".join(f"{e.word}:{e.rank}" for e in lists[sid].entries)
            fh.write(f"{sid.pos} {sid.offset:08d}\t{payload}\n")
    tmp.replace(path)
    logger.info(f"Wrote {len(lists)} bias lists to {path}")


def read_bias_lists(path: Union[str, Path]) -> Dict[SynsetId, BiasList]:
    """Read lists written by write_bias_lists; origins are not stored, so they come back None."""
    path = Path(path)
    lists: Dict[SynsetId, BiasList] = {}
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            head, sep, payload = line.partition("\t")
            try:
                if not sep:
                    raise ConfigError("missing tab")
                sid = parse_synset_key(head)
            except ConfigError as exc:
                raise FormatError(f"{path}:{lineno}: bad synset field ({exc})")
            entries = tuple(
                BiasEntry(match.group(1), int(match.group(2)), None)
                for match in _ENTRY.finditer(payload)
            )
            if [e.rank for e in entries] != list(range(len(entries))):
                raise FormatError(f"{path}:{lineno}: ranks are not consecutive from 0")
            lists[sid] = BiasList(sid, entries)
    logger.info(f"Read {len(lists)} bias lists from {path}")
    return lists
