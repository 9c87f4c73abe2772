# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Personalized PageRank over the semantic graph by power iteration.

The update is  p <- (1 - sigma) * e_t + sigma * M^T p  with M the
row-stochastic transition matrix (M[i, j] = 1 / degree(i) for every edge).
Gathering through M^T keeps every iterate a probability distribution.
Isolated synsets are left out of M: they cannot be targets and score 0.
"""

import logging
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp
from joblib import Parallel, delayed

from errors import (
    BatchSummary,
    ConfigError,
    FormatError,
    IntegrityError,
    IsolatedTargetError,
    SenseSplitError,
)
from wordnet_graph import SemanticGraph, SynsetId, synset_key


logger = logging.getLogger("sensesplit.ppr")


# ---- Types ----------------------------------------------------------------------


@dataclass(frozen=True)
class PprConfig:
    """Power-iteration settings: damping sigma, iteration cap, L1 tolerance."""

    damping: float = 0.85
    max_iterations: int = 30
    tolerance: float = 1e-9

    def __post_init__(self) -> None:
        if not 0.0 < self.damping < 1.0:
            raise ConfigError(f"damping must lie in (0, 1), got {self.damping}")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be positive, got {self.max_iterations}")
        if self.tolerance < 0.0:
            raise ConfigError(f"tolerance must be non-negative, got {self.tolerance}")


@dataclass(frozen=True, eq=False)
class PprVector:
    """Converged (or truncated) PPR distribution for one target synset."""

    target: SynsetId
    scores: np.ndarray
    iterations: int = 0
    residuals: Tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Row-stochastic M plus its transpose, which the update multiplies by."""

    graph: SemanticGraph
    matrix: sp.csr_matrix
    transpose: sp.csr_matrix
    isolated: np.ndarray = field(repr=False)

    @property
    def node_count(self) -> int:
        return self.matrix.shape[0]


# ---- Operations -----------------------------------------------------------------


ROW_SUM_TOLERANCE = 1e-12
MASS_TOLERANCE = 1e-6


def check_row_sums(matrix: sp.csr_matrix, isolated: np.ndarray) -> int:
    """Count non-isolated rows whose sum is not 1; warns when any is off."""
    sums = np.asarray(matrix.sum(axis=1)).ravel()
    bad = np.flatnonzero(~isolated & (np.abs(sums - 1.0) > ROW_SUM_TOLERANCE))
    if bad.size:
        worst = float(np.abs(sums[bad] - 1.0).max())
        logger.warning(
            f"{bad.size} transition rows do not sum to 1 (worst deviation {worst:.3e}, "
            f"first row {int(bad[0])})"
        )
    return int(bad.size)


def build_transition(graph: SemanticGraph) -> TransitionMatrix:
    """Row-normalize the adjacency; isolated rows stay empty and are flagged."""
    if graph.node_count == 0:
        raise IntegrityError("cannot build a transition matrix for an empty graph")
    degrees = graph.degrees.astype(np.float64)
    isolated = degrees == 0
    inverse = np.divide(1.0, degrees, out=np.zeros_like(degrees), where=~isolated)
    matrix = (sp.diags(inverse) @ graph.adjacency()).tocsr()
    matrix.sort_indices()
    transpose = matrix.T.tocsr()
    transpose.sort_indices()
    isolated.setflags(write=False)
    check_row_sums(matrix, isolated)
    if isolated.any():
        logger.info(f"Transition matrix leaves out {int(isolated.sum())} isolated synsets")
    return TransitionMatrix(graph, matrix, transpose, isolated)


def personalized_pagerank(
    transition: TransitionMatrix, target: SynsetId, config: PprConfig = PprConfig()
) -> PprVector:
    """Run power iteration from a one-hot teleport vector on `target`."""
    t = transition.graph.index_of(target)
    if transition.isolated[t]:
        raise IsolatedTargetError(f"synset {synset_key(target)} has no neighbors")

    teleport = np.zeros(transition.node_count, dtype=np.float64)
    teleport[t] = 1.0
    scores = teleport.copy()
    sigma = config.damping
    residuals = []
    for _ in range(config.max_iterations):
        updated = (1.0 - sigma) * teleport + sigma * (transition.transpose @ scores)
        delta = float(np.abs(updated - scores).sum())
        residuals.append(delta)
        scores = updated
        if delta < config.tolerance:
            break

    if any(b > a + 1e-15 for a, b in zip(residuals[1:], residuals[2:])):
        logger.warning(f"Non-monotone convergence for {synset_key(target)}: {residuals}")
    mass = float(scores.sum())
    if abs(mass - 1.0) > MASS_TOLERANCE:
        logger.warning(f"PPR mass for {synset_key(target)} is {mass:.9f}, not 1")
    logger.debug(
        f"PPR {synset_key(target)}: {len(residuals)} iterations, last delta {residuals[-1]:.3e}"
    )
    scores.setflags(write=False)
    return PprVector(target, scores, len(residuals), tuple(residuals))


def batch_ppr(
    transition: TransitionMatrix,
    targets: Sequence[SynsetId],
    config: PprConfig = PprConfig(),
    n_jobs: int = 1,
    summary: Optional[BatchSummary] = None,
) -> Iterator[PprVector]:
    """Yield one PprVector per target, in input order.

    Failed targets are skipped and recorded in `summary`.
    """
    summary = summary if summary is not None else BatchSummary("ppr")

    def _run(target: SynsetId):
        try:
            return personalized_pagerank(transition, target, config), None
        except SenseSplitError as exc:
            return None, exc

    results = Parallel(n_jobs=n_jobs, prefer="threads", return_as="generator")(
        delayed(_run)(target) for target in targets
    )
    for target, (vector, error) in zip(targets, results):
        if error is not None:
            summary.record_failure(synset_key(target), error)
            continue
        summary.record_success()
        yield vector
    summary.log(logger)


# ---- Top-K cache ----------------------------------------------------------------


CACHE_MAGIC = b"SSPK"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sH32sddIII")
_RECORD = struct.Struct("<II")


@dataclass(frozen=True, eq=False)
class TopKCache:
    """Ranked node prefixes per target, enough to rebuild lists of up to k words."""

    fingerprint: str
    damping: float
    tolerance: float
    max_iterations: int
    k: int
    rankings: Dict[int, Tuple[np.ndarray, np.ndarray]]

    def matches(self, fingerprint: str, config: PprConfig, k: int) -> bool:
        """True when the cache was built from the same graph and settings with k >= `k`."""
        return (
            self.fingerprint == fingerprint
            and self.damping == config.damping
            and self.tolerance == config.tolerance
            and self.max_iterations == config.max_iterations
            and self.k >= k
        )


def save_topk_cache(path: Union[str, Path], cache: TopKCache) -> None:
    """Write the cache: fixed header, then one record per target node."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("wb") as fh:
        fh.write(
            _HEADER.pack(
                CACHE_MAGIC,
                CACHE_VERSION,
                bytes.fromhex(cache.fingerprint),
                cache.damping,
                cache.tolerance,
                cache.max_iterations,
                cache.k,
                len(cache.rankings),
            )
        )
        for node in sorted(cache.rankings):
            indices, scores = cache.rankings[node]
            fh.write(_RECORD.pack(node, indices.shape[0]))
            fh.write(np.asarray(indices, dtype="<u4").tobytes())
            fh.write(np.asarray(scores, dtype="<f8").tobytes())
    tmp.replace(path)
    logger.info(f"Wrote PPR cache with {len(cache.rankings)} rankings to {path}")


def load_topk_cache(path: Union[str, Path]) -> TopKCache:
    """Read a cache written by save_topk_cache."""
    path = Path(path)
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        raise FormatError(f"{path}: too short for a PPR cache header")
    magic, version, digest, damping, tolerance, max_iterations, k, count = _HEADER.unpack_from(data)
    if magic != CACHE_MAGIC or version != CACHE_VERSION:
        raise FormatError(f"{path}: not a version {CACHE_VERSION} PPR cache")
    rankings: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}
    cursor = _HEADER.size
    for _ in range(count):
        if cursor + _RECORD.size > len(data):
            raise FormatError(f"{path}: truncated at byte {cursor}")
        node, n = _RECORD.unpack_from(data, cursor)
        cursor += _RECORD.size
        end = cursor + n * 12
        if end > len(data):
            raise FormatError(f"{path}: truncated at byte {cursor}")
        indices = np.frombuffer(data, dtype="<u4", count=n, offset=cursor).astype(np.int64)
        scores = np.frombuffer(data, dtype="<f8", count=n, offset=cursor + 4 * n).copy()
        rankings[node] = (indices, scores)
        cursor = end
    return TopKCache(digest.hex(), damping, tolerance, max_iterations, k, rankings)
