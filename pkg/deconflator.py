# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Sense vectors from word vectors and biasing lists, in closed form.

For a sense s of synset y with biasing list B (truncated to k):

    v* = (alpha * v_s + sum_j delta_j * v_bj) / (alpha + sum_j delta_j)
    delta_j = exp(-lambda * rank_j) / |B|

which is the exact minimizer of

    alpha * ||v - v_s||^2 + sum_j delta_j * ||v - v_bj||^2

Synset vectors are the normalized sum of the normalized sense vectors.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from bias_extractor import DEFAULT_K, BiasList
from errors import (
    BatchSummary,
    ConfigError,
    DimensionMismatchError,
    FingerprintMismatchError,
    FormatError,
    NoSensesComputedError,
    UncomputableSenseError,
    ZeroVectorError,
)
from vector_store import LookupPolicy, VectorStore, load_word2vec, lookup, save_word2vec
from wordnet_graph import (
    SemanticGraph,
    Synset,
    SynsetId,
    parse_synset_key,
    sense_key,
    split_sense_key,
    synset_key,
)


logger = logging.getLogger("sensesplit.train")


@dataclass(frozen=True)
class DeconfConfig:
    """alpha weighs the lemma's own vector, lam is the rank decay, k the list cut."""

    alpha: float = 1.0
    lam: float = 0.2
    k: int = DEFAULT_K

    def __post_init__(self) -> None:
        if not self.alpha >= 0.0:
            raise ConfigError(f"alpha must be non-negative, got {self.alpha}")
        if not self.lam > 0.0:
            raise ConfigError(f"lambda must be positive, got {self.lam}")
        if self.k < 1:
            raise ConfigError(f"k must be at least 1, got {self.k}")


def decay_weight(rank: int, list_len: int, lam: float) -> float:
    """delta = exp(-lam * rank) / list_len."""
    if not 0 <= rank < list_len:
        raise ConfigError(f"rank {rank} outside a list of length {list_len}")
    return math.exp(-lam * rank) / list_len


# ---- Single sense ---------------------------------------------------------------


def weighted_bias_terms(
    bias_list: BiasList,
    store: VectorStore,
    config: DeconfConfig,
    policy: LookupPolicy = LookupPolicy(),
    own_lemma: Optional[str] = None,
) -> List[Tuple[np.ndarray, float]]:
    """(vector, delta) for every in-vocabulary entry of the truncated list."""
    entries = bias_list.entries[: config.k]
    terms = []
    for entry in entries:
        if own_lemma is not None and entry.word == own_lemma:
            continue
        vector = lookup(store, entry.word, policy)
        if vector is None:
            continue
        terms.append((vector, decay_weight(entry.rank, len(entries), config.lam)))
    return terms


def deconflate_sense(
    lemma_vector: Optional[np.ndarray],
    bias_list: BiasList,
    store: VectorStore,
    config: DeconfConfig = DeconfConfig(),
    policy: LookupPolicy = LookupPolicy(),
    own_lemma: Optional[str] = None,
) -> np.ndarray:
    """Closed-form sense vector; OOV biasing words drop out of both sums.

    With no lemma vector the alpha term is dropped and the result is the
    delta-weighted mean of the biasing words that were found.
    """
    numerator = np.zeros(store.dim, dtype=np.float64)
    denominator = 0.0
    if lemma_vector is not None:
        lemma_vector = np.asarray(lemma_vector, dtype=np.float64)
        if lemma_vector.shape != (store.dim,):
            raise DimensionMismatchError(
                f"lemma vector has shape {lemma_vector.shape}, store dim is {store.dim}"
            )
        numerator += config.alpha * lemma_vector
        denominator += config.alpha
    for vector, delta in weighted_bias_terms(bias_list, store, config, policy, own_lemma):
        numerator += delta * np.asarray(vector, dtype=np.float64)
        denominator += delta
    if denominator == 0.0:
        raise UncomputableSenseError(
            f"no vector for {own_lemma or 'the lemma'} of {synset_key(bias_list.target)} "
            f"and none of its biasing words"
        )
    return numerator / denominator


def objective_value(
    candidate: np.ndarray,
    lemma_vector: Optional[np.ndarray],
    weighted_bias: Sequence[Tuple[np.ndarray, float]],
    alpha: float,
) -> float:
    """alpha * ||v - v_s||^2 + sum delta * ||v - v_b||^2 (squared Euclidean)."""
    candidate = np.asarray(candidate, dtype=np.float64)

    def _sq(other: np.ndarray) -> float:
        other = np.asarray(other, dtype=np.float64)
        if other.shape != candidate.shape:
            raise DimensionMismatchError(f"shapes {candidate.shape} and {other.shape} differ")
        diff = candidate - other
        return float(diff.dot(diff))

    total = alpha * _sq(lemma_vector) if lemma_vector is not None else 0.0
    for vector, delta in weighted_bias:
        total += delta * _sq(vector)
    return total


def synset_vector(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Unit-length centroid of the unit-length inputs."""
    if len(vectors) == 0:
        raise ZeroVectorError("a synset vector needs at least one sense vector")
    stacked = np.vstack([np.asarray(v, dtype=np.float64) for v in vectors])
    norms = np.linalg.norm(stacked, axis=1)
    if np.any(norms == 0):
        raise ZeroVectorError("zero sense vector in synset centroid")
    total = (stacked / norms[:, None]).sum(axis=0)
    norm = np.linalg.norm(total)
    if norm < 1e-12:
        raise ZeroVectorError("sense vectors cancel out; centroid has zero norm")
    return total / norm


# ---- Optimality check -----------------------------------------------------------


OPTIMALITY_SAMPLE = 100
OPTIMALITY_TOLERANCE = 1e-5
_FD_STEP = 1e-4


def _objective_rows(
    points: np.ndarray,
    lemma_vector: Optional[np.ndarray],
    weighted_bias: Sequence[Tuple[np.ndarray, float]],
    alpha: float,
) -> np.ndarray:
    """objective_value for every row of `points` at once."""
    total = np.zeros(points.shape[0], dtype=np.float64)
    if lemma_vector is not None:
        diff = points - np.asarray(lemma_vector, dtype=np.float64)
        total += alpha * np.einsum("ij,ij->i", diff, diff)
    for vector, delta in weighted_bias:
        diff = points - np.asarray(vector, dtype=np.float64)
        total += delta * np.einsum("ij,ij->i", diff, diff)
    return total


def optimality_residual(
    candidate: np.ndarray,
    lemma_vector: Optional[np.ndarray],
    weighted_bias: Sequence[Tuple[np.ndarray, float]],
    alpha: float,
) -> float:
    """Norm of the central-difference gradient at `candidate`, relative to the term gradients."""
    candidate = np.asarray(candidate, dtype=np.float64)
    step = _FD_STEP * np.eye(candidate.shape[0])
    gradient = (
        _objective_rows(candidate + step, lemma_vector, weighted_bias, alpha)
        - _objective_rows(candidate - step, lemma_vector, weighted_bias, alpha)
    ) / (2.0 * _FD_STEP)
    scale = 0.0
    if lemma_vector is not None:
        scale += alpha * np.linalg.norm(candidate - np.asarray(lemma_vector, dtype=np.float64))
    for vector, delta in weighted_bias:
        scale += delta * np.linalg.norm(candidate - np.asarray(vector, dtype=np.float64))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(gradient) / (2.0 * scale))


def spot_check_optimality(
    sense_vectors: Mapping[str, np.ndarray],
    bias_lists: Mapping[SynsetId, BiasList],
    store: VectorStore,
    config: DeconfConfig = DeconfConfig(),
    policy: LookupPolicy = LookupPolicy(),
    sample_size: int = OPTIMALITY_SAMPLE,
    seed: int = 0,
) -> List[Tuple[str, float]]:
    """Re-derive a random sample of senses and return those that are not minimizers."""
    keys = sorted(sense_vectors)
    if len(keys) > sample_size:
        picked = np.random.default_rng(seed).choice(len(keys), sample_size, replace=False)
        keys = [keys[i] for i in sorted(picked)]

    failures: List[Tuple[str, float]] = []
    for key in keys:
        lemma, sid = split_sense_key(key)
        bias_list = bias_lists.get(sid) or BiasList(sid, ())
        lemma_vector = lookup(store, lemma, policy)
        terms = weighted_bias_terms(bias_list, store, config, policy, own_lemma=lemma)
        residual = optimality_residual(sense_vectors[key], lemma_vector, terms, config.alpha)
        if not residual < OPTIMALITY_TOLERANCE:
            failures.append((key, residual))

    if failures:
        key, residual = max(failures, key=lambda item: item[1])
        logger.warning(
            f"{len(failures)} of {len(keys)} sampled senses are not at the objective minimum "
            f"(worst {key}, relative gradient {residual:.3e})"
        )
    else:
        logger.debug(f"Optimality spot check passed on {len(keys)} senses")
    return failures


# ---- Whole inventory ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SenseSpace:
    """Sense vectors by `lemma#pos#offset` and unit synset vectors by SynsetId."""

    dim: int
    sense_vectors: Dict[str, np.ndarray]
    synset_vectors: Dict[SynsetId, np.ndarray] = field(default_factory=dict)

    @cached_property
    def store(self) -> VectorStore:
        """Sense vectors as a searchable store."""
        return VectorStore.from_mapping(self.sense_vectors, self.dim)

    def sense_keys(self) -> List[str]:
        """Keys in export order: by synset, then lemma."""
        return sorted(self.sense_vectors, key=lambda key: _sense_order(key))


def _sense_order(key: str) -> Tuple[SynsetId, str]:
    lemma, sid = split_sense_key(key)
    return sid, lemma


@dataclass
class CoverageReport:
    """Which senses and synsets got a vector, and why the rest did not."""

    total_senses: int = 0
    computed_senses: int = 0
    total_synsets: int = 0
    computed_synsets: int = 0
    uncomputable: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def sense_coverage(self) -> float:
        return self.computed_senses / self.total_senses if self.total_senses else 0.0

    def write(self, path: Union[str, Path]) -> None:
        """Tab-separated `key<TAB>reason` lines, sorted by key."""
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        with tmp.open("w", encoding="utf-8", newline="\n") as fh:
            for key, reason in sorted(self.uncomputable):
                fh.write(f"{key}\t{reason}\n")
        tmp.replace(path)


def _train_synset(
    synset: Synset,
    bias_list: BiasList,
    store: VectorStore,
    config: DeconfConfig,
    policy: LookupPolicy,
):
    senses: List[Tuple[str, Optional[np.ndarray], Optional[str]]] = []
    for lemma in synset.lemmas:
        key = sense_key(lemma, synset.id)
        try:
            vector = deconflate_sense(
                lookup(store, lemma, policy), bias_list, store, config, policy, own_lemma=lemma
            )
            senses.append((key, vector, None))
        except (UncomputableSenseError, DimensionMismatchError) as exc:
            senses.append((key, None, str(exc)))
    computed = [vector for _, vector, _ in senses if vector is not None]
    if not computed:
        return senses, None, "no computable sense"
    try:
        return senses, synset_vector(computed), None
    except ZeroVectorError as exc:
        return senses, None, str(exc)


def train_all(
    graph: SemanticGraph,
    bias_lists: Mapping[SynsetId, BiasList],
    store: VectorStore,
    config: DeconfConfig = DeconfConfig(),
    policy: LookupPolicy = LookupPolicy(),
    n_jobs: int = 1,
    bias_fingerprint: Optional[str] = None,
) -> Tuple[SenseSpace, CoverageReport]:
    """A vector for every computable (lemma, synset) pair of the graph.

    Synsets without a bias list (isolated ones) are trained from their
    lemma vectors alone.
    """
    if bias_fingerprint is not None and bias_fingerprint != graph.fingerprint:
        raise FingerprintMismatchError(graph.fingerprint, bias_fingerprint, "bias lists")

    synsets = graph.synsets
    results = Parallel(n_jobs=n_jobs, prefer="threads", return_as="generator")(
        delayed(_train_synset)(
            synset, bias_lists.get(synset.id) or BiasList(synset.id, ()), store, config, policy
        )
        for synset in synsets
    )

    report = CoverageReport(total_synsets=len(synsets))
    summary = BatchSummary("sense vectors")
    sense_vectors: Dict[str, np.ndarray] = {}
    synset_vectors: Dict[SynsetId, np.ndarray] = {}
    for synset, (senses, centroid, reason) in zip(synsets, results):
        for key, vector, error in senses:
            report.total_senses += 1
            if vector is None:
                report.uncomputable.append((key, error))
                summary.record_failure(key, error)
            else:
                sense_vectors[key] = vector
                summary.record_success()
        if centroid is None:
            report.uncomputable.append((synset_key(synset.id), reason))
        else:
            synset_vectors[synset.id] = centroid
    report.computed_senses = len(sense_vectors)
    report.computed_synsets = len(synset_vectors)
    summary.log(logger)

    if not sense_vectors:
        raise NoSensesComputedError("no sense vector could be computed")
    spot_check_optimality(sense_vectors, bias_lists, store, config, policy)
    logger.info(
        f"Trained {report.computed_senses}/{report.total_senses} senses "
        f"({report.sense_coverage:.2%}) and {report.computed_synsets}/{report.total_synsets} synsets"
    )
    return SenseSpace(store.dim, sense_vectors, synset_vectors), report


# ---- Export ---------------------------------------------------------------------


def write_sense_space(
    space: SenseSpace,
    senses_path: Union[str, Path],
    synsets_path: Optional[Union[str, Path]] = None,
) -> None:
    """word2vec text exports, ordered by synset id so reruns are byte-identical."""
    keys = space.sense_keys()
    matrix = (
        np.vstack([space.sense_vectors[k] for k in keys]) if keys else np.zeros((0, space.dim))
    )
    save_word2vec(keys, matrix, senses_path, fmt="text")
    if synsets_path is not None:
        ids = sorted(space.synset_vectors)
        matrix = (
            np.vstack([space.synset_vectors[s] for s in ids]) if ids else np.zeros((0, space.dim))
        )
        save_word2vec([synset_key(s) for s in ids], matrix, synsets_path, fmt="text")


def load_sense_space(
    senses_path: Union[str, Path], synsets_path: Optional[Union[str, Path]] = None
) -> SenseSpace:
    """Read exports written by write_sense_space."""
    senses = load_word2vec(senses_path, fmt="text")
    for key in senses.keys:
        try:
            split_sense_key(key)
        except ConfigError as exc:
            raise FormatError(f"{senses_path}: {exc}")
    sense_vectors = {key: senses.matrix[i].astype(np.float64) for i, key in enumerate(senses.keys)}
    synset_vectors: Dict[SynsetId, np.ndarray] = {}
    if synsets_path is not None:
        synsets = load_word2vec(synsets_path, fmt="text")
        if synsets.dim != senses.dim:
            raise DimensionMismatchError(
                f"sense dim {senses.dim} and synset dim {synsets.dim} differ"
            )
        try:
            synset_vectors = {
                parse_synset_key(key): synsets.matrix[i].astype(np.float64)
                for i, key in enumerate(synsets.keys)
            }
        except ConfigError as exc:
            raise FormatError(f"{synsets_path}: {exc}")
    return SenseSpace(senses.dim, sense_vectors, synset_vectors)
