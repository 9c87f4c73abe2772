# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Word-similarity benchmarks scored against a sense space.

Strategies:
- MaxSim  : cosine of the closest sense pair
- AvgSim  : mean cosine over all sense pairs
- AvgSimC : sense pairs weighted by relevance to each word's context
- S2W     : a sense against a word's original vector
- S2A     : a sense against the centroid of a word's senses
- Word    : plain word-vector cosine, the conflated baseline
"""

import enum
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed
from scipy.stats import pearsonr, rankdata

from deconflator import SenseSpace, synset_vector
from errors import (
    ConfigError,
    DatasetFormatError,
    DegenerateCentroidError,
    DimensionMismatchError,
    ResourceError,
    UncoveredPairError,
    UndefinedCorrelationError,
    UnknownFormatError,
    ZeroVectorError,
)
from vector_store import LookupPolicy, VectorStore, cosine, lookup
from wordnet_graph import SemanticGraph, SynsetId, antonym_linked, split_sense_key


logger = logging.getLogger("sensesplit.eval")

ANTONYM_DIVISOR = 5.0

# Context tokens ignored when averaging a context vector.
STOPWORDS = frozenset(
    """
    a an and are as at be by for from has have he her his i in is it its of on or
    she that the their they this to was were will with you
    """.split()
)


# ---- Types ----------------------------------------------------------------------


class Strategy(enum.Enum):
    MAX_SIM = "MaxSim"
    AVG_SIM = "AvgSim"
    AVG_SIM_C = "AvgSimC"
    S2W = "S2W"
    S2A = "S2A"
    WORD = "Word"

    @classmethod
    def parse(cls, name: str) -> "Strategy":
        for strategy in cls:
            if strategy.value.lower() == name.strip().lower():
                return strategy
        names = ", ".join(s.value for s in cls)
        raise ConfigError(f"unknown strategy {name!r}; expected one of {names}")


@dataclass(frozen=True)
class SimilarityPair:
    left: str
    right: str
    gold: float
    left_context: Optional[Tuple[str, ...]] = None
    right_context: Optional[Tuple[str, ...]] = None
    index: int = 0

    def __post_init__(self) -> None:
        if not self.left or not self.right:
            raise ValueError("similarity pair with an empty word")
        if not math.isfinite(self.gold):
            raise ValueError(f"non-finite gold score {self.gold}")


class Resources:
    """Sense space, word vectors and (optionally) the graph, indexed for scoring."""

    def __init__(
        self,
        senses: SenseSpace,
        store: VectorStore,
        graph: Optional[SemanticGraph] = None,
        policy: LookupPolicy = LookupPolicy(),
    ) -> None:
        if senses.dim != store.dim:
            raise DimensionMismatchError(
                f"sense space dim {senses.dim} differs from word vector dim {store.dim}"
            )
        self.senses = senses
        self.store = store
        self.graph = graph
        self.policy = policy
        self._exact: Dict[str, List[str]] = {}
        self._lower: Dict[str, List[str]] = {}
        for key in senses.sense_keys():
            lemma, _ = split_sense_key(key)
            self._exact.setdefault(lemma, []).append(key)
            self._lower.setdefault(lemma.lower(), []).append(key)

    def sense_keys_of(self, word: str) -> List[str]:
        """Sense keys for a word, or the key itself when given a sense key."""
        if word in self.senses.sense_vectors:
            return [word]
        lemma = "_".join(word.split())
        keys = self._exact.get(lemma)
        if keys is None and self.policy.case_fallback:
            keys = self._lower.get(lemma.lower())
        return list(keys or ())


# ---- Scoring --------------------------------------------------------------------


def senses_of(word: str, resources: Resources) -> List[np.ndarray]:
    """All sense vectors of a word; empty when it has none."""
    return [resources.senses.sense_vectors[key] for key in resources.sense_keys_of(word)]


def _unit_rows(vectors: Sequence[np.ndarray], item: str) -> np.ndarray:
    if not vectors:
        raise UncoveredPairError(item, f"no sense vector for {item!r}")
    rows = np.vstack([np.asarray(v, dtype=np.float64) for v in vectors])
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    if np.any(norms == 0):
        raise UncoveredPairError(item, f"zero sense vector for {item!r}")
    return rows / norms


def _sense_cosines(word1: str, word2: str, resources: Resources) -> np.ndarray:
    first = _unit_rows(senses_of(word1, resources), word1)
    second = _unit_rows(senses_of(word2, resources), word2)
    return np.clip(first @ second.T, -1.0, 1.0)


def max_sim(word1: str, word2: str, resources: Resources) -> float:
    """Cosine of the most similar sense pair."""
    return float(_sense_cosines(word1, word2, resources).max())


def avg_sim(word1: str, word2: str, resources: Resources) -> float:
    """Mean cosine over all sense pairs."""
    return float(_sense_cosines(word1, word2, resources).mean())


def context_vector(
    tokens: Optional[Sequence[str]], store: VectorStore, policy: LookupPolicy = LookupPolicy()
) -> Optional[np.ndarray]:
    """Mean vector of in-vocabulary, non-stopword tokens; None when nothing is usable."""
    found = []
    for token in tokens or ():
        if token.lower() in STOPWORDS:
            continue
        vector = lookup(store, token, policy)
        if vector is not None:
            found.append(np.asarray(vector, dtype=np.float64))
    if not found:
        return None
    mean = np.mean(found, axis=0)
    return mean if np.linalg.norm(mean) > 0 else None


def sense_weights(unit_senses: np.ndarray, context: Optional[np.ndarray]) -> np.ndarray:
    """w(s|c) proportional to exp(cos(s, c)); uniform without a context."""
    n = unit_senses.shape[0]
    if context is None:
        return np.full(n, 1.0 / n)
    scores = np.exp(np.clip(unit_senses @ (context / np.linalg.norm(context)), -1.0, 1.0))
    return scores / scores.sum()


def _avg_sim_c(pair: SimilarityPair, resources: Resources) -> Tuple[float, bool]:
    first = _unit_rows(senses_of(pair.left, resources), pair.left)
    second = _unit_rows(senses_of(pair.right, resources), pair.right)
    c1 = context_vector(pair.left_context, resources.store, resources.policy)
    c2 = context_vector(pair.right_context, resources.store, resources.policy)
    w1 = sense_weights(first, c1)
    w2 = sense_weights(second, c2)
    cosines = np.clip(first @ second.T, -1.0, 1.0)
    return float(w1 @ cosines @ w2), c1 is None or c2 is None


def avg_sim_c(pair: SimilarityPair, resources: Resources) -> float:
    """Context-weighted mean cosine over sense pairs."""
    return _avg_sim_c(pair, resources)[0]


def _word_vector(word: str, resources: Resources) -> np.ndarray:
    vector = lookup(resources.store, word, resources.policy)
    if vector is None:
        raise UncoveredPairError(word, f"no word vector for {word!r}")
    return vector


def _sense_vector(key: str, resources: Resources) -> np.ndarray:
    vector = resources.senses.sense_vectors.get(key)
    if vector is None:
        raise UncoveredPairError(key, f"no sense vector for {key!r}")
    return vector


def _safe_cosine(a: np.ndarray, b: np.ndarray, item: str) -> float:
    try:
        return cosine(a, b)
    except ZeroVectorError as exc:
        raise UncoveredPairError(item, str(exc))


def s2w(sense: str, word: str, resources: Resources) -> float:
    """Cosine of a sense vector against the word's original vector."""
    return _safe_cosine(_sense_vector(sense, resources), _word_vector(word, resources), sense)


def s2a(sense: str, word: str, resources: Resources) -> float:
    """Cosine of a sense vector against the unit centroid of the word's senses."""
    vector = _sense_vector(sense, resources)
    vectors = senses_of(word, resources)
    if not vectors:
        raise UncoveredPairError(word, f"no sense vector for {word!r}")
    try:
        centroid = synset_vector(vectors)
    except ZeroVectorError as exc:
        raise DegenerateCentroidError(word, f"{word!r}: {exc}")
    return _safe_cosine(vector, centroid, sense)


def word_sim(word1: str, word2: str, resources: Resources) -> float:
    """Cosine of the two words' original vectors."""
    return _safe_cosine(_word_vector(word1, resources), _word_vector(word2, resources), word1)


def _synsets_for(graph: SemanticGraph, item: str) -> List[SynsetId]:
    if "#" in item:
        try:
            sid = split_sense_key(item)[1]
        except ConfigError:
            sid = None
        if sid is not None and sid in graph:
            return [sid]
    return list(graph.synsets_for_word(item))


def antonym_adjust(score: float, word1: str, word2: str, graph: SemanticGraph) -> float:
    """Divide a positive score by five when the words have antonymous synsets.

    Either item may be a sense key, which stands for its own synset only.
    """
    if score <= 0.0:
        return score
    first = _synsets_for(graph, word1)
    second = _synsets_for(graph, word2)
    if any(antonym_linked(graph, a, b) for a in first for b in second):
        return score / ANTONYM_DIVISOR
    return score


# ---- Correlation ----------------------------------------------------------------


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Product-moment correlation."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise UndefinedCorrelationError(f"inputs of lengths {x.shape} and {y.shape}")
    if x.shape[0] < 2:
        raise UndefinedCorrelationError("correlation needs at least two points")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise UndefinedCorrelationError("correlation is undefined for a constant input")
    return float(np.clip(pearsonr(x, y)[0], -1.0, 1.0))


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of average ranks."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise UndefinedCorrelationError(f"inputs of lengths {x.shape} and {y.shape}")
    return pearson(rankdata(x, method="average"), rankdata(y, method="average"))


# ---- Datasets -------------------------------------------------------------------


_MEN_SUFFIX = re.compile(r"-[nvja]$")
_TARGET_SPAN = re.compile(r"<b>.*?</b>")


def _fields(line: str) -> List[str]:
    """Split on tab, then semicolon, then comma, then whitespace."""
    for delimiter in ("\t", ";", ","):
        if delimiter in line:
            return [part.strip() for part in line.split(delimiter)]
    return line.split()


def _number(text: str) -> Optional[float]:
    try:
        return float(text)
    except ValueError:
        return None


def _columns(left: int, right: int, score: int, header: bool = False, strip: Optional[re.Pattern] = None):
    """Reader for `word word score` style files with a per-dataset column map."""

    def _read(lines: Iterator[Tuple[int, str]], path: Path) -> Iterator[SimilarityPair]:
        for position, (lineno, line) in enumerate(lines):
            parts = _fields(line)
            if len(parts) <= max(left, right, score):
                raise DatasetFormatError(f"{path}:{lineno}: expected at least {max(left, right, score) + 1} fields")
            gold = _number(parts[score])
            if gold is None:
                if header and position == 0:
                    continue
                raise DatasetFormatError(f"{path}:{lineno}: bad score {parts[score]!r}")
            first, second = parts[left], parts[right]
            if strip is not None:
                first, second = strip.sub("", first), strip.sub("", second)
            yield first, second, gold, None, None

    return _read


def _context(text: str) -> Tuple[str, ...]:
    return tuple(_TARGET_SPAN.sub(" ", text).split())


def _read_scws(lines: Iterator[Tuple[int, str]], path: Path):
    """id, word1, pos1, word2, pos2, context1, context2, mean rating, ratings..."""
    for lineno, line in lines:
        parts = line.split("\t")
        if len(parts) < 8:
            raise DatasetFormatError(f"{path}:{lineno}: expected at least 8 tab-separated fields")
        gold = _number(parts[7])
        if gold is None:
            raise DatasetFormatError(f"{path}:{lineno}: bad score {parts[7]!r}")
        yield parts[1].strip(), parts[3].strip(), gold, _context(parts[5]), _context(parts[6])


def _read_clss(lines: Iterator[Tuple[int, str]], path: Path):
    """sense_key<TAB>word<TAB>score."""
    for lineno, line in lines:
        parts = line.split("\t")
        if len(parts) != 3:
            raise DatasetFormatError(f"{path}:{lineno}: expected 3 tab-separated fields")
        gold = _number(parts[2])
        if gold is None:
            raise DatasetFormatError(f"{path}:{lineno}: bad score {parts[2]!r}")
        try:
            split_sense_key(parts[0].strip())
        except ConfigError as exc:
            raise DatasetFormatError(f"{path}:{lineno}: {exc}")
        yield parts[0].strip(), parts[1].strip(), gold, None, None


DATASET_FORMATS: Dict[str, Callable] = {
    "rg65": _columns(0, 1, 2),
    "yp130": _columns(0, 1, 2),
    "men": _columns(0, 1, 2, strip=_MEN_SUFFIX),
    "simlex999": _columns(0, 1, 3, header=True),
    "ws353": _columns(0, 1, 2, header=True),
    "scws": _read_scws,
    "clss": _read_clss,
}


def load_dataset(path: Union[str, Path], fmt: str) -> List[SimilarityPair]:
    """Parse a benchmark file into indexed SimilarityPairs."""
    path = Path(path)
    reader = DATASET_FORMATS.get(fmt.lower())
    if reader is None:
        raise UnknownFormatError(
            f"unknown dataset format {fmt!r}; expected one of {', '.join(DATASET_FORMATS)}"
        )
    if not path.is_file():
        raise ResourceError(f"missing dataset file: {path}")
    with path.open("r", encoding="utf-8") as fh:
        lines = (
            (lineno, line.rstrip("\r\n"))
            for lineno, line in enumerate(fh, start=1)
            if line.strip() and not line.startswith("#")
        )
        pairs = []
        for left, right, gold, c1, c2 in reader(lines, path):
            try:
                pairs.append(SimilarityPair(left, right, gold, c1, c2, len(pairs)))
            except ValueError as exc:
                raise DatasetFormatError(f"{path}: pair {len(pairs)}: {exc}")
    logger.info(f"Loaded {len(pairs)} pairs from {path} ({fmt})")
    return pairs


# ---- Benchmark ------------------------------------------------------------------


@dataclass
class EvalReport:
    dataset: str
    strategy: Strategy
    pearson: float = float("nan")
    spearman: float = float("nan")
    covered: int = 0
    total: int = 0
    backoff: int = 0
    uniform_fallbacks: int = 0
    adjusted: int = 0
    uncovered: List[Tuple[int, str]] = field(default_factory=list)
    scores: List[Tuple[int, float, float]] = field(default_factory=list)

    def machine_line(self) -> str:
        """`dataset strategy pearson spearman covered total`."""
        return (
            f"{self.dataset} {self.strategy.value} {self.pearson:.6f} "
            f"{self.spearman:.6f} {self.covered} {self.total}"
        )


@dataclass
class _PairResult:
    score: Optional[float] = None
    backoff: bool = False
    uniform: bool = False
    adjusted: bool = False
    reason: str = ""


def _is_sense_key(item: str, resources: Resources) -> bool:
    return item in resources.senses.sense_vectors


def _score(pair: SimilarityPair, strategy: Strategy, resources: Resources) -> Tuple[float, bool]:
    """Score under the strategy; the flag marks a uniform-weight fallback."""
    if strategy is Strategy.MAX_SIM:
        return max_sim(pair.left, pair.right, resources), False
    if strategy is Strategy.AVG_SIM:
        return avg_sim(pair.left, pair.right, resources), False
    if strategy is Strategy.AVG_SIM_C:
        return _avg_sim_c(pair, resources)
    if strategy is Strategy.S2W:
        return s2w(pair.left, pair.right, resources), False
    if strategy is Strategy.S2A:
        return s2a(pair.left, pair.right, resources), False
    return word_sim(pair.left, pair.right, resources), False


def _backoff(pair: SimilarityPair, strategy: Strategy, resources: Resources) -> float:
    if strategy is Strategy.S2A or _is_sense_key(pair.left, resources):
        return s2w(pair.left, pair.right, resources)
    return word_sim(pair.left, pair.right, resources)


def _score_pair(
    pair: SimilarityPair, strategy: Strategy, resources: Resources, adjust: bool
) -> _PairResult:
    result = _PairResult()
    try:
        result.score, result.uniform = _score(pair, strategy, resources)
    except DegenerateCentroidError as exc:
        logger.info(f"Pair {pair.index} uncovered: {exc}")
        result.reason = str(exc)
        return result
    except UncoveredPairError as exc:
        if strategy in (Strategy.S2W, Strategy.WORD):
            result.reason = str(exc)
            return result
        try:
            result.score = _backoff(pair, strategy, resources)
            result.backoff = True
        except UncoveredPairError as fallback:
            result.reason = f"{exc}; {fallback}"
            return result
    if adjust:
        adjusted = antonym_adjust(result.score, pair.left, pair.right, resources.graph)
        result.adjusted = adjusted != result.score
        result.score = adjusted
    return result


def run_benchmark(
    path: Union[str, Path],
    fmt: str,
    strategy: Union[Strategy, str],
    resources: Resources,
    antonym_adjust: bool = False,
    n_jobs: int = 1,
) -> EvalReport:
    """Score every pair, then correlate covered pairs with the gold ratings.

    Pairs without a sense vector back off to word cosine (sense-to-word when
    the left item is a sense key); pairs with no score at all are excluded.
    """
    if isinstance(strategy, str):
        strategy = Strategy.parse(strategy)
    if antonym_adjust and resources.graph is None:
        raise ConfigError("antonym adjustment needs the semantic graph")
    pairs = load_dataset(path, fmt)

    results = Parallel(n_jobs=n_jobs, prefer="threads", return_as="generator")(
        delayed(_score_pair)(pair, strategy, resources, antonym_adjust) for pair in pairs
    )
    report = EvalReport(Path(path).stem, strategy, total=len(pairs))
    for pair, result in zip(pairs, results):
        if result.score is None:
            report.uncovered.append((pair.index, result.reason))
            continue
        report.covered += 1
        report.backoff += result.backoff
        report.uniform_fallbacks += result.uniform
        report.adjusted += result.adjusted
        report.scores.append((pair.index, pair.gold, result.score))

    if report.uncovered:
        logger.warning(f"{len(report.uncovered)} of {report.total} pairs uncovered")
    gold = [g for _, g, _ in report.scores]
    system = [s for _, _, s in report.scores]
    report.pearson = pearson(gold, system)
    report.spearman = spearman(gold, system)
    logger.info(
        f"{report.dataset} {strategy.value}: r={report.pearson:.4f} rho={report.spearman:.4f} "
        f"covered {report.covered}/{report.total}, backoff {report.backoff}"
    )
    return report


def format_report(report: EvalReport) -> str:
    """Human-readable summary table."""
    rows = [
        ("Dataset", report.dataset),
        ("Strategy", report.strategy.value),
        ("Pearson (r x 100)", f"{100 * report.pearson:.1f}"),
        ("Spearman (rho x 100)", f"{100 * report.spearman:.1f}"),
        ("Covered pairs", f"{report.covered}/{report.total}"),
        ("Word-vector backoff", str(report.backoff)),
    ]
    if report.strategy is Strategy.AVG_SIM_C:
        rows.append(("Uniform-weight fallbacks", str(report.uniform_fallbacks)))
    if report.adjusted:
        rows.append(("Antonym-adjusted pairs", str(report.adjusted)))
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name.ljust(width)}  {value}" for name, value in rows)
