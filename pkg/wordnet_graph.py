# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""WordNet 3.0 database reader and the undirected semantic graph over synsets.

The four `data.<pos>` files are parsed into Synset records whose pointers are
resolved to SynsetIds. Adjective satellites are folded into the adjective
part of speech. `build_graph` collapses every retained pointer into one
undirected edge and stores the adjacency in CSR form.

Sense identity is the pair (lemma, synset), rendered as `lemma#pos#offset`;
synsets render as `pos#offset` with an 8-digit offset.
"""

import hashlib
import io
import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import (
    AbstractSet,
    Dict,
    FrozenSet,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np
import scipy.sparse as sp
from joblib import Parallel, delayed
from scipy.sparse.csgraph import connected_components

from errors import (
    ConfigError,
    IntegrityError,
    UnknownSynsetError,
    WordNetLoadError,
    WordNetParseError,
)


logger = logging.getLogger("sensesplit.wordnet")


# ---- Constants ------------------------------------------------------------------


POS_FILES: Tuple[Tuple[str, str], ...] = (
    ("n", "data.noun"),
    ("v", "data.verb"),
    ("a", "data.adj"),
    ("r", "data.adv"),
)

# ss_type / pointer pos -> folded part of speech
_POS_FOLD: Dict[str, str] = {"n": "n", "v": "v", "a": "a", "s": "a", "r": "r"}

ANTONYM = "!"

# Pointer symbols WordNet only ever stores between whole synsets.
SYNSET_RELATIONS: FrozenSet[str] = frozenset(
    {
        "@", "@i", "~", "~i",
        "#m", "#s", "#p", "%m", "%s", "%p",
        "=", "*", ">", "&", "$",
    }
)

# Pointer symbols that connect individual lemmas.
LEXICAL_RELATIONS: FrozenSet[str] = frozenset({"!", "+", "\\", "<", "^"})

_ADJ_MARKER = re.compile(r"\((?:a|p|ip)\)$")


# ---- Identifiers ----------------------------------------------------------------


class SynsetId(NamedTuple):
    """A synset address: folded part of speech plus data-file byte offset."""

    pos: str
    offset: int

    def __str__(self) -> str:
        return synset_key(self)


def synset_key(sid: SynsetId) -> str:
    """Render a synset id as `pos#offset`."""
    return f"{sid.pos}#{sid.offset:08d}"


def sense_key(lemma: str, sid: SynsetId) -> str:
    """Render a word sense as `lemma#pos#offset`."""
    return f"{lemma}#{sid.pos}#{sid.offset:08d}"


def parse_synset_key(text: str) -> SynsetId:
    """Parse `pos#offset` (or `pos offset`) back into a SynsetId."""
    parts = re.split(r"[#\s]+", text.strip())
    if len(parts) != 2 or parts[0] not in _POS_FOLD or not parts[1].isdigit():
        raise ConfigError(f"not a synset id: {text!r} (expected pos#offset)")
    return SynsetId(_POS_FOLD[parts[0]], int(parts[1]))


def split_sense_key(key: str) -> Tuple[str, SynsetId]:
    """Split `lemma#pos#offset` into its lemma and SynsetId."""
    try:
        lemma, pos, offset = key.rsplit("#", 2)
    except ValueError:
        raise ConfigError(f"not a sense key: {key!r} (expected lemma#pos#offset)")
    return lemma, parse_synset_key(f"{pos}#{offset}")


def normalize_word(word: str) -> str:
    """Index form of a word: spaces joined with underscore, lowercased."""
    return "_".join(word.strip().split()).lower()


# ---- Records --------------------------------------------------------------------


@dataclass(frozen=True)
class Synset:
    """One WordNet concept with its lemmas and resolved pointers."""

    id: SynsetId
    lemmas: Tuple[str, ...]
    relation_targets: Tuple[Tuple[str, SynsetId], ...] = ()
    antonym_targets: FrozenSet[SynsetId] = frozenset()
    gloss: str = ""

    def __post_init__(self) -> None:
        if not self.lemmas:
            raise IntegrityError(f"synset {self.id} has no lemmas")
        if len(set(self.lemmas)) != len(self.lemmas):
            raise IntegrityError(f"synset {self.id} repeats a lemma")
        if any(target == self.id for _, target in self.relation_targets):
            raise IntegrityError(f"synset {self.id} points to itself")


class _RawSynset(NamedTuple):
    id: SynsetId
    lemmas: Tuple[str, ...]
    pointers: Tuple[Tuple[str, SynsetId, int, int], ...]
    gloss: str
    byte_offset: int


# ---- Parsing --------------------------------------------------------------------


def _clean_lemma(word: str) -> str:
    """Strip the adjective position marker WordNet appends to some lemmas."""
    return _ADJ_MARKER.sub("", word)


def _parse_line(line: str, pos: str, byte_offset: int, path: Path) -> _RawSynset:
    """Parse one synset line of a data file."""
    head, sep, gloss = line.partition(" | ")
    if not sep:
        head, gloss = line.rstrip(), ""
    tokens = head.split()
    try:
        offset = int(tokens[0])
        ss_type = tokens[2]
        w_cnt = int(tokens[3], 16)
        lemmas: List[str] = []
        cursor = 4
        for _ in range(w_cnt):
            word = _clean_lemma(tokens[cursor])
            int(tokens[cursor + 1], 16)
            if word not in lemmas:
                lemmas.append(word)
            cursor += 2
        p_cnt = int(tokens[cursor])
        cursor += 1
        pointers = []
        for _ in range(p_cnt):
            symbol, target_offset, target_pos, source_target = tokens[cursor : cursor + 4]
            if target_pos not in _POS_FOLD or len(source_target) != 4:
                raise ValueError(f"bad pointer {tokens[cursor:cursor + 4]}")
            pointers.append(
                (
                    symbol,
                    SynsetId(_POS_FOLD[target_pos], int(target_offset)),
                    int(source_target[:2], 16),
                    int(source_target[2:], 16),
                )
            )
            cursor += 4
    except (IndexError, ValueError) as exc:
        raise WordNetParseError(path, byte_offset, f"malformed synset line ({exc})")

    if offset != byte_offset:
        raise WordNetParseError(path, byte_offset, f"offset field {offset:08d} does not match")
    if _POS_FOLD.get(ss_type) != pos:
        raise WordNetParseError(path, byte_offset, f"ss_type {ss_type!r} in {pos} file")
    if not lemmas:
        raise WordNetParseError(path, byte_offset, "synset without words")
    # Verb frames are the only tokens allowed between pointers and the gloss.
    if cursor != len(tokens) and pos != "v":
        raise WordNetParseError(path, byte_offset, "trailing tokens before gloss")
    return _RawSynset(
        SynsetId(pos, offset), tuple(lemmas), tuple(pointers), gloss.strip(), byte_offset
    )


def _read_data_file(path: Path, pos: str) -> List[_RawSynset]:
    """Read every synset line of one `data.<pos>` file."""
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise WordNetLoadError(f"cannot read WordNet file {path}: {exc}")

    records: List[_RawSynset] = []
    byte_offset = 0
    for raw in io.BytesIO(data):
        line_offset = byte_offset
        byte_offset += len(raw)
        if raw.startswith(b"  ") or not raw.strip():
            continue
        try:
            line = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise WordNetParseError(path, line_offset, "line is not valid UTF-8")
        records.append(_parse_line(line, pos, line_offset, path))
    logger.info(f"Parsed {len(records)} synsets from {path.name}")
    return records


def parse_wordnet(data_dir: Union[str, Path], n_jobs: int = 1) -> List[Synset]:
    """Load the four WordNet data files and resolve every pointer.

    Synsets come back in file order: nouns, verbs, adjectives, adverbs.
    """
    data_dir = Path(data_dir)
    paths = [(pos, data_dir / name) for pos, name in POS_FILES]
    for _, path in paths:
        if not path.is_file():
            raise WordNetLoadError(f"missing WordNet file: {path}")

    chunks = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_read_data_file)(path, pos) for pos, path in paths
    )
    raw_synsets = [record for chunk in chunks for record in chunk]

    known = {record.id for record in raw_synsets}
    if len(known) != len(raw_synsets):
        raise IntegrityError("duplicate (pos, offset) pair across data files")

    synsets: List[Synset] = []
    self_loops = 0
    for record in raw_synsets:
        targets: List[Tuple[str, SynsetId]] = []
        antonyms = set()
        for symbol, target, _source, _target in record.pointers:
            if target not in known:
                raise IntegrityError(
                    f"{synset_key(record.id)} points to missing synset {synset_key(target)} "
                    f"(byte {record.byte_offset})"
                )
            if target == record.id:
                self_loops += 1
                continue
            targets.append((symbol, target))
            if symbol == ANTONYM:
                antonyms.add(target)
        synsets.append(
            Synset(record.id, record.lemmas, tuple(targets), frozenset(antonyms), record.gloss)
        )
    if self_loops:
        logger.debug(f"Dropped {self_loops} pointers that target their own synset")
    logger.info(f"Loaded {len(synsets)} synsets from {data_dir}")
    return synsets


# ---- Graph ----------------------------------------------------------------------


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class SemanticGraph:
    """Immutable undirected graph over synsets, stored as CSR neighbor lists."""

    def __init__(self, synsets: Sequence[Synset], indptr: np.ndarray, indices: np.ndarray) -> None:
        self._synsets: Tuple[Synset, ...] = tuple(synsets)
        self._ids: Tuple[SynsetId, ...] = tuple(s.id for s in self._synsets)
        self._index: Dict[SynsetId, int] = {sid: i for i, sid in enumerate(self._ids)}
        self.indptr = _readonly(np.asarray(indptr, dtype=np.int64))
        self.indices = _readonly(np.asarray(indices, dtype=np.int32))
        self.degrees = _readonly(np.diff(self.indptr).astype(np.int64))
        grouped: Dict[str, List[SynsetId]] = {}
        for synset in self._synsets:
            for lemma in synset.lemmas:
                bucket = grouped.setdefault(normalize_word(lemma), [])
                if synset.id not in bucket:
                    bucket.append(synset.id)
        self._word_index: Dict[str, Tuple[SynsetId, ...]] = {
            word: tuple(ids) for word, ids in grouped.items()
        }
        self.fingerprint: str = self._compute_fingerprint()

    # -- structure --

    @property
    def node_count(self) -> int:
        return len(self._ids)

    @property
    def edge_count(self) -> int:
        return int(self.indices.shape[0] // 2)

    @property
    def ids(self) -> Tuple[SynsetId, ...]:
        return self._ids

    @property
    def synsets(self) -> Tuple[Synset, ...]:
        return self._synsets

    def index_of(self, sid: SynsetId) -> int:
        """Dense node index of a synset."""
        try:
            return self._index[sid]
        except KeyError:
            raise UnknownSynsetError(f"unknown synset {synset_key(sid)}") from None

    def id_at(self, index: int) -> SynsetId:
        return self._ids[index]

    def synset(self, sid: SynsetId) -> Synset:
        return self._synsets[self.index_of(sid)]

    def neighbors(self, index: int) -> np.ndarray:
        return self.indices[self.indptr[index] : self.indptr[index + 1]]

    def adjacency(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency matrix."""
        data = np.ones(self.indices.shape[0], dtype=np.float64)
        m = self.node_count
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(m, m))

    def synsets_for_word(self, word: str) -> Tuple[SynsetId, ...]:
        """Synsets containing the word as a lemma, in graph order."""
        return self._word_index.get(normalize_word(word), ())

    def __contains__(self, sid: object) -> bool:
        return sid in self._index

    def __len__(self) -> int:
        return self.node_count

    def _compute_fingerprint(self) -> str:
        digest = hashlib.sha256()
        for synset in self._synsets:
            antonyms = ",".join(sorted(synset_key(t) for t in synset.antonym_targets))
            line = f"{synset_key(synset.id)}\t{' '.join(synset.lemmas)}\t{antonyms}\n"
            digest.update(line.encode("utf-8"))
        digest.update(self.indptr.tobytes())
        digest.update(self.indices.tobytes())
        return digest.hexdigest()


def build_graph(
    synsets: Sequence[Synset], relation_filter: Optional[AbstractSet[str]] = None
) -> SemanticGraph:
    """Collapse retained pointers into an undirected, loop-free graph.

    `relation_filter=None` keeps every pointer type.
    """
    index = {s.id: i for i, s in enumerate(synsets)}
    rows: List[int] = []
    cols: List[int] = []
    for i, synset in enumerate(synsets):
        for symbol, target in synset.relation_targets:
            if relation_filter is not None and symbol not in relation_filter:
                continue
            j = index.get(target)
            if j is None:
                raise IntegrityError(
                    f"{synset_key(synset.id)} points outside the synset list: {synset_key(target)}"
                )
            if j != i:
                rows.append(i)
                cols.append(j)

    m = len(synsets)
    both_rows = np.asarray(rows + cols, dtype=np.int64)
    both_cols = np.asarray(cols + rows, dtype=np.int64)
    data = np.ones(both_rows.shape[0], dtype=np.int32)
    adjacency = sp.coo_matrix((data, (both_rows, both_cols)), shape=(m, m)).tocsr()
    adjacency.sum_duplicates()
    adjacency.sort_indices()
    graph = SemanticGraph(synsets, adjacency.indptr, adjacency.indices)
    isolated = int(np.count_nonzero(graph.degrees == 0))
    logger.info(
        f"Built graph: {graph.node_count} nodes, {graph.edge_count} edges "
        f"from {len(rows)} pointers, {isolated} isolated"
    )
    return graph


def largest_component_fraction(graph: SemanticGraph) -> float:
    """Share of nodes inside the largest connected component."""
    if graph.node_count == 0:
        return 0.0
    _, labels = connected_components(graph.adjacency(), directed=False)
    return float(np.bincount(labels).max() / graph.node_count)


# ---- Lookups --------------------------------------------------------------------


def lemmas_of(graph: SemanticGraph, sid: SynsetId) -> List[str]:
    """Lemmas of a synset in file order (the mapping mu)."""
    return list(graph.synset(sid).lemmas)


def antonym_linked(graph: SemanticGraph, a: SynsetId, b: SynsetId) -> bool:
    """True iff an antonymy pointer joins the two synsets in either direction."""
    first = graph.synset(a)
    second = graph.synset(b)
    if a == b:
        return False
    return b in first.antonym_targets or a in second.antonym_targets


# ---- Persistence ----------------------------------------------------------------


def _synset_to_json(synset: Synset) -> list:
    return [
        synset_key(synset.id),
        list(synset.lemmas),
        [[symbol, synset_key(target)] for symbol, target in synset.relation_targets],
        sorted(synset_key(t) for t in synset.antonym_targets),
        synset.gloss,
    ]


def _synset_from_json(row: list) -> Synset:
    key, lemmas, relations, antonyms, gloss = row
    return Synset(
        parse_synset_key(key),
        tuple(lemmas),
        tuple((symbol, parse_synset_key(target)) for symbol, target in relations),
        frozenset(parse_synset_key(t) for t in antonyms),
        gloss,
    )


def save_graph(graph: SemanticGraph, path: Union[str, Path]) -> None:
    """Write the graph as a compressed numpy archive (no pickled objects)."""
    path = Path(path)
    table = json.dumps([_synset_to_json(s) for s in graph.synsets], ensure_ascii=False)
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("wb") as fh:
        np.savez_compressed(
            fh,
            indptr=graph.indptr,
            indices=graph.indices,
            table=np.frombuffer(table.encode("utf-8"), dtype=np.uint8),
            fingerprint=np.frombuffer(graph.fingerprint.encode("ascii"), dtype=np.uint8),
        )
    tmp.replace(path)
    logger.info(f"Wrote graph {graph.fingerprint[:12]} to {path}")


def load_graph(path: Union[str, Path]) -> SemanticGraph:
    """Read a graph written by save_graph and verify its fingerprint."""
    path = Path(path)
    if not path.is_file():
        raise WordNetLoadError(f"missing graph file: {path}")
    try:
        with np.load(path, allow_pickle=False) as archive:
            indptr = archive["indptr"]
            indices = archive["indices"]
            table = json.loads(archive["table"].tobytes().decode("utf-8"))
            stored = archive["fingerprint"].tobytes().decode("ascii")
    except (OSError, KeyError, ValueError) as exc:
        raise IntegrityError(f"unreadable graph file {path}: {exc}")
    graph = SemanticGraph([_synset_from_json(row) for row in table], indptr, indices)
    if graph.fingerprint != stored:
        raise IntegrityError(f"graph file {path} fails its fingerprint check")
    return graph

