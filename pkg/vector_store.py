# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Pre-trained word vectors: word2vec binary/text I/O, lookup and cosine search.

Binary layout: ASCII header `"<count> <dim>\\n"`, then per entry the word
bytes, one space, `dim` little-endian float32 values and an optional newline.
Text layout: optional header line, then `word v1 ... vd` per line.
Keys are kept byte-exact (undecodable bytes survive via surrogateescape).
"""

import logging
import mmap
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from errors import (
    ConfigError,
    DimensionMismatchError,
    ResourceError,
    VectorFormatError,
    ZeroVectorError,
)


logger = logging.getLogger("sensesplit.vectors")

FORMATS = ("binary", "text")


# ---- Types ----------------------------------------------------------------------


@dataclass(frozen=True)
class LookupPolicy:
    """How lemmas are matched against the vocabulary."""

    multiword_joiner: str = "_"
    case_fallback: bool = True

    def __post_init__(self) -> None:
        if len(self.multiword_joiner) != 1:
            raise ConfigError(f"joiner must be one character, got {self.multiword_joiner!r}")


class VectorStore:
    """Read-only vocabulary of fixed-dimension vectors."""

    def __init__(self, keys: Sequence[str], matrix: np.ndarray) -> None:
        matrix = np.asarray(matrix)
        if matrix.ndim != 2:
            raise DimensionMismatchError(f"expected a 2-D matrix, got shape {matrix.shape}")
        if matrix.shape[0] != len(keys):
            raise DimensionMismatchError(f"{len(keys)} keys for {matrix.shape[0]} vectors")
        self.keys: Tuple[str, ...] = tuple(keys)
        self._index: Dict[str, int] = {key: i for i, key in enumerate(self.keys)}
        if len(self._index) != len(self.keys):
            raise ConfigError("vocabulary keys are not unique")
        matrix.setflags(write=False)
        self.matrix = matrix

    @classmethod
    def from_mapping(cls, vectors: Mapping[str, np.ndarray], dim: Optional[int] = None) -> "VectorStore":
        keys = list(vectors)
        if not keys:
            return cls([], np.zeros((0, dim or 0), dtype=np.float64))
        return cls(keys, np.vstack([np.asarray(vectors[k], dtype=np.float64) for k in keys]))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    def __len__(self) -> int:
        return len(self.keys)

    def __contains__(self, key: object) -> bool:
        return key in self._index

    def index_of(self, key: str) -> int:
        return self._index[key]

    def get(self, key: str) -> Optional[np.ndarray]:
        i = self._index.get(key)
        return None if i is None else self.matrix[i]

    def __getitem__(self, key: str) -> np.ndarray:
        return self.matrix[self._index[key]]

    @cached_property
    def unit_matrix(self) -> np.ndarray:
        """Rows scaled to unit length; zero rows stay zero."""
        norms = np.linalg.norm(self.matrix, axis=1, keepdims=True)
        unit = np.divide(self.matrix, norms, out=np.zeros(self.matrix.shape, dtype=self.matrix.dtype), where=norms > 0)
        unit.setflags(write=False)
        return unit

    def concat(self, other: "VectorStore") -> "VectorStore":
        """A store holding both vocabularies; keys must not overlap."""
        if other.dim != self.dim:
            raise DimensionMismatchError(f"cannot join dim {self.dim} with dim {other.dim}")
        dtype = np.result_type(self.matrix.dtype, other.matrix.dtype)
        return VectorStore(
            self.keys + other.keys,
            np.vstack([self.matrix.astype(dtype), other.matrix.astype(dtype)]),
        )


# ---- Loading --------------------------------------------------------------------


def _parse_header(line: bytes, path: Path) -> Tuple[int, int]:
    try:
        count, dim = (int(x) for x in line.split())
    except ValueError:
        raise VectorFormatError(path, 0, f"bad header {line[:40]!r}")
    if count < 0 or dim < 1:
        raise VectorFormatError(path, 0, f"bad header {line[:40]!r}")
    return count, dim


def _decode(word: bytes) -> str:
    return word.decode("utf-8", errors="surrogateescape")


def _check_finite(matrix: np.ndarray, offsets: Sequence[int], path: Path) -> None:
    bad = np.flatnonzero(~np.isfinite(matrix).all(axis=1))
    if bad.size:
        raise VectorFormatError(path, offsets[int(bad[0])], "non-finite value in vector")


def _load_binary(path: Path, limit: Optional[int]) -> VectorStore:
    with path.open("rb") as fh:
        if path.stat().st_size == 0:
            raise VectorFormatError(path, 0, "empty file")
        with mmap.mmap(fh.fileno(), 0, access=mmap.ACCESS_READ) as buf:
            size = len(buf)
            header_end = buf.find(b"\n")
            if header_end < 0:
                raise VectorFormatError(path, 0, "missing header line")
            count, dim = _parse_header(buf[:header_end], path)
            n = count if limit is None else min(count, limit)
            width = 4 * dim
            keys: List[str] = []
            offsets: List[int] = []
            seen = set()
            matrix = np.empty((n, dim), dtype=np.float32)
            pos = header_end + 1
            for row in range(n):
                while pos < size and buf[pos : pos + 1] in (b"\n", b"\r"):
                    pos += 1
                offsets.append(pos)
                end = buf.find(b" ", pos)
                if end < 0:
                    raise VectorFormatError(path, pos, f"entry {row}: missing word terminator")
                word = _decode(buf[pos:end])
                if not word:
                    raise VectorFormatError(path, pos, f"entry {row}: empty word")
                if word in seen:
                    raise VectorFormatError(path, pos, f"entry {row}: duplicate word {word!r}")
                payload = end + 1
                if payload + width > size:
                    raise VectorFormatError(
                        path, payload, f"entry {row}: truncated vector ({size - payload} of {width} bytes)"
                    )
                matrix[row] = np.frombuffer(buf[payload : payload + width], dtype="<f4")
                keys.append(word)
                seen.add(word)
                pos = payload + width
            if limit is None and buf[pos:].strip():
                raise VectorFormatError(path, pos, f"data after the {count} entries the header declares")
    _check_finite(matrix, offsets, path)
    return VectorStore(keys, matrix)


def _load_text(path: Path, limit: Optional[int]) -> VectorStore:
    keys: List[str] = []
    rows: List[np.ndarray] = []
    offsets: List[int] = []
    seen = set()
    declared: Optional[int] = None
    dim: Optional[int] = None
    pos = 0
    with path.open("rb") as fh:
        for lineno, raw in enumerate(fh):
            start = pos
            pos += len(raw)
            parts = raw.split()
            if not parts:
                continue
            if lineno == 0 and len(parts) == 2 and all(p.isdigit() for p in parts):
                declared, dim = _parse_header(raw, path)
                continue
            if limit is not None and len(keys) >= limit:
                break
            if dim is None:
                dim = len(parts) - 1
                if dim < 1:
                    raise VectorFormatError(path, start, "line without vector values")
            if len(parts) != dim + 1:
                raise VectorFormatError(path, start, f"expected {dim} values, found {len(parts) - 1}")
            word = _decode(parts[0])
            if word in seen:
                raise VectorFormatError(path, start, f"duplicate word {word!r}")
            try:
                rows.append(np.array([float(x) for x in parts[1:]], dtype=np.float32))
            except ValueError:
                raise VectorFormatError(path, start, "unparseable number")
            keys.append(word)
            offsets.append(start)
            seen.add(word)
    if dim is None:
        raise VectorFormatError(path, 0, "no vectors")
    if declared is not None and limit is None and len(keys) != declared:
        raise VectorFormatError(path, pos, f"header declares {declared} entries, found {len(keys)}")
    matrix = np.vstack(rows) if rows else np.zeros((0, dim), dtype=np.float32)
    _check_finite(matrix, offsets, path)
    return VectorStore(keys, matrix)


def load_word2vec(
    path: Union[str, Path], fmt: str = "binary", limit: Optional[int] = None
) -> VectorStore:
    """Load word2vec vectors; `limit` keeps only the first N entries."""
    path = Path(path)
    if fmt not in FORMATS:
        raise ConfigError(f"unknown vector format {fmt!r}; expected one of {FORMATS}")
    if not path.is_file():
        raise ResourceError(f"missing vector file: {path}")
    store = _load_binary(path, limit) if fmt == "binary" else _load_text(path, limit)
    logger.info(f"Loaded {len(store)} vectors of dim {store.dim} from {path}")
    return store


def guess_format(path: Union[str, Path]) -> str:
    """`binary` for .bin files, `text` otherwise."""
    return "binary" if Path(path).suffix == ".bin" else "text"


# ---- Saving ---------------------------------------------------------------------


def save_word2vec(
    keys: Sequence[str], matrix: np.ndarray, path: Union[str, Path], fmt: str = "text"
) -> None:
    """Write vectors in word2vec format; text values carry 6 significant digits."""
    path = Path(path)
    if fmt not in FORMATS:
        raise ConfigError(f"unknown vector format {fmt!r}; expected one of {FORMATS}")
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != len(keys):
        raise DimensionMismatchError(f"{len(keys)} keys for matrix of shape {matrix.shape}")
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("wb") as fh:
        fh.write(f"{matrix.shape[0]} {matrix.shape[1]}\n".encode("ascii"))
        for key, row in zip(keys, matrix):
            word = key.encode("utf-8", errors="surrogateescape")
            if fmt == "binary":
                fh.write(word + b" " + np.asarray(row, dtype="<f4").tobytes() + b"\n")
            else:
                values = " ".join(format(float(x), ".6g") for x in row)
                fh.write(word + b" " + values.encode("ascii") + b"\n")
    tmp.replace(path)
    logger.info(f"Wrote {len(keys)} vectors to {path}")


# ---- Queries --------------------------------------------------------------------


def resolve(store: VectorStore, word: str, policy: LookupPolicy = LookupPolicy()) -> Optional[str]:
    """The vocabulary key a lookup of `word` lands on: exact, joiner form, then lowercase."""
    candidates = [word]
    joined = policy.multiword_joiner.join(word.replace("_", " ").split())
    if joined and joined != word:
        candidates.append(joined)
    if policy.case_fallback:
        candidates += [c.lower() for c in list(candidates) if c.lower() != c]
    for candidate in candidates:
        if candidate in store:
            return candidate
    return None


def lookup(store: VectorStore, word: str, policy: LookupPolicy = LookupPolicy()) -> Optional[np.ndarray]:
    """Vector of the key `resolve` finds, or None."""
    key = resolve(store, word, policy)
    return None if key is None else store.get(key)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity clipped to [-1, 1]; zero vectors raise."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shapes {a.shape} and {b.shape} differ")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ZeroVectorError("cosine is undefined for a zero vector")
    return float(np.clip(a.dot(b) / (na * nb), -1.0, 1.0))


def nearest(
    space: VectorStore, query: np.ndarray, top_n: int = 10, exclude: Iterable[str] = ()
) -> List[Tuple[str, float]]:
    """Top `top_n` keys by descending cosine, ties broken by key string."""
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (space.dim,):
        raise DimensionMismatchError(f"query has shape {query.shape}, space dim is {space.dim}")
    norm = np.linalg.norm(query)
    if norm == 0:
        raise ZeroVectorError("cosine is undefined for a zero query vector")
    if top_n < 1:
        raise ConfigError(f"top_n must be positive, got {top_n}")

    unit = space.unit_matrix
    sims = np.clip((unit @ (query / norm).astype(unit.dtype)).astype(np.float64), -1.0, 1.0)
    excluded = [space.index_of(key) for key in set(exclude) if key in space]
    sims[excluded] = -np.inf
    available = len(space) - len(excluded)
    top_n = min(top_n, available)
    if top_n <= 0:
        return []
    cut = len(space) - top_n
    threshold = np.partition(sims, cut)[cut]
    candidates = np.flatnonzero(sims >= threshold)
    ranked = sorted(((space.keys[i], float(sims[i])) for i in candidates), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:top_n]
