# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Exception hierarchy for SenseSplit.

Every error raised on purpose by the toolkit derives from SenseSplitError and
carries the process exit code the CLI returns for it:

- 2 : bad configuration or usage
- 3 : parse / format errors in an input file
- 4 : resource integrity (missing files, dangling pointers, mixed artifacts)
- 5 : a request that cannot be computed (unknown synset, OOV sense, ...)
"""

import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union


class SenseSplitError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1


# ---- Usage ----------------------------------------------------------------------


class ConfigError(SenseSplitError, ValueError):
    """A configuration value violates its invariant."""

    exit_code = 2


# ---- Parse / format -------------------------------------------------------------


class FormatError(SenseSplitError):
    """An input file does not follow its declared format."""

    exit_code = 3


class _PositionedFormatError(FormatError):
    """Format error that knows the file and byte offset it happened at."""

    def __init__(self, path: Union[str, Path], byte_offset: int, reason: str) -> None:
        self.path = Path(path)
        self.byte_offset = byte_offset
        self.reason = reason
        super().__init__(f"{self.path}: byte {byte_offset}: {reason}")


class WordNetParseError(_PositionedFormatError):
    """Malformed line in a WordNet data file."""


class VectorFormatError(_PositionedFormatError):
    """Malformed word2vec payload."""


class DatasetFormatError(FormatError):
    """Malformed line in a similarity dataset."""


class UnknownFormatError(FormatError):
    """Format name not known to the loader."""


# ---- Resource integrity ---------------------------------------------------------


class ResourceError(SenseSplitError):
    """A required resource is missing or inconsistent."""

    exit_code = 4


class WordNetLoadError(ResourceError):
    """A WordNet data file is missing or unreadable."""


class IntegrityError(ResourceError):
    """Parsed data references something that does not exist."""


class FingerprintMismatchError(ResourceError):
    """Artifacts produced from different graph builds were mixed."""

    def __init__(self, expected: str, found: str, what: str = "artifact") -> None:
        self.expected = expected
        self.found = found
        super().__init__(
            f"{what} was built from graph {found[:12]}, expected {expected[:12]}"
        )


# ---- Uncomputable requests ------------------------------------------------------


class UncomputableError(SenseSplitError):
    """The request is well formed but has no answer."""

    exit_code = 5


class UnknownSynsetError(UncomputableError, LookupError):
    """Synset id is not part of the loaded graph."""


class IsolatedTargetError(UncomputableError):
    """PPR target has no neighbors, so no mass can propagate."""


class EmptyRankingError(UncomputableError):
    """A PPR vector with no entries was handed to the extractor."""


class UncomputableSenseError(UncomputableError):
    """Neither the lemma nor any biasing word has a vector."""


class NoSensesComputedError(UncomputableError):
    """Training produced no sense vector at all."""


class ZeroVectorError(UncomputableError, ValueError):
    """A zero vector where a direction is required."""


class DimensionMismatchError(UncomputableError, ValueError):
    """Vectors of different dimensionality were combined."""


class UncoveredPairError(UncomputableError):
    """A benchmark item has no vector under the requested strategy."""

    def __init__(self, item: str, reason: Optional[str] = None) -> None:
        self.item = item
        super().__init__(reason or f"no vector for {item!r}")


class DegenerateCentroidError(UncoveredPairError):
    """The sense vectors of a word exist but sum to the zero vector."""


class UndefinedCorrelationError(UncomputableError, ValueError):
    """Correlation is undefined for the given inputs."""


# ---- Batch accounting -----------------------------------------------------------


class BatchSummary:
    """Collects per-item failures of a batch stage without aborting it."""

    def __init__(self, stage: str) -> None:
        self.stage = stage
        self.succeeded = 0
        self.failures: List[Tuple[str, str]] = []

    def record_success(self) -> None:
        self.succeeded += 1

    def record_failure(self, key: str, reason: Union[str, Exception]) -> None:
        self.failures.append((key, str(reason)))

    @property
    def total(self) -> int:
        return self.succeeded + len(self.failures)

    def log(self, logger: logging.Logger) -> None:
        """One INFO line, plus a WARNING when anything failed."""
        logger.info(f"{self.stage}: {self.succeeded}/{self.total} succeeded")
        if self.failures:
            head = ", ".join(f"{key} ({reason})" for key, reason in self.failures[:5])
            more = "" if len(self.failures) <= 5 else f" and {len(self.failures) - 5} more"
            logger.warning(f"{self.stage}: {len(self.failures)} failed: {head}{more}")
