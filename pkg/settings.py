# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Environment-driven defaults for SenseSplit.

Values are read once at import from the process environment, after loading
an optional `.env` file. CLI flags default to these values.

Environment:
- PPR_DAMPING         : damping factor sigma (float, default 0.85)
- PPR_MAX_ITERATIONS  : power-iteration cap (int, default 30)
- PPR_TOLERANCE       : L1 convergence threshold (float, default 1e-9)
- BIAS_K              : bias-list truncation (int, default 25)
- DECONF_ALPHA        : weight of the lemma term (float, default 1.0)
- DECONF_LAMBDA       : rank decay rate (float, default 0.2)
- THREADS             : worker threads for batch stages (int, default 1)
- MULTIWORD_JOINER    : joiner for multiword lemmas (str, default "_")
- CASE_FALLBACK       : try lowercase when exact lookup fails (0/1, default 1)
- LOG_LEVEL           : logging level name (default INFO)
- WORDNET_DIR         : default WordNet dict/ directory (optional)
"""

import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv


load_dotenv()


def _env_flag(name: str, default: bool) -> bool:
    """Read a 0/1 style boolean from the environment."""
    raw = os.getenv(name)
    if raw is None:
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


PPR_DAMPING: float = float(os.getenv("PPR_DAMPING", 0.85))
PPR_MAX_ITERATIONS: int = int(os.getenv("PPR_MAX_ITERATIONS", 30))
PPR_TOLERANCE: float = float(os.getenv("PPR_TOLERANCE", 1e-9))
BIAS_K: int = int(os.getenv("BIAS_K", 25))
DECONF_ALPHA: float = float(os.getenv("DECONF_ALPHA", 1.0))
DECONF_LAMBDA: float = float(os.getenv("DECONF_LAMBDA", 0.2))
THREADS: int = int(os.getenv("THREADS", 1))
MULTIWORD_JOINER: str = os.getenv("MULTIWORD_JOINER", "_")
CASE_FALLBACK: bool = _env_flag("CASE_FALLBACK", True)
LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO").upper()
WORDNET_DIR: Optional[Path] = (
    Path(os.environ["WORDNET_DIR"]) if os.getenv("WORDNET_DIR") else None
)
