"""Configuration for the Fuglede Z_2^d verification toolkit."""

import json
import os
from pathlib import Path
from typing import Dict, List, Optional, Tuple

# Load environment variables from .env file
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass  # python-dotenv not installed


class Config:
    """Configuration settings for catalog access and verification runs."""

    # Base paths
    BASE_DIR = Path(__file__).parent.parent.parent
    DATA_DIR = Path(os.getenv("FUGLEDE_DATA_DIR", str(BASE_DIR / "data")))
    CACHE_DIR = Path(os.getenv("FUGLEDE_CACHE_DIR", str(DATA_DIR / "cache")))
    FIXTURES_DIR = Path(os.getenv("FUGLEDE_FIXTURES_DIR", str(DATA_DIR / "catalog")))
    CHECKPOINT_PATH = Path(os.getenv("FUGLEDE_CHECKPOINT", str(DATA_DIR / "checkpoints.db")))

    # Sloane's library of Hadamard matrices
    CATALOG_BASE_URL = os.getenv("FUGLEDE_CATALOG_URL", "http://neilsloane.com/hadamard/")
    CATALOG_INDEX_PATH = os.getenv("FUGLEDE_CATALOG_INDEX", "")
    HTTP_TIMEOUT = float(os.getenv("FUGLEDE_HTTP_TIMEOUT", "30"))

    # One file per class for order 20; the larger orders ship concatenated.
    CATALOG_FILES: Dict[int, List[str]] = {
        20: ["had.20.pal.txt", "had.20.will.txt", "had.20.toncheviv.txt"],
        24: ["had.24.txt"],
        28: ["had.28.txt"],
    }
    # Class counts per order, used to police completeness of the pinned file set
    CATALOG_CLASS_COUNTS: Dict[int, int] = {20: 3, 24: 60, 28: 487}

    # Validation
    VALIDATE_HADAMARD = os.getenv("FUGLEDE_VALIDATE", "1").lower() not in ("0", "false", "no")
    MIN_DEPHASED_RANK = 6  # ranks must be strictly greater

    # Verification
    VERIFY_CASES: Tuple[Tuple[int, int], ...] = ((5, 8), (6, 8), (6, 16))
    JOBS = int(os.getenv("FUGLEDE_JOBS", "1"))

    # Logging
    LOG_LEVEL = os.getenv("FUGLEDE_LOG_LEVEL", "WARNING").upper()

    @classmethod
    def setup_directories(cls):
        """Create necessary directories if they don't exist."""
        cls.DATA_DIR.mkdir(parents=True, exist_ok=True)
        cls.CACHE_DIR.mkdir(parents=True, exist_ok=True)
        cls.FIXTURES_DIR.mkdir(parents=True, exist_ok=True)

    @classmethod
    def catalog_files(cls, order: int, index_path: Optional[str] = None) -> List[str]:
        """Return the pinned catalog file names for an order.

        An index file (JSON object mapping order to a list of file names)
        replaces the built-in index when configured.

        Raises:
            KeyError: if the order has no catalog entry.
        """
        index = cls.CATALOG_FILES
        path = index_path or cls.CATALOG_INDEX_PATH
        if path:
            with open(path, encoding="utf-8") as f:
                index = {int(k): list(v) for k, v in json.load(f).items()}
        return list(index[order])

    @classmethod
    def validate(cls):
        """Validate configuration."""
        errors = []

        if cls.HTTP_TIMEOUT <= 0:
            errors.append("FUGLEDE_HTTP_TIMEOUT must be positive")

        if cls.JOBS < 1:
            errors.append("FUGLEDE_JOBS must be at least 1")

        if not cls.CATALOG_BASE_URL.endswith("/"):
            errors.append("FUGLEDE_CATALOG_URL must end with '/'")

        if cls.CATALOG_INDEX_PATH and not Path(cls.CATALOG_INDEX_PATH).is_file():
            errors.append(f"FUGLEDE_CATALOG_INDEX does not exist: {cls.CATALOG_INDEX_PATH}")

        if errors:
            raise ValueError("Configuration errors:\n" + "\n".join(errors))
