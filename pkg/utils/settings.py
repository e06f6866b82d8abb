"""
Environment settings.

Values come from the process environment, optionally populated from a .env
file at the project root.
"""

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

# Load environment variables from .env file
try:
    from dotenv import load_dotenv
    env_path = Path(__file__).parent.parent / '.env'
    load_dotenv(dotenv_path=env_path)
except ImportError:
    pass  # python-dotenv not installed, will rely on system env vars

DEFAULT_CALIBRATION = Path(__file__).parent.parent / 'calibration' / 'ppac_28nm.json'


@dataclass
class Settings:
    """Resolved environment settings."""
    threads: int
    out_dir: Path
    calibration: Path


def _read_threads(raw: Optional[str]) -> int:
    fallback = os.cpu_count() or 1
    if not raw:
        return fallback
    try:
        value = int(raw)
    except ValueError:
        return fallback
    return max(1, value)


def load_settings() -> Settings:
    """
    Read FAEQ_* variables.

    Returns:
        Settings with defaults filled in
    """
    return Settings(
        threads=_read_threads(os.getenv('FAEQ_THREADS')),
        out_dir=Path(os.getenv('FAEQ_OUT_DIR', 'output')),
        calibration=Path(os.getenv('FAEQ_CALIBRATION', str(DEFAULT_CALIBRATION))),
    )
