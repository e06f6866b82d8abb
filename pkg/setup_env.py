"""
Setup script for the faeq environment configuration
"""

import importlib
from pathlib import Path
from typing import Dict, Optional

from hwcost import load_calibration
from utils.errors import CalibrationError
from utils.settings import load_settings

REQUIRED_PACKAGES = ('numpy', 'scipy', 'dotenv')


def ensure_env_file(root: Path) -> bool:
    """
    Create .env from .env.example if it does not exist yet.

    Returns:
        True if a new .env was written
    """
    env_file = root / '.env'
    env_example = root / '.env.example'
    if env_file.exists() or not env_example.exists():
        return False
    env_file.write_text(env_example.read_text(encoding='utf-8'), encoding='utf-8')
    return True


def check_packages() -> Dict[str, bool]:
    """Import every required package and report which are available."""
    status = {}
    for name in REQUIRED_PACKAGES:
        try:
            importlib.import_module(name)
            status[name] = True
        except ImportError:
            status[name] = False
    return status


def check_calibration(path: Optional[Path] = None) -> Optional[str]:
    """Load the calibration file; returns an error message or None."""
    path = path or load_settings().calibration
    try:
        load_calibration(path)
    except CalibrationError as e:
        return str(e)
    return None


def setup_env(root: Optional[Path] = None) -> bool:
    """Guide user through environment setup"""
    root = root or Path(__file__).parent

    print("=" * 70)
    print("faeq Environment Setup")
    print("=" * 70)
    print()

    if (root / '.env').exists():
        print("✅ .env file already exists")
    elif ensure_env_file(root):
        print(f"✅ Created .env file: {(root / '.env').absolute()}")
        print("   Edit FAEQ_THREADS, FAEQ_OUT_DIR and FAEQ_CALIBRATION as needed")
    else:
        print("⚠️  .env.example not found, relying on system environment variables")

    settings = load_settings()
    print()
    print(f"   Threads:     {settings.threads}")
    print(f"   Output dir:  {settings.out_dir}")
    print(f"   Calibration: {settings.calibration}")
    print()

    print("Checking dependencies...")
    packages = check_packages()
    for name, ok in packages.items():
        if ok:
            print(f"✅ {name} package installed")
        else:
            print(f"❌ {name} package not installed")
            print("   Run: pip install -r requirements.txt")

    error = check_calibration(settings.calibration)
    if error:
        print(f"❌ Calibration: {error}")
    else:
        print("✅ Calibration file loads")
    print()
    return all(packages.values()) and error is None


if __name__ == "__main__":
    setup_env()
