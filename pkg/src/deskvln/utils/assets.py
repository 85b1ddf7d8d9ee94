from pathlib import Path

ASSETS_DIR = Path(__file__).resolve().parents[1] / "assets"


def asset_path(name: str) -> Path:
    """Path of a file shipped in deskvln/assets."""
    return ASSETS_DIR / name
