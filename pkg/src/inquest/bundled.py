"""Paths to the datasets, catalogs, and snippets bundled with the package."""

from pathlib import Path

_ROOT = Path(__file__).parent / "fixtures"


def fixture_path(*parts) -> Path:
    path = _ROOT.joinpath(*parts)
    if not path.exists():
        raise FileNotFoundError(f"no bundled fixture at {path}")
    return path


def casestudy1_dataset() -> Path:
    """Two-run, four-classes-per-run dataset with published metric values."""
    return fixture_path("casestudy1")


def synthetic12_dataset() -> Path:
    """One run over twelve modules, built for top-N curve arithmetic."""
    return fixture_path("synthetic12")


def table1_catalog() -> Path:
    """Threshold-rule catalog crossing inspection and product metrics (118 rules)."""
    return fixture_path("catalogs", "table1.json")


def casestudy2_catalog() -> Path:
    """Top-N catalog: ten assumptions, cuts at 3, 5, 8, and 10 (40 rules)."""
    return fixture_path("catalogs", "casestudy2.json")


def snippets_dir() -> Path:
    """Small source files with hand-counted extraction metrics."""
    return fixture_path("snippets")
