"""Bundled scenario scripts (.qg files shipped with the package)."""

from __future__ import annotations

from importlib import resources

BUNDLED = (
    "example1_distinguishable",
    "example2_nondistinguishable",
    "peres_tatiana",
    "peres_willard_completed",
    "jaynes_johann",
    "jaynes_marie_completed",
)


def scenario_text(name: str) -> str:
    """Source text of a bundled scenario; raises KeyError for unknown names."""
    if name not in BUNDLED:
        raise KeyError(name)
    return (
        resources.files(__package__).joinpath(f"{name}.qg").read_text(encoding="utf-8")
    )
