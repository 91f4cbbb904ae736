"""Observer-relative descriptions of the same physical protocol.

Ground truth is always simulated at the largest dimension in play; an
observer is a pure view function over it.  A quantum observer either sees
the full space or a partial trace over one tensor factor (their measurement
repertoire spans only part of the operator space); a classical observer sees
species names through a merge map (species they cannot tell apart collapse
to one name).  Heats are measured quantities and are shared by everyone:
only the *description* of the gas contents is observer-relative, which is
exactly why one observer can book a completed cycle while another sees an
open path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from . import linalg, spin
from .errors import IncompatibleReductionError, VariantMismatchError
from .statistics import DensityMatrix, Povm
from .thermo import (
    ClassicalContents,
    CycleVerdict,
    GasChamber,
    GasContents,
    HeatLedger,
    QuantumContents,
)

if TYPE_CHECKING:  # pragma: no cover
    from .protocol.ast import ObserverDecl, Protocol
    from .protocol.engine import RunResult


@dataclass(frozen=True)
class Observer:
    """A named description context.

    kind "quantum": ``reduction`` is None (full view) or (d1, d2, keep); the
    factors must multiply to the ground-truth dimension.
    kind "classical": ``species_map`` renames true species to what the
    observer can resolve; unmapped species pass through unchanged.
    """

    name: str
    kind: str
    reduction: tuple[int, int, str] | None = None
    species_map: tuple[tuple[str, str], ...] = ()

    @staticmethod
    def quantum(name: str, reduction: tuple[int, int, str] | None = None) -> "Observer":
        return Observer(name, "quantum", reduction)

    @staticmethod
    def classical(name: str, species_map: dict[str, str] | None = None) -> "Observer":
        return Observer(name, "classical", None, tuple((species_map or {}).items()))

    @staticmethod
    def from_decl(decl: "ObserverDecl") -> "Observer":
        return Observer(decl.name, decl.kind, decl.reduction, decl.species_map)


@dataclass(frozen=True)
class ObserverView:
    """What one observer makes of a finished run: the chambers as they see
    them at start and end, the shared ledger, and their cycle verdict."""

    observer: Observer
    initial_chambers: tuple[GasChamber, ...]
    final_chambers: tuple[GasChamber, ...]
    ledger: HeatLedger
    verdict: CycleVerdict


def view_contents(observer: Observer, truth: GasContents) -> GasContents:
    """Reduce ground-truth contents to what the observer can resolve."""
    if isinstance(truth, QuantumContents):
        if observer.kind != "quantum":
            raise IncompatibleReductionError(
                f"classical observer {observer.name!r} cannot view quantum contents"
            )
        if observer.reduction is None:
            return truth
        d1, d2, keep = observer.reduction
        if d1 * d2 != truth.dim:
            raise IncompatibleReductionError(
                f"reduction {d1}x{d2} does not fit dimension {truth.dim}"
            )
        reduced = linalg.partial_trace(truth.assembled().matrix, (d1, d2), keep)
        return QuantumContents(((1.0, DensityMatrix(reduced)),))
    if isinstance(truth, ClassicalContents):
        if observer.kind != "classical":
            raise IncompatibleReductionError(
                f"quantum observer {observer.name!r} cannot view classical contents"
            )
        mapping = dict(observer.species_map)
        merged: dict[str, float] = {}
        for weight, name in truth.species:
            seen = mapping.get(name, name)
            merged[seen] = merged.get(seen, 0.0) + weight
        return ClassicalContents(tuple((w, name) for name, w in merged.items()))
    raise VariantMismatchError(f"unknown contents {type(truth).__name__}")


def view_chamber(observer: Observer, chamber: GasChamber) -> GasChamber:
    """Same volumes, temperature, and particle count; reduced contents."""
    return GasChamber(
        chamber.volume,
        chamber.temperature,
        chamber.particles,
        view_contents(observer, chamber.contents),
        chamber.label,
    )


def build_willard_povm() -> Povm:
    """The two-element POVM a four-level observer uses to describe the
    two-level alpha separation: E+- = alpha+- (x) I2, rank-2 projectors
    summing to the four-dimensional identity."""
    eye2 = linalg.identity(2)
    return Povm(
        (
            ("E+", linalg.tensor(spin.alpha_plus(), eye2)),
            ("E-", linalg.tensor(spin.alpha_minus(), eye2)),
        )
    )


def run_scenario(
    protocol: "Protocol",
    observers: list[Observer] | None = None,
    ground_truth_dim: int | None = None,
) -> "RunResult":
    """Execute a parsed protocol once on ground truth and render it through
    every observer: per-step chamber views, per-observer cycle verdicts, and
    the shared heat ledger.

    ``observers`` defaults to the protocol header's declarations;
    ``ground_truth_dim``, when given, must agree with the header.
    """
    from .protocol.engine import run_protocol

    if ground_truth_dim is not None and protocol.header.dim != ground_truth_dim:
        raise IncompatibleReductionError(
            f"requested dimension {ground_truth_dim} but the scenario "
            f"declares {protocol.header.dim}"
        )
    return run_protocol(protocol, observers)
