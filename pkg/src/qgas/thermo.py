"""Isothermal ideal-gas heat accounting and the cyclic second-law audit.

An ideal gas exchanges heat Q = W = N k T ln(Vf/Vi) in any isothermal
process; that single formula carries all the bookkeeping here.  Heats are
recorded in a ledger as absorbed-by-the-gas quantities, and a cycle audit
checks the final configuration against the initial one before applying the
cyclic form of the second law, Q <= 0.  When the configurations differ, the
law simply does not apply, whatever the sign of Q.

Gas contents come in two variants: a quantum mixture (weighted density
matrices on the particles' internal degree of freedom) or a classical bag
of named species.  Boltzmann's constant defaults to 1 so that every heat
reads directly in units of N k T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    NonPositiveInputError,
    NotConvexError,
    VariantMismatchError,
)
from .statistics import DensityMatrix, mix_states

WEIGHT_TOL = 1e-12
VOLUME_REL_TOL = 1e-9
SECOND_LAW_TOL = 1e-9


@dataclass(frozen=True)
class QuantumContents:
    """Weighted mixture of internal-state density matrices."""

    mixture: tuple[tuple[float, DensityMatrix], ...]

    def __post_init__(self):
        if not self.mixture:
            raise NotConvexError("mixture must be nonempty")
        weights = [w for w, _ in self.mixture]
        if any(w <= 0 for w in weights):
            raise NotConvexError(f"weights must be positive: {weights}")
        if abs(sum(weights) - 1.0) > WEIGHT_TOL:
            raise NotConvexError(f"weights sum to {sum(weights)!r}")
        dims = {state.dim for _, state in self.mixture}
        if len(dims) != 1:
            raise VariantMismatchError(f"mixed dimensions {dims}")

    @property
    def dim(self) -> int:
        return self.mixture[0][1].dim

    def assembled(self) -> DensityMatrix:
        """The mixture as a single density matrix."""
        return mix_states([w for w, _ in self.mixture], [s for _, s in self.mixture])


@dataclass(frozen=True)
class ClassicalContents:
    """Weighted bag of classical species names."""

    species: tuple[tuple[float, str], ...]

    def __post_init__(self):
        if not self.species:
            raise NotConvexError("species bag must be nonempty")
        weights = [w for w, _ in self.species]
        if any(w <= 0 for w in weights):
            raise NotConvexError(f"weights must be positive: {weights}")
        if abs(sum(weights) - 1.0) > WEIGHT_TOL:
            raise NotConvexError(f"weights sum to {sum(weights)!r}")

    def weight_map(self) -> dict[str, float]:
        merged: dict[str, float] = {}
        for w, name in self.species:
            merged[name] = merged.get(name, 0.0) + w
        return merged


GasContents = QuantumContents | ClassicalContents


@dataclass(frozen=True)
class GasChamber:
    """A labeled volume of ideal gas at fixed temperature.

    The particle amount is a real number: everything works in the
    thermodynamic limit where fluctuations around the mean fractions are
    negligible.
    """

    volume: float
    temperature: float
    particles: float
    contents: GasContents
    label: str = ""

    def __post_init__(self):
        for name in ("volume", "temperature", "particles"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise NonPositiveInputError(f"{name} must be finite and > 0, got {value!r}")

    def relabel(self, label: str) -> "GasChamber":
        return GasChamber(self.volume, self.temperature, self.particles, self.contents, label)


@dataclass(frozen=True)
class LedgerStep:
    description: str
    heat: float


@dataclass
class HeatLedger:
    """Ordered record of per-step heat absorbed by the gases."""

    boltzmann_constant: float = 1.0
    steps: list[LedgerStep] = field(default_factory=list)
    cycle_claimed: bool = False

    def record(self, description: str, heat: float) -> None:
        if not math.isfinite(heat):
            raise NonPositiveInputError(f"heat must be finite, got {heat!r}")
        self.steps.append(LedgerStep(description, float(heat)))

    def claim_cycle(self) -> None:
        self.cycle_claimed = True

    @property
    def total_heat(self) -> float:
        return math.fsum(step.heat for step in self.steps)


@dataclass(frozen=True)
class CycleVerdict:
    """Outcome of auditing a claimed cycle.

    ``second_law_satisfied`` is None exactly when the process is not
    actually a cycle: the cyclic form of the second law does not apply to
    an open path.  ``apparent_violation_explained`` marks the instructive
    case of a claimed cycle that closer inspection shows never closed.
    """

    is_cycle_claimed: bool
    is_cycle_actual: bool
    total_heat: float
    second_law_satisfied: bool | None
    apparent_violation_explained: bool

    @property
    def status(self) -> str:
        if self.second_law_satisfied is None:
            return "not-applicable"
        return "satisfied" if self.second_law_satisfied else "violated"


def isothermal_heat(
    particles: float, temperature: float, v_initial: float, v_final: float,
    boltzmann_constant: float = 1.0,
) -> float:
    """Heat absorbed by an ideal gas in an isothermal volume change,
    N k T ln(Vf/Vi); negative on compression."""
    for name, value in (
        ("particles", particles),
        ("temperature", temperature),
        ("v_initial", v_initial),
        ("v_final", v_final),
    ):
        if not (math.isfinite(value) and value > 0):
            raise NonPositiveInputError(f"{name} must be finite and > 0, got {value!r}")
    return particles * boltzmann_constant * temperature * math.log(v_final / v_initial)


def contents_equal(a: GasContents, b: GasContents, tol: float = 1e-9) -> bool:
    """Compare contents up to decomposition: quantum mixtures are compared
    as assembled density matrices, classical bags as merged weight maps."""
    if isinstance(a, QuantumContents) and isinstance(b, QuantumContents):
        if a.dim != b.dim:
            return False
        return a.assembled().isclose(b.assembled(), tol)
    if isinstance(a, ClassicalContents) and isinstance(b, ClassicalContents):
        wa, wb = a.weight_map(), b.weight_map()
        names = set(wa) | set(wb)
        return all(abs(wa.get(n, 0.0) - wb.get(n, 0.0)) <= tol for n in names)
    raise VariantMismatchError(
        f"cannot compare {type(a).__name__} with {type(b).__name__}"
    )


def _chambers_match(initial: list[GasChamber], final: list[GasChamber], tol: float) -> bool:
    if len(initial) != len(final):
        return False
    for before, after in zip(initial, final):
        scale = max(abs(before.volume), abs(after.volume))
        if abs(before.volume - after.volume) > VOLUME_REL_TOL * scale:
            return False
        nscale = max(abs(before.particles), abs(after.particles))
        if abs(before.particles - after.particles) > VOLUME_REL_TOL * nscale:
            return False
        try:
            if not contents_equal(before.contents, after.contents, tol):
                return False
        except VariantMismatchError:
            return False
    return True


def audit_cycle(
    ledger: HeatLedger,
    initial: list[GasChamber],
    final: list[GasChamber],
    tol: float = 1e-9,
) -> CycleVerdict:
    """Compare configurations chamber by chamber (order matters: chambers
    are labeled positions) and apply Q <= 0 only if the cycle truly closed."""
    actual = _chambers_match(initial, final, tol)
    total = ledger.total_heat
    satisfied = (total <= SECOND_LAW_TOL) if actual else None
    return CycleVerdict(
        is_cycle_claimed=ledger.cycle_claimed,
        is_cycle_actual=actual,
        total_heat=total,
        second_law_satisfied=satisfied,
        apparent_violation_explained=ledger.cycle_claimed and not actual,
    )


def pressure(chamber: GasChamber, boltzmann_constant: float = 1.0) -> float:
    """Ideal-gas pressure N k T / V, derived on demand."""
    return chamber.particles * boltzmann_constant * chamber.temperature / chamber.volume
