"""Semi-permeable diaphragms: measurement devices coupled to volumes.

A diaphragm detains each particle, measures its internal degree of freedom,
and transmits or reflects it by outcome, updating the state in the process.
Pushing a pair of such diaphragms through a container therefore both
transforms and spatially separates the gas: each outcome ends up in its own
chamber whose volume fraction equals the outcome probability (the
equal-pressure condition), at the cost of isothermal compression heat
N k T sum_i p_i ln p_i <= 0.

Mixing is the inverse. With *separating* diaphragms (which exist exactly
when the chamber states are pairwise orthogonal) it is reversible and the
gases absorb Q = sum_i N_i k T ln(V_total/V_i) >= 0.  Asking for a
separating mix of non-orthogonal gases raises NotOrthogonalError: that
request asserts one-shot distinguishability of preparations already assumed
indistinguishable, and no device can be built from a contradiction.
Removing a wall without separating diaphragms is free mixing: irreversible,
and it extracts nothing (Q = 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DimMismatchError,
    NotOrthogonalError,
    NotQuantumError,
    TemperatureMismatchError,
    UnknownSpeciesError,
    VariantMismatchError,
)
from .statistics import (
    DensityMatrix,
    Outcome,
    ProjectiveInstrument,
    apply_instrument,
)
from .thermo import ClassicalContents, GasChamber, QuantumContents

PROBABILITY_FLOOR = 1e-12
ORTHOGONALITY_TOL = 1e-10


@dataclass(frozen=True)
class SeparationResult:
    """Chambers produced by a separation, with the heat absorbed by the gas
    and the per-outcome statistics that produced them."""

    chambers: tuple[GasChamber, ...]
    heat: float
    per_outcome: tuple[Outcome, ...]


def separate(chamber: GasChamber, instrument: ProjectiveInstrument) -> SeparationResult:
    """Separate a quantum gas chamber with the diaphragms of an instrument.

    Outcome probabilities are computed on the assembled mixture.  Each
    outcome with probability above 1e-12 gets a chamber holding the
    post-measurement state, with volume p*V and particle amount p*N at the
    parent temperature; zero-probability outcomes produce no chamber.
    """
    if not isinstance(chamber.contents, QuantumContents):
        raise NotQuantumError("separation diaphragms act on quantum contents")
    if chamber.contents.dim != instrument.dim:
        raise DimMismatchError(
            f"contents dim {chamber.contents.dim} vs instrument dim {instrument.dim}"
        )
    distribution = apply_instrument(chamber.contents.assembled(), instrument)
    chambers = []
    heat = 0.0
    for outcome in distribution.outcomes:
        p = outcome.probability
        if p < PROBABILITY_FLOOR or outcome.post_state is None:
            continue
        heat += chamber.particles * chamber.temperature * p * math.log(p)
        chambers.append(
            GasChamber(
                volume=p * chamber.volume,
                temperature=chamber.temperature,
                particles=p * chamber.particles,
                contents=QuantumContents(((1.0, outcome.post_state),)),
                label=_child_label(chamber.label, outcome.label),
            )
        )
    return SeparationResult(tuple(chambers), heat, distribution.outcomes)


def _child_label(parent: str, outcome: str) -> str:
    return f"{parent}/{outcome}" if parent else outcome


def _merged_quantum(chambers: list[GasChamber]) -> QuantumContents:
    total_n = sum(c.particles for c in chambers)
    mixture = []
    for c in chambers:
        assert isinstance(c.contents, QuantumContents)
        share = c.particles / total_n
        for w, state in c.contents.mixture:
            mixture.append((share * w, state))
    return QuantumContents(tuple(mixture))


def _merged_classical(chambers: list[GasChamber]) -> ClassicalContents:
    total_n = sum(c.particles for c in chambers)
    merged: dict[str, float] = {}
    for c in chambers:
        assert isinstance(c.contents, ClassicalContents)
        share = c.particles / total_n
        for name, w in c.contents.weight_map().items():
            merged[name] = merged.get(name, 0.0) + share * w
    return ClassicalContents(tuple((w, name) for name, w in merged.items()))


def _check_same_temperature(chambers: list[GasChamber]) -> float:
    t = chambers[0].temperature
    for c in chambers[1:]:
        if abs(c.temperature - t) > 1e-12 * max(t, c.temperature):
            raise TemperatureMismatchError(
                f"temperatures {t!r} and {c.temperature!r} differ"
            )
    return t


def mix(
    chambers: list[GasChamber], distinguishing: bool, label: str = ""
) -> tuple[GasChamber, float]:
    """Merge quantum chambers into one of the total volume and particle count.

    distinguishing=True models separating diaphragms run in reverse and
    requires the chamber states to be pairwise orthogonal; the gases then
    absorb Q = sum_i N_i k T ln(V_total/V_i) >= 0.  distinguishing=False is
    free mixing: Q = 0.
    """
    if not chambers:
        raise ValueError("nothing to mix")
    for c in chambers:
        if not isinstance(c.contents, QuantumContents):
            raise NotQuantumError("mix acts on quantum contents; see classical_mix")
    if len(chambers) == 1:
        only = chambers[0]
        return (only if not label else only.relabel(label)), 0.0
    t = _check_same_temperature(chambers)
    if distinguishing:
        _require_pairwise_orthogonal(chambers)
    total_v = sum(c.volume for c in chambers)
    total_n = sum(c.particles for c in chambers)
    heat = 0.0
    if distinguishing:
        heat = math.fsum(
            c.particles * t * math.log(total_v / c.volume) for c in chambers
        )
    merged = GasChamber(
        volume=total_v,
        temperature=t,
        particles=total_n,
        contents=_merged_quantum(chambers),
        label=label or chambers[0].label,
    )
    return merged, heat


def _require_pairwise_orthogonal(chambers: list[GasChamber]) -> None:
    states = [c.contents.assembled() for c in chambers]
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            overlap = _overlap(states[i], states[j])
            if overlap > ORTHOGONALITY_TOL:
                raise NotOrthogonalError(
                    f"chambers {chambers[i].label!r} and {chambers[j].label!r} hold "
                    f"non-orthogonal gases (overlap {overlap:.6f}); a diaphragm "
                    "separating them would distinguish preparations assumed "
                    "indistinguishable"
                )


def _overlap(a: DensityMatrix, b: DensityMatrix) -> float:
    from .linalg import trace_product

    return trace_product(a.matrix, b.matrix)


def classical_separate(
    chamber: GasChamber, permeability: dict[str, str]
) -> SeparationResult:
    """Separate a classical chamber with a diaphragm pair described by a
    permeability map species -> "transmitted" | "reflected".

    The map must cover every species present.  Volumes and particle counts
    split in proportion to the group weights, with the same compression
    heat formula as the quantum case.
    """
    if not isinstance(chamber.contents, ClassicalContents):
        raise VariantMismatchError("classical_separate needs classical contents")
    for verdict in permeability.values():
        if verdict not in ("transmitted", "reflected"):
            raise UnknownSpeciesError(f"permeability verdict {verdict!r}")
    weights = chamber.contents.weight_map()
    groups: dict[str, dict[str, float]] = {"transmitted": {}, "reflected": {}}
    for name, w in weights.items():
        if name not in permeability:
            raise UnknownSpeciesError(f"species {name!r} missing from permeability map")
        groups[permeability[name]][name] = w
    chambers = []
    outcomes = []
    heat = 0.0
    for outcome_label in ("transmitted", "reflected"):
        bag = groups[outcome_label]
        p = sum(bag.values())
        outcomes.append(Outcome(outcome_label, p, None))
        if p < PROBABILITY_FLOOR:
            continue
        heat += chamber.particles * chamber.temperature * p * math.log(p)
        contents = ClassicalContents(tuple((w / p, name) for name, w in bag.items()))
        chambers.append(
            GasChamber(
                volume=p * chamber.volume,
                temperature=chamber.temperature,
                particles=p * chamber.particles,
                contents=contents,
                label=_child_label(chamber.label, outcome_label),
            )
        )
    return SeparationResult(tuple(chambers), heat, tuple(outcomes))


def classical_mix(
    chambers: list[GasChamber], distinguishing: bool, label: str = ""
) -> tuple[GasChamber, float]:
    """Classical counterpart of :func:`mix`.

    distinguishing=True requires pairwise disjoint species bags (there must
    exist a diaphragm that tells the chambers apart); mixing one gas with
    itself extracts nothing and is rejected.
    """
    if not chambers:
        raise ValueError("nothing to mix")
    for c in chambers:
        if not isinstance(c.contents, ClassicalContents):
            raise VariantMismatchError("classical_mix needs classical contents")
    if len(chambers) == 1:
        only = chambers[0]
        return (only if not label else only.relabel(label)), 0.0
    t = _check_same_temperature(chambers)
    if distinguishing:
        for i in range(len(chambers)):
            for j in range(i + 1, len(chambers)):
                shared = set(chambers[i].contents.weight_map()) & set(
                    chambers[j].contents.weight_map()
                )
                if shared:
                    raise NotOrthogonalError(
                        f"chambers {chambers[i].label!r} and {chambers[j].label!r} "
                        f"share species {sorted(shared)}; no diaphragm separates a "
                        "gas from itself"
                    )
    total_v = sum(c.volume for c in chambers)
    total_n = sum(c.particles for c in chambers)
    heat = 0.0
    if distinguishing:
        heat = math.fsum(
            c.particles * t * math.log(total_v / c.volume) for c in chambers
        )
    merged = GasChamber(
        volume=total_v,
        temperature=t,
        particles=total_n,
        contents=_merged_classical(chambers),
        label=label or chambers[0].label,
    )
    return merged, heat
