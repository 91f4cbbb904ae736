"""Step-by-step execution of a parsed scenario on ground truth.

The engine keeps one ordered list of chambers (order is meaningful: chambers
are labeled positions, and the cycle audit compares them positionally).
Operations rewrite the list:

* SEPARATE replaces each chamber by its outcome chambers, in place;
* MIX and REMOVE_PARTITION delete the merged chambers and append the result
  at the end of the list;
* PARTITION replaces one chamber by its fragments, in place.

Every step appends one entry to the shared heat ledger and one per-observer
snapshot of the chamber list.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import diaphragm
from ..errors import (
    ExecutionError,
    IncompatibleReductionError,
    ProtocolError,
    QuantumGasError,
)
from ..observers import Observer, ObserverView, view_chamber
from ..statistics import ProjectiveInstrument, apply_unitary
from ..thermo import (
    ClassicalContents,
    GasChamber,
    HeatLedger,
    QuantumContents,
    audit_cycle,
    contents_equal,
)
from . import ast, semantics

CONTAINER_VOLUME = 1.0


@dataclass(frozen=True)
class StepTrace:
    index: int
    line: int
    description: str
    heat: float
    chambers_by_observer: dict[str, tuple[GasChamber, ...]]


@dataclass(frozen=True)
class RunResult:
    header: ast.Header
    observers: tuple[Observer, ...]
    ledger: HeatLedger
    initial_chambers: tuple[GasChamber, ...]
    final_chambers: tuple[GasChamber, ...]
    steps: tuple[StepTrace, ...]
    views: dict[str, ObserverView]

    @property
    def total_heat(self) -> float:
        return self.ledger.total_heat


class _Engine:
    def __init__(self, protocol: ast.Protocol, observers: list[Observer]):
        self.protocol = protocol
        self.header = protocol.header
        self.observers = observers
        self.scope: semantics.Scope = {}
        self.instruments: dict[str, ProjectiveInstrument] = {}
        self.chambers: list[GasChamber] = []
        self.initial: tuple[GasChamber, ...] | None = None
        self.ledger = HeatLedger()
        self.steps: list[StepTrace] = []
        self._validate_observers()

    def _validate_observers(self) -> None:
        names = [obs.name for obs in self.observers]
        if len(set(names)) != len(names):
            raise IncompatibleReductionError(f"duplicate observer names in {names}")
        for obs in self.observers:
            if self.header.dim is None and obs.kind != "classical":
                raise IncompatibleReductionError(
                    f"observer {obs.name!r} is quantum but the scenario is classical"
                )
            if self.header.dim is not None and obs.kind != "quantum":
                raise IncompatibleReductionError(
                    f"observer {obs.name!r} is classical but the scenario is quantum"
                )
            if obs.kind == "quantum" and obs.reduction is not None:
                d1, d2, _ = obs.reduction
                if d1 * d2 != self.header.dim:
                    raise IncompatibleReductionError(
                        f"observer {obs.name!r} reduction {d1}x{d2} does not fit "
                        f"dimension {self.header.dim}"
                    )

    # -- chamber bookkeeping ---------------------------------------------------

    def _find(self, position: str, stmt) -> int:
        for index, chamber in enumerate(self.chambers):
            if chamber.label == position:
                return index
        raise ExecutionError(
            f"no chamber at position {position!r} "
            f"(have {[c.label for c in self.chambers]})",
            stmt.line, stmt.col,
        )

    def _select(self, positions: tuple[str, ...], stmt) -> list[int]:
        if not positions:
            if not self.chambers:
                raise ExecutionError("no chambers exist yet", stmt.line, stmt.col)
            return list(range(len(self.chambers)))
        return [self._find(p, stmt) for p in positions]

    def _insert(self, chamber: GasChamber, stmt, at: int | None = None) -> None:
        if any(c.label == chamber.label for c in self.chambers):
            raise ExecutionError(
                f"chamber position {chamber.label!r} already exists",
                stmt.line, stmt.col,
            )
        if at is None:
            self.chambers.append(chamber)
        else:
            self.chambers.insert(at, chamber)

    def _freeze_initial(self) -> None:
        if self.initial is None:
            self.initial = tuple(self.chambers)

    # -- per-statement handlers -------------------------------------------------

    def run(self) -> RunResult:
        for index, stmt in enumerate(self.protocol.statements):
            try:
                self._dispatch(index, stmt)
            except ProtocolError:
                raise
            except QuantumGasError as exc:
                raise ExecutionError(str(exc), stmt.line, stmt.col) from exc
        self._freeze_initial()
        initial = self.initial or ()
        final = tuple(self.chambers)
        views: dict[str, ObserverView] = {}
        for obs in self.observers:
            seen_initial = tuple(view_chamber(obs, c) for c in initial)
            seen_final = tuple(view_chamber(obs, c) for c in final)
            verdict = audit_cycle(self.ledger, list(seen_initial), list(seen_final))
            views[obs.name] = ObserverView(
                obs, seen_initial, seen_final, self.ledger, verdict
            )
        return RunResult(
            self.header,
            tuple(self.observers),
            self.ledger,
            initial,
            final,
            tuple(self.steps),
            views,
        )

    def _dispatch(self, index: int, stmt: ast.Statement) -> None:
        if isinstance(stmt, ast.DefineState):
            self.scope[stmt.name] = semantics.eval_value(stmt.expr, self.scope)
            return
        if isinstance(stmt, ast.DefineInstrument):
            self.instruments[stmt.name] = semantics.eval_instrument(stmt, self.scope)
            return
        if isinstance(stmt, (ast.ExpectTotalHeat, ast.ExpectVerdict)):
            return  # checked by the interpreter after the run
        if isinstance(stmt, ast.ChamberStmt):
            self._do_chamber(stmt)
            return
        if isinstance(stmt, ast.ClassicalChamberStmt):
            self._do_classical_chamber(stmt)
            return

        # Operational statements: freeze the initial configuration first.
        self._freeze_initial()
        if isinstance(stmt, ast.SeparateStmt):
            description, heat = self._do_separate(stmt)
        elif isinstance(stmt, ast.ClassicalSeparateStmt):
            description, heat = self._do_classical_separate(stmt)
        elif isinstance(stmt, ast.MixStmt):
            description, heat = self._do_mix(stmt)
        elif isinstance(stmt, ast.RotateStmt):
            description, heat = self._do_rotate(stmt)
        elif isinstance(stmt, ast.PartitionStmt):
            description, heat = self._do_partition(stmt)
        elif isinstance(stmt, ast.RemovePartitionStmt):
            description, heat = self._do_remove_partition(stmt)
        elif isinstance(stmt, ast.ClaimCycleStmt):
            self.ledger.claim_cycle()
            description, heat = "claim cycle", 0.0
        else:
            raise ExecutionError(
                f"unsupported statement {type(stmt).__name__}", stmt.line, stmt.col
            )
        self.ledger.record(description, heat)
        self.steps.append(
            StepTrace(
                index=index,
                line=stmt.line,
                description=description,
                heat=heat,
                chambers_by_observer={
                    obs.name: tuple(view_chamber(obs, c) for c in self.chambers)
                    for obs in self.observers
                },
            )
        )

    def _do_chamber(self, stmt: ast.ChamberStmt) -> None:
        if self.header.dim is None:
            raise ExecutionError(
                "CHAMBER needs a quantum scenario; use CLASSICAL_CHAMBER",
                stmt.line, stmt.col,
            )
        value = self.scope[stmt.state]
        if not isinstance(value, semantics.StateValue):
            raise ExecutionError(
                f"{stmt.state!r} is a ket; chamber contents must be a state "
                "(wrap it in proj())",
                stmt.line, stmt.col,
            )
        contents = value.contents()
        if contents.dim != self.header.dim:
            raise ExecutionError(
                f"state {stmt.state!r} has dimension {contents.dim}, "
                f"scenario declares {self.header.dim}",
                stmt.line, stmt.col,
            )
        self._insert(
            GasChamber(
                volume=stmt.fraction * CONTAINER_VOLUME,
                temperature=self.header.temperature,
                particles=stmt.fraction * self.header.particles,
                contents=contents,
                label=stmt.position,
            ),
            stmt,
        )

    def _do_classical_chamber(self, stmt: ast.ClassicalChamberStmt) -> None:
        if self.header.dim is not None:
            raise ExecutionError(
                "CLASSICAL_CHAMBER needs a classical scenario", stmt.line, stmt.col
            )
        total = sum(w for _, w in stmt.species)
        contents = ClassicalContents(
            tuple((w / total, name) for name, w in stmt.species)
        )
        self._insert(
            GasChamber(
                volume=stmt.fraction * CONTAINER_VOLUME,
                temperature=self.header.temperature,
                particles=stmt.fraction * self.header.particles,
                contents=contents,
                label=stmt.position,
            ),
            stmt,
        )

    def _do_separate(self, stmt: ast.SeparateStmt) -> tuple[str, float]:
        instrument = self.instruments[stmt.instrument]
        heat = 0.0
        rebuilt: list[GasChamber] = []
        for chamber in self.chambers:
            result = diaphragm.separate(chamber, instrument)
            heat += result.heat
            rebuilt.extend(result.chambers)
        labels = [c.label for c in rebuilt]
        if len(set(labels)) != len(labels):
            raise ExecutionError(
                f"separation produced duplicate positions {labels}",
                stmt.line, stmt.col,
            )
        self.chambers = rebuilt
        return f"separate with {stmt.instrument}", heat

    def _do_classical_separate(self, stmt: ast.ClassicalSeparateStmt) -> tuple[str, float]:
        permeability = dict(stmt.permeability)
        heat = 0.0
        rebuilt: list[GasChamber] = []
        for chamber in self.chambers:
            result = diaphragm.classical_separate(chamber, permeability)
            heat += result.heat
            rebuilt.extend(result.chambers)
        labels = [c.label for c in rebuilt]
        if len(set(labels)) != len(labels):
            raise ExecutionError(
                f"separation produced duplicate positions {labels}",
                stmt.line, stmt.col,
            )
        self.chambers = rebuilt
        return "separate by species", heat

    def _do_mix(self, stmt: ast.MixStmt) -> tuple[str, float]:
        indices = self._select(stmt.chambers, stmt)
        selected = [self.chambers[i] for i in indices]
        label = stmt.into or selected[0].label
        mixer = diaphragm.classical_mix if stmt.classical else diaphragm.mix
        merged, heat = mixer(selected, stmt.distinguishing, label=label)
        self.chambers = [c for i, c in enumerate(self.chambers) if i not in set(indices)]
        self._insert(merged, stmt)
        mode = "distinguishing" if stmt.distinguishing else "free"
        names = ", ".join(c.label for c in selected)
        return f"{mode} mix of {names}", heat

    def _do_rotate(self, stmt: ast.RotateStmt) -> tuple[str, float]:
        index = self._find(stmt.chamber, stmt)
        chamber = self.chambers[index]
        if not isinstance(chamber.contents, QuantumContents):
            raise ExecutionError("ROTATE acts on quantum chambers", stmt.line, stmt.col)
        unitary = semantics.eval_unitary(stmt.unitary, self.scope)
        if unitary.shape[0] != chamber.contents.dim:
            raise ExecutionError(
                f"unitary dimension {unitary.shape[0]} does not match "
                f"contents dimension {chamber.contents.dim}",
                stmt.line, stmt.col,
            )
        rotated = QuantumContents(
            tuple((w, apply_unitary(s, unitary)) for w, s in chamber.contents.mixture)
        )
        self.chambers[index] = GasChamber(
            chamber.volume, chamber.temperature, chamber.particles, rotated, chamber.label
        )
        # Rotations are isochoric and performed with no energy exchange.
        return f"rotate {stmt.chamber}", 0.0

    def _do_partition(self, stmt: ast.PartitionStmt) -> tuple[str, float]:
        index = self._find(stmt.chamber, stmt)
        parent = self.chambers.pop(index)
        for offset, (fraction, name) in enumerate(zip(stmt.fractions, stmt.names)):
            self._insert(
                GasChamber(
                    volume=fraction * parent.volume,
                    temperature=parent.temperature,
                    particles=fraction * parent.particles,
                    contents=parent.contents,
                    label=name,
                ),
                stmt,
                at=index + offset,
            )
        return f"partition {parent.label}", 0.0

    def _do_remove_partition(self, stmt: ast.RemovePartitionStmt) -> tuple[str, float]:
        indices = self._select(stmt.chambers, stmt)
        selected = [self.chambers[i] for i in indices]
        for other in selected[1:]:
            if not contents_equal(selected[0].contents, other.contents):
                raise ExecutionError(
                    f"chambers {selected[0].label!r} and {other.label!r} hold "
                    "different gases; removing the wall would be an irreversible "
                    "mixing (use MIX free if that is intended)",
                    stmt.line, stmt.col,
                )
        label = stmt.into or selected[0].label
        if isinstance(selected[0].contents, QuantumContents):
            merged, _ = diaphragm.mix(selected, distinguishing=False, label=label)
        else:
            merged, _ = diaphragm.classical_mix(selected, distinguishing=False, label=label)
        self.chambers = [c for i, c in enumerate(self.chambers) if i not in set(indices)]
        self._insert(merged, stmt)
        names = ", ".join(c.label for c in selected)
        return f"remove partition between {names}", 0.0


def run_protocol(
    protocol: ast.Protocol, observers: list[Observer] | None = None
) -> RunResult:
    if observers is None:
        observers = [Observer.from_decl(decl) for decl in protocol.header.observers]
    return _Engine(protocol, observers).run()
