"""Abstract syntax of scenario scripts, plus the canonical renderer.

Source positions ride along on every node for error reporting but are
excluded from equality, so parse(render(p)) == p holds node for node.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union


def _pos_field() -> int:
    return field(default=0, compare=False, repr=False)  # type: ignore[return-value]


# -- expressions -------------------------------------------------------------

@dataclass(frozen=True)
class NameRef:
    name: str
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class KetExpr:
    amplitudes: tuple[complex, ...]
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class ProjExpr:
    arg: "Expr"
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class MixExpr:
    terms: tuple[tuple[float, "Expr"], ...]
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class TensorExpr:
    left: "Expr"
    right: "Expr"
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class IdentityExpr:
    dim: int
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class RotateToExpr:
    source: "Expr"
    target: "Expr"
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class EigenbasisExpr:
    arg: "Expr"
    line: int = _pos_field()
    col: int = _pos_field()


Expr = Union[
    NameRef, KetExpr, ProjExpr, MixExpr, TensorExpr, IdentityExpr, RotateToExpr,
    EigenbasisExpr,
]


# -- header ------------------------------------------------------------------

@dataclass(frozen=True)
class ObserverDecl:
    """An observer's description context.

    kind "quantum": ``reduction`` is None for the full-dimension view, or
    (d1, d2, keep) for a partial trace over one tensor factor.
    kind "classical": ``species_map`` renames true species to observed ones
    (missing entries mean the observer resolves that species as is).
    """

    name: str
    kind: str
    reduction: tuple[int, int, str] | None = None
    species_map: tuple[tuple[str, str], ...] = ()
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class Header:
    dim: int | None  # None for classical scenarios
    temperature: float
    particles: float
    observers: tuple[ObserverDecl, ...]
    line: int = _pos_field()
    col: int = _pos_field()


# -- statements --------------------------------------------------------------

@dataclass(frozen=True)
class DefineState:
    name: str
    expr: Expr
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class DefineInstrument:
    name: str
    # Either an explicit projector list or a single EigenbasisExpr.
    elements: tuple[tuple[str, Expr], ...] = ()
    eigenbasis: EigenbasisExpr | None = None
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class ChamberStmt:
    position: str
    fraction: float
    state: str
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class ClassicalChamberStmt:
    position: str
    fraction: float
    species: tuple[tuple[str, float], ...]
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class SeparateStmt:
    instrument: str
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class ClassicalSeparateStmt:
    permeability: tuple[tuple[str, str], ...]  # species -> transmitted|reflected
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class MixStmt:
    distinguishing: bool
    chambers: tuple[str, ...] = ()  # empty means all
    into: str | None = None
    classical: bool = False
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class RotateStmt:
    chamber: str
    unitary: Expr
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class PartitionStmt:
    chamber: str
    fractions: tuple[float, ...]
    names: tuple[str, ...]
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class RemovePartitionStmt:
    chambers: tuple[str, ...] = ()  # empty means all
    into: str | None = None
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class ClaimCycleStmt:
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class ExpectTotalHeat:
    value: float
    tol: float
    line: int = _pos_field()
    col: int = _pos_field()


@dataclass(frozen=True)
class ExpectVerdict:
    observer: str
    outcome: str  # violation | satisfied | not_applicable
    line: int = _pos_field()
    col: int = _pos_field()


Statement = Union[
    DefineState, DefineInstrument, ChamberStmt, ClassicalChamberStmt,
    SeparateStmt, ClassicalSeparateStmt, MixStmt, RotateStmt, PartitionStmt,
    RemovePartitionStmt, ClaimCycleStmt, ExpectTotalHeat, ExpectVerdict,
]


@dataclass(frozen=True)
class Protocol:
    header: Header
    statements: tuple[Statement, ...]


# -- canonical rendering -----------------------------------------------------

def _render_number(x: float) -> str:
    return repr(float(x))


def _render_complex(z: complex) -> str:
    re, im = z.real, z.imag
    if im == 0:
        return _render_number(re)
    if re == 0:
        return f"{_render_number(im)}i"
    sign = "+" if im >= 0 else "-"
    return f"{_render_number(re)}{sign}{_render_number(abs(im))}i"


def render_expr(e: Expr) -> str:
    if isinstance(e, NameRef):
        return e.name
    if isinstance(e, KetExpr):
        return "ket(" + ", ".join(_render_complex(a) for a in e.amplitudes) + ")"
    if isinstance(e, ProjExpr):
        return f"proj({render_expr(e.arg)})"
    if isinstance(e, MixExpr):
        inner = " + ".join(f"{_render_number(w)}*{render_expr(s)}" for w, s in e.terms)
        return f"mix({inner})"
    if isinstance(e, TensorExpr):
        return f"tensor({render_expr(e.left)}, {render_expr(e.right)})"
    if isinstance(e, IdentityExpr):
        return f"identity({e.dim})"
    if isinstance(e, RotateToExpr):
        return f"rotate_to({render_expr(e.source)}, {render_expr(e.target)})"
    if isinstance(e, EigenbasisExpr):
        return f"eigenbasis-of({render_expr(e.arg)})"
    raise TypeError(f"unknown expression {e!r}")


def _render_header(h: Header) -> list[str]:
    if h.dim is None:
        first = (
            f"HEADER classical temperature={_render_number(h.temperature)} "
            f"particles={_render_number(h.particles)}"
        )
    else:
        first = (
            f"HEADER dim={h.dim} temperature={_render_number(h.temperature)} "
            f"particles={_render_number(h.particles)}"
        )
    lines = [first]
    for obs in h.observers:
        if obs.kind == "quantum":
            if obs.reduction is None:
                lines.append(f"OBSERVER {obs.name} full")
            else:
                d1, d2, keep = obs.reduction
                lines.append(f"OBSERVER {obs.name} reduce {d1} {d2} {keep}")
        else:
            if obs.species_map:
                mapping = " ".join(f"{a}={b}" for a, b in obs.species_map)
                lines.append(f"OBSERVER {obs.name} classical {mapping}")
            else:
                lines.append(f"OBSERVER {obs.name} classical")
    return lines


def _render_statement(s: Statement) -> str:
    if isinstance(s, DefineState):
        return f"DEFINE_STATE {s.name} {render_expr(s.expr)}"
    if isinstance(s, DefineInstrument):
        if s.eigenbasis is not None:
            return f"DEFINE_INSTRUMENT {s.name} {render_expr(s.eigenbasis)}"
        parts = " ".join(f"{label}={render_expr(e)}" for label, e in s.elements)
        return f"DEFINE_INSTRUMENT {s.name} {parts}"
    if isinstance(s, ChamberStmt):
        return f"CHAMBER {s.position} {_render_number(s.fraction)} {s.state}"
    if isinstance(s, ClassicalChamberStmt):
        bag = " ".join(f"{name}={_render_number(w)}" for name, w in s.species)
        return f"CLASSICAL_CHAMBER {s.position} {_render_number(s.fraction)} {bag}"
    if isinstance(s, SeparateStmt):
        return f"SEPARATE {s.instrument}"
    if isinstance(s, ClassicalSeparateStmt):
        parts = " ".join(f"{species}={verdict}" for species, verdict in s.permeability)
        return f"CLASSICAL_SEPARATE {parts}"
    if isinstance(s, MixStmt):
        head = "CLASSICAL_MIX" if s.classical else "MIX"
        mode = "distinguishing" if s.distinguishing else "free"
        parts = [head, mode, *s.chambers]
        if s.into is not None:
            parts += ["->", s.into]
        return " ".join(parts)
    if isinstance(s, RotateStmt):
        return f"ROTATE {s.chamber} {render_expr(s.unitary)}"
    if isinstance(s, PartitionStmt):
        fracs = " ".join(_render_number(f) for f in s.fractions)
        return f"PARTITION {s.chamber} {fracs} -> {' '.join(s.names)}"
    if isinstance(s, RemovePartitionStmt):
        parts = ["REMOVE_PARTITION", *s.chambers]
        if s.into is not None:
            parts += ["->", s.into]
        return " ".join(parts)
    if isinstance(s, ClaimCycleStmt):
        return "CLAIM_CYCLE"
    if isinstance(s, ExpectTotalHeat):
        return f"EXPECT Q_total ~= {_render_number(s.value)} {_render_number(s.tol)}"
    if isinstance(s, ExpectVerdict):
        return f"EXPECT verdict {s.observer} {s.outcome}"
    raise TypeError(f"unknown statement {s!r}")


def render(protocol: Protocol) -> str:
    """Canonical text form; reparsing it reproduces an equal Protocol."""
    lines = _render_header(protocol.header)
    lines.extend(_render_statement(s) for s in protocol.statements)
    return "\n".join(lines) + "\n"
