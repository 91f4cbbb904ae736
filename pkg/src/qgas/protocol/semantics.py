"""Evaluation of scenario expressions into library values.

A DEFINE_STATE expression evaluates to either a ket or a state; states keep
their mixture decomposition (weights and component matrices) so that gas
contents preserve the narrative decomposition even though all physics is
computed on the assembled matrix.  Unitary expressions evaluate to raw
complex arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import linalg
from ..errors import ExecutionError, QuantumGasError
from ..statistics import DensityMatrix, ProjectiveInstrument, mixture_eigen_instrument
from ..thermo import QuantumContents
from . import ast


@dataclass(frozen=True)
class KetValue:
    ket: linalg.StateVector


@dataclass(frozen=True)
class StateValue:
    """A density matrix remembering the decomposition it was written with."""

    components: tuple[tuple[float, DensityMatrix], ...]

    def assembled(self) -> DensityMatrix:
        return QuantumContents(self.components).assembled()

    def contents(self) -> QuantumContents:
        return QuantumContents(self.components)


Value = KetValue | StateValue

Scope = dict[str, Value]


def _fail(node, message: str) -> ExecutionError:
    return ExecutionError(message, getattr(node, "line", 0), getattr(node, "col", 0))


def eval_value(expr: ast.Expr, scope: Scope) -> Value:
    """Evaluate a state expression to a ket or a (decomposed) state."""
    if isinstance(expr, ast.NameRef):
        try:
            return scope[expr.name]
        except KeyError:
            raise _fail(expr, f"name {expr.name!r} is not defined") from None
    if isinstance(expr, ast.KetExpr):
        try:
            return KetValue(linalg.make_vector(list(expr.amplitudes)))
        except QuantumGasError as exc:
            raise _fail(expr, f"bad ket: {exc}") from exc
    if isinstance(expr, ast.ProjExpr):
        inner = eval_value(expr.arg, scope)
        if not isinstance(inner, KetValue):
            raise _fail(expr, "proj(...) needs a ket argument")
        matrix = linalg.projector_from_vector(inner.ket)
        return StateValue(((1.0, DensityMatrix(matrix)),))
    if isinstance(expr, ast.MixExpr):
        components: list[tuple[float, DensityMatrix]] = []
        for weight, term in expr.terms:
            value = eval_value(term, scope)
            if not isinstance(value, StateValue):
                raise _fail(expr, "mix(...) terms must be states; wrap kets in proj()")
            for w, state in value.components:
                components.append((weight * w, state))
        total = sum(w for w, _ in components)
        if abs(total - 1.0) > 1e-10 or any(w <= 0 for w, _ in components):
            raise _fail(expr, f"mixture weights must be convex (sum {total!r})")
        return StateValue(tuple(components))
    if isinstance(expr, ast.TensorExpr):
        left = eval_value(expr.left, scope)
        right = eval_value(expr.right, scope)
        if isinstance(left, KetValue) and isinstance(right, KetValue):
            return KetValue(linalg.tensor_vector(left.ket, right.ket))
        if isinstance(left, StateValue) and isinstance(right, StateValue):
            components = tuple(
                (wl * wr, DensityMatrix(linalg.tensor(sl.matrix, sr.matrix)))
                for wl, sl in left.components
                for wr, sr in right.components
            )
            return StateValue(components)
        raise _fail(expr, "tensor(...) needs two kets or two states, not a mix of kinds")
    if isinstance(expr, (ast.IdentityExpr, ast.RotateToExpr)):
        raise _fail(expr, "unitary expressions are only valid in ROTATE statements")
    if isinstance(expr, ast.EigenbasisExpr):
        raise _fail(expr, "eigenbasis-of(...) is only valid in DEFINE_INSTRUMENT")
    raise _fail(expr, f"unsupported expression {type(expr).__name__}")


def eval_projector(expr: ast.Expr, scope: Scope) -> linalg.HermitianMatrix:
    """Evaluate an instrument-element expression to a Hermitian matrix.

    identity(n) and tensor combinations are allowed here because instrument
    elements such as rank-2 projectors are sums over a traced-out factor.
    """
    if isinstance(expr, ast.IdentityExpr):
        return linalg.identity(expr.dim)
    if isinstance(expr, ast.TensorExpr):
        return linalg.tensor(
            eval_projector(expr.left, scope), eval_projector(expr.right, scope)
        )
    value = eval_value(expr, scope)
    if isinstance(value, KetValue):
        return linalg.projector_from_vector(value.ket)
    return value.assembled().matrix


def eval_unitary(expr: ast.Expr, scope: Scope) -> np.ndarray:
    if isinstance(expr, ast.IdentityExpr):
        return np.eye(expr.dim, dtype=complex)
    if isinstance(expr, ast.TensorExpr):
        return np.kron(eval_unitary(expr.left, scope), eval_unitary(expr.right, scope))
    if isinstance(expr, ast.RotateToExpr):
        source = _as_ket(expr.source, scope)
        target = _as_ket(expr.target, scope)
        try:
            return linalg.two_state_rotation(source, target)
        except QuantumGasError as exc:
            raise _fail(expr, f"bad rotation: {exc}") from exc
    raise _fail(expr, "a unitary expression: rotate_to, identity, or tensor of those")


def _as_ket(expr: ast.Expr, scope: Scope) -> linalg.StateVector:
    value = eval_value(expr, scope)
    if isinstance(value, KetValue):
        return value.ket
    # Accept a pure state where a ket is expected: take its top eigenvector.
    decomp = linalg.eig_hermitian(value.assembled().matrix)
    if decomp.eigenvalues[0] < 1.0 - 1e-9:
        raise _fail(expr, "rotate_to endpoints must be kets or pure states")
    return decomp.eigenvectors[0]


def eval_instrument(stmt: ast.DefineInstrument, scope: Scope) -> ProjectiveInstrument:
    if stmt.eigenbasis is not None:
        value = eval_value(stmt.eigenbasis.arg, scope)
        if not isinstance(value, StateValue):
            raise _fail(stmt, "eigenbasis-of(...) needs a state argument")
        weights = [w for w, _ in value.components]
        states = [s for _, s in value.components]
        try:
            _, instrument = mixture_eigen_instrument(weights, states)
        except QuantumGasError as exc:
            raise _fail(stmt, f"bad eigenbasis instrument: {exc}") from exc
        return instrument
    projectors = tuple(
        (label, eval_projector(expr, scope)) for label, expr in stmt.elements
    )
    try:
        return ProjectiveInstrument(projectors)
    except QuantumGasError as exc:
        raise _fail(stmt, f"bad instrument {stmt.name!r}: {exc}") from exc
