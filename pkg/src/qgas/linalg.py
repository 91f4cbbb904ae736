"""Small dense complex Hermitian linear algebra.

Everything in the library ultimately reduces to operations on Hermitian
matrices of dimension 2-8: construction, traces, tensor products, partial
traces, and spectral decomposition.  The eigensolver is a cyclic Jacobi
iteration, which at these sizes converges in a handful of sweeps and lets
us pin a deterministic eigenvector phase convention for reproducible runs.

Tolerance policy: inputs are validated at 1e-12 (HERMITIAN_TOL) while
derived quantities are trusted to 1e-9 (DERIVED_TOL), two decades of slack
between input exactness and accumulated arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvergenceFailureError,
    DimFactorMismatchError,
    DimMismatchError,
    NonFiniteError,
    NonSquareError,
    NotHermitianError,
    NotNormalizedError,
)

HERMITIAN_TOL = 1e-12
DERIVED_TOL = 1e-9
DEGENERACY_GAP = 1e-9

_JACOBI_OFFDIAG_THRESHOLD = 1e-13
_JACOBI_MAX_SWEEPS = 100


def _as_complex_array(entries) -> np.ndarray:
    arr = np.array(entries, dtype=complex)
    if not np.all(np.isfinite(arr.view(float))):
        raise NonFiniteError("matrix entries must be finite")
    return arr


@dataclass(frozen=True)
class HermitianMatrix:
    """Immutable dim x dim complex matrix with the Hermitian invariant.

    Construct through :func:`make_hermitian`; the raw constructor assumes
    already-symmetrized entries.
    """

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.entries, dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        if self.dim != other.dim:
            raise DimMismatchError(f"dims {self.dim} and {other.dim}")
        return HermitianMatrix(self.entries + other.entries)

    def __sub__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        if self.dim != other.dim:
            raise DimMismatchError(f"dims {self.dim} and {other.dim}")
        return HermitianMatrix(self.entries - other.entries)

    def __mul__(self, scalar: float) -> "HermitianMatrix":
        return HermitianMatrix(self.entries * float(scalar))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HermitianMatrix)
            and self.dim == other.dim
            and np.array_equal(self.entries, other.entries)
        )

    def isclose(self, other: "HermitianMatrix", tol: float = DERIVED_TOL) -> bool:
        if self.dim != other.dim:
            return False
        return float(np.max(np.abs(self.entries - other.entries))) <= tol

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim})"


@dataclass(frozen=True)
class StateVector:
    """Unit-norm complex vector (a ket)."""

    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.amplitudes, dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def inner(self, other: "StateVector") -> complex:
        """<self|other>."""
        if self.dim != other.dim:
            raise DimMismatchError(f"dims {self.dim} and {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __repr__(self) -> str:
        return f"StateVector({np.array2string(self.amplitudes, precision=6)})"


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order with an orthonormal eigenbasis."""

    eigenvalues: tuple[float, ...]
    eigenvectors: tuple[StateVector, ...]

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reassemble(self) -> HermitianMatrix:
        """Sum of eigenvalue-weighted eigenprojectors; reproduces the input."""
        dim = self.eigenvectors[0].dim
        acc = np.zeros((dim, dim), dtype=complex)
        for value, vec in zip(self.eigenvalues, self.eigenvectors):
            v = vec.amplitudes
            acc += value * np.outer(v, v.conj())
        return HermitianMatrix((acc + acc.conj().T) / 2)

    def clusters(self, gap: float = DEGENERACY_GAP) -> list[list[int]]:
        """Indices grouped into degenerate clusters (eigenvalue gap < gap)."""
        groups: list[list[int]] = []
        for k, value in enumerate(self.eigenvalues):
            if groups and abs(self.eigenvalues[groups[-1][-1]] - value) < gap:
                groups[-1].append(k)
            else:
                groups.append([k])
        return groups


def make_vector(amplitudes) -> StateVector:
    """Validate and wrap a ket; norm must be 1 within 1e-12."""
    arr = np.array(amplitudes, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(arr.view(float))):
        raise NonFiniteError("vector amplitudes must be finite")
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > HERMITIAN_TOL:
        raise NotNormalizedError(f"norm {norm!r} differs from 1 beyond 1e-12")
    return StateVector(arr)


def make_hermitian(entries) -> HermitianMatrix:
    """Build a HermitianMatrix, symmetrizing away asymmetry up to 1e-12.

    Raises NonSquareError / NonFiniteError / NotHermitianError as applicable.
    """
    arr = _as_complex_array(entries)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NonSquareError(f"shape {arr.shape} is not square")
    if arr.shape[0] < 1:
        raise NonSquareError("dimension must be at least 1")
    asym = float(np.max(np.abs(arr - arr.conj().T)))
    if asym > HERMITIAN_TOL:
        raise NotHermitianError(f"asymmetry {asym:.3e} exceeds 1e-12")
    return HermitianMatrix((arr + arr.conj().T) / 2)


def identity(dim: int) -> HermitianMatrix:
    return HermitianMatrix(np.eye(dim, dtype=complex))


def zero(dim: int) -> HermitianMatrix:
    return HermitianMatrix(np.zeros((dim, dim), dtype=complex))


def trace_product(a: HermitianMatrix, b: HermitianMatrix) -> float:
    """tr(AB), guaranteed real for Hermitian inputs.

    Any imaginary rounding residue is checked against 1e-12 and discarded.
    """
    if a.dim != b.dim:
        raise DimMismatchError(f"dims {a.dim} and {b.dim}")
    value = complex(np.sum(a.entries * b.entries.T))
    if abs(value.imag) > HERMITIAN_TOL:
        raise NotHermitianError(f"trace product residue {value.imag:.3e}")
    return value.real


def tensor(a: HermitianMatrix, b: HermitianMatrix) -> HermitianMatrix:
    """Kronecker product; the first factor is the slow index."""
    return HermitianMatrix(np.kron(a.entries, b.entries))


def tensor_vector(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product of kets, same index convention as :func:`tensor`."""
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


def partial_trace(
    m: HermitianMatrix, dims: tuple[int, int], keep: str = "first"
) -> HermitianMatrix:
    """Trace out one tensor factor of a matrix on a d1*d2-dimensional space.

    ``keep`` selects the surviving factor ("first" or "second"); the trace
    of the result equals the trace of the input.
    """
    d1, d2 = int(dims[0]), int(dims[1])
    if d1 * d2 != m.dim:
        raise DimFactorMismatchError(f"{d1}x{d2} != dim {m.dim}")
    if keep not in ("first", "second"):
        raise ValueError("keep must be 'first' or 'second'")
    blocks = m.entries.reshape(d1, d2, d1, d2)
    if keep == "first":
        reduced = np.einsum("ijkj->ik", blocks)
    else:
        reduced = np.einsum("ijil->jl", blocks)
    return HermitianMatrix((reduced + reduced.conj().T) / 2)


def projector_from_vector(v: StateVector) -> HermitianMatrix:
    """Rank-1 projector |v><v|; idempotent with unit trace."""
    outer = np.outer(v.amplitudes, v.amplitudes.conj())
    return HermitianMatrix((outer + outer.conj().T) / 2)


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Annihilate a[p,q] with a complex Givens rotation, in place."""
    apq = a[p, q]
    mag = abs(apq)
    if mag == 0.0:
        return
    u = apq / mag  # phase, so that apq*conj(u) is real positive
    app = a[p, p].real
    aqq = a[q, q].real
    tau = (aqq - app) / (2.0 * mag)
    if tau >= 0.0:
        t = 1.0 / (tau + np.hypot(1.0, tau))
    else:
        t = -1.0 / (-tau + np.hypot(1.0, tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c

    # Column update A <- A J with J[p,p]=c, J[p,q]=s, J[q,p]=-s*conj(u),
    # J[q,q]=c*conj(u); then row update A <- J+ A.  V accumulates J.
    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * np.conj(u) * col_q
    a[:, q] = s * col_p + c * np.conj(u) * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * u * row_q
    a[q, :] = s * row_p + c * u * row_q

    vcol_p = v[:, p].copy()
    vcol_q = v[:, q].copy()
    v[:, p] = c * vcol_p - s * np.conj(u) * vcol_q
    v[:, q] = s * vcol_p + c * np.conj(u) * vcol_q


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate a global phase so the first non-negligible component is real positive."""
    for x in vec:
        if abs(x) > 1e-6:
            return vec * (np.conj(x) / abs(x))
    return vec


def eig_hermitian(h: HermitianMatrix) -> SpectralDecomposition:
    """Spectral decomposition by cyclic Jacobi sweeps.

    Eigenvalues are sorted in descending order.  Within a degenerate cluster
    (gap below 1e-9) the eigenvectors are re-orthonormalized by Gram-Schmidt,
    so tests must not assert a particular basis inside a cluster.  Each
    eigenvector's phase is fixed by making its first non-negligible component
    real positive.
    """
    n = h.dim
    a = np.array(h.entries, dtype=complex)
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(_JACOBI_MAX_SWEEPS):
        if _offdiag_norm(a) <= _JACOBI_OFFDIAG_THRESHOLD * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > 0.0:
                    _jacobi_rotate(a, v, p, q)
    else:
        raise ConvergenceFailureError(
            f"off-diagonal norm {_offdiag_norm(a):.3e} after "
            f"{_JACOBI_MAX_SWEEPS} sweeps"
        )

    values = np.real(np.diag(a))
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = v[:, order]

    # Re-orthonormalize degenerate clusters; Jacobi already gives an
    # orthonormal basis, Gram-Schmidt just removes residual mixing.
    k = 0
    while k < n:
        j = k + 1
        while j < n and abs(values[j - 1] - values[j]) < DEGENERACY_GAP:
            j += 1
        if j - k > 1:
            block, _ = np.linalg.qr(vectors[:, k:j])
            vectors[:, k:j] = block
        k = j

    kets = tuple(
        StateVector(_fix_phase(vectors[:, k]).copy()) for k in range(n)
    )
    return SpectralDecomposition(tuple(float(x) for x in values), kets)


def two_state_rotation(a: StateVector, b: StateVector) -> np.ndarray:
    """Unitary mapping |a> to |b>, identity on the orthocomplement of span{a,b}.

    For orthogonal real-overlap pairs this is the two-state reflection
    I - |a><a| - |b><b| + |b><a| + |a><b|; in general it is built from the
    Gram-Schmidt frame e1 = a, e2 = (b - <a|b> a)/s with s = ||b - <a|b> a||:

        U = I - |e1><e1| - |e2><e2| + |b><e1| + (s |e1> - conj(c) |e2|)<e2|

    where c = <a|b>.  When a and b are colinear, U applies the relative
    phase on the a-ray and is the identity elsewhere.
    """
    if a.dim != b.dim:
        raise DimMismatchError(f"dims {a.dim} and {b.dim}")
    n = a.dim
    av = a.amplitudes
    bv = b.amplitudes
    c = complex(np.vdot(av, bv))
    residual = bv - c * av
    s = float(np.linalg.norm(residual))
    eye = np.eye(n, dtype=complex)
    if s <= 1e-12:
        phase = c / abs(c)
        return eye + (phase - 1.0) * np.outer(av, av.conj())
    e2 = residual / s
    u = eye - np.outer(av, av.conj()) - np.outer(e2, e2.conj())
    u += np.outer(bv, av.conj())
    u += np.outer(s * av - np.conj(c) * e2, e2.conj())
    return u


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    gram = u.conj().T @ u
    return float(np.max(np.abs(gram - np.eye(u.shape[0])))) <= tol
