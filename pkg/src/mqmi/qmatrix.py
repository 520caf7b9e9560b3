"""Dense density matrices on multipartite Hilbert spaces.

Party 0 is the most significant tensor factor, so the computational ket
``|x_0 x_1 ... x_{n-1}>`` sits at row ``sum_i x_i * prod_{j>i} d_j``.
Party indices are 0-based throughout the Python API; the CLI and the JSON
formats translate to the 1-based labels X_1 ... X_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, InvalidStateError, PartitionError

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class MultipartiteState:
    """Density matrix together with its ordered subsystem dimensions.

    The matrix is copied to a read-only complex array on construction.
    Only the shape is checked here; use :func:`validate` for the
    hermiticity / positivity / trace checks.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise DimensionError("a state needs at least one subsystem")
        if any(d < 1 for d in dims):
            raise DimensionError(f"subsystem dimensions must be positive, got {dims}")
        mat = np.array(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"density matrix must be square, got shape {mat.shape}")
        side = int(np.prod(dims))
        if mat.shape[0] != side:
            raise DimensionError(
                f"matrix side {mat.shape[0]} does not match product of dims {dims} = {side}"
            )
        if self.labels is not None and len(self.labels) != len(dims):
            raise DimensionError("one label per subsystem is required")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", dims)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_ket(cls, psi, dims: Sequence[int], labels=None) -> "MultipartiteState":
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise InvalidStateError("zero state vector")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()), tuple(dims), labels)

    def __repr__(self) -> str:
        return f"MultipartiteState(dims={self.dims})"


@dataclass(frozen=True)
class ValidationReport:
    hermiticity_defect: float
    min_eigenvalue: float
    trace_defect: float
    dims_consistent: bool
    tol: float
    messages: tuple[str, ...] = field(default=())

    @property
    def valid(self) -> bool:
        return (
            self.dims_consistent
            and self.hermiticity_defect <= self.tol
            and self.min_eigenvalue >= -self.tol
            and self.trace_defect <= self.tol
        )


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order; ``eigenvectors[:, i]`` pairs with ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def validate(state: MultipartiteState, tol: float = DEFAULT_TOL) -> ValidationReport:
    mat = state.matrix
    herm = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    # eigvalsh reads one triangle only, so symmetrize before asking for the spectrum
    min_eig = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2)[0])
    tr = np.trace(mat)
    trace_defect = float(abs(tr - 1.0))
    dims_ok = int(np.prod(state.dims)) == mat.shape[0]
    msgs = []
    if herm > tol:
        msgs.append(f"hermiticity defect {herm:.3g} exceeds {tol:g}")
    if min_eig < -tol:
        msgs.append(f"minimum eigenvalue {min_eig:.3g} below -{tol:g}")
    if trace_defect > tol:
        msgs.append(f"trace defect {trace_defect:.3g} exceeds {tol:g}")
    return ValidationReport(herm, min_eig, trace_defect, dims_ok, tol, tuple(msgs))


def require_valid(state: MultipartiteState, tol: float = DEFAULT_TOL) -> None:
    report = validate(state, tol)
    if not report.valid:
        raise InvalidStateError("; ".join(report.messages))


def hermitian_eig(matrix, tol: float = DEFAULT_TOL) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Raises InvalidStateError when the input is further than ``tol``
    (max entrywise) from its own conjugate transpose.
    """
    mat = np.asarray(matrix.matrix if isinstance(matrix, MultipartiteState) else matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {mat.shape}")
    defect = float(np.max(np.abs(mat - mat.conj().T)))
    if defect > tol:
        raise InvalidStateError(f"matrix is not Hermitian (defect {defect:.3g})")
    w, v = np.linalg.eigh((mat + mat.conj().T) / 2)
    return Spectrum(w[::-1].copy(), v[:, ::-1].copy())


def eigenvalues(state: MultipartiteState) -> np.ndarray:
    """Descending eigenvalues of the state's matrix, no eigenvectors."""
    mat = state.matrix
    return np.linalg.eigvalsh((mat + mat.conj().T) / 2)[::-1]


def subsystem_set(indices: Iterable[int], n: int) -> tuple[int, ...]:
    """Normalize a collection of party indices into a sorted tuple, checking range."""
    idx = tuple(sorted({int(i) for i in indices}))
    bad = [i for i in idx if i < 0 or i >= n]
    if bad:
        raise PartitionError(f"party indices {bad} outside 0..{n - 1}")
    return idx


def tensor(a: MultipartiteState, b: MultipartiteState) -> MultipartiteState:
    labels = None
    if a.labels is not None and b.labels is not None:
        labels = a.labels + b.labels
    return MultipartiteState(np.kron(a.matrix, b.matrix), a.dims + b.dims, labels)


def tensor_all(states: Sequence[MultipartiteState]) -> MultipartiteState:
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


def permute_subsystems(state: MultipartiteState, perm: Sequence[int]) -> MultipartiteState:
    """Reorder parties so that new party ``i`` is old party ``perm[i]``."""
    n = state.n
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise PartitionError(f"{perm} is not a permutation of 0..{n - 1}")
    dims = state.dims
    t = state.matrix.reshape(dims + dims)
    t = t.transpose(perm + [p + n for p in perm])
    new_dims = tuple(dims[p] for p in perm)
    side = state.dim
    labels = None if state.labels is None else tuple(state.labels[p] for p in perm)
    return MultipartiteState(t.reshape(side, side), new_dims, labels)


def inverse_permutation(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def reduced_matrix(matrix: np.ndarray, dims: tuple[int, ...], keep: tuple[int, ...]) -> np.ndarray:
    """Partial trace on raw arrays; ``keep`` must be sorted, unique and in range."""
    n = len(dims)
    if len(keep) == n:
        return matrix
    traced = [i for i in range(n) if i not in keep]
    dk = int(np.prod([dims[i] for i in keep]))
    dt = int(np.prod([dims[i] for i in traced]))
    t = matrix.reshape(dims + dims)
    order = list(keep) + traced
    t = t.transpose(order + [i + n for i in order]).reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def partial_trace(state: MultipartiteState, keep: Iterable[int]) -> MultipartiteState:
    """Reduced state on ``keep``, preserving the original relative order of parties."""
    keep = subsystem_set(keep, state.n)
    if not keep:
        raise PartitionError("partial trace needs at least one kept subsystem")
    mat = reduced_matrix(state.matrix, state.dims, keep)
    labels = None if state.labels is None else tuple(state.labels[i] for i in keep)
    return MultipartiteState(mat, tuple(state.dims[i] for i in keep), labels)


def apply_unitary(state: MultipartiteState, unitary: np.ndarray) -> MultipartiteState:
    u = np.asarray(unitary, dtype=complex)
    if u.shape != state.matrix.shape:
        raise DimensionError(f"unitary shape {u.shape} does not match state {state.matrix.shape}")
    return MultipartiteState(u @ state.matrix @ u.conj().T, state.dims, state.labels)


def local_operator(op: np.ndarray, party: int, dims: Sequence[int]) -> np.ndarray:
    """Embed ``op`` acting on ``party`` as I ⊗ op ⊗ I on the full space."""
    before = int(np.prod(dims[:party])) if party > 0 else 1
    after = int(np.prod(dims[party + 1:])) if party + 1 < len(dims) else 1
    return np.kron(np.kron(np.eye(before), op), np.eye(after))


def matrix_to_pairs(matrix) -> list:
    """Complex matrix as nested ``[re, im]`` pairs, the JSON wire format."""
    m = np.asarray(matrix, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def pairs_to_matrix(rows) -> np.ndarray:
    """Inverse of :func:`matrix_to_pairs`; bare real numbers are accepted as entries."""
    try:
        return np.array([[_to_complex(z) for z in row] for row in rows], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise DimensionError(f"malformed complex matrix: {exc}") from exc


def _to_complex(z) -> complex:
    if isinstance(z, (list, tuple)):
        if len(z) != 2:
            raise ValueError(f"complex entry must be [re, im], got {z!r}")
        return complex(float(z[0]), float(z[1]))
    return complex(float(z))
