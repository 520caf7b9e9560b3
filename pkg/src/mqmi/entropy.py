"""Von Neumann entropy, binary entropy, relative entropy and the basic entropy inequalities.

All logarithms are base 2. Entropies are evaluated from eigenvalues only;
eigenvalues in ``[-tol, 0)`` are clamped to zero before the logarithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DimensionError, InvalidStateError, PartitionError
from .qmatrix import DEFAULT_TOL, MultipartiteState, reduced_matrix, subsystem_set

# Returned by relative_entropy when supp(tau) is not inside supp(sigma).
INFINITE = math.inf

# sigma eigenvalues at or below this are treated as its numerical kernel
KERNEL_CUTOFF = 1e-12


def shannon_bits(probs: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """-sum p log2 p over clamped probabilities, with 0 log 0 = 0."""
    p = np.asarray(probs, dtype=float)
    if p.size and p.min() < -tol:
        raise InvalidStateError(f"negative eigenvalue {p.min():.3g} below -{tol:g}")
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def _matrix_entropy(mat: np.ndarray, tol: float) -> float:
    w = np.linalg.eigvalsh((mat + mat.conj().T) / 2)
    return shannon_bits(w, tol)


def _check_density(mat: np.ndarray, tol: float) -> None:
    if float(np.max(np.abs(mat - mat.conj().T))) > tol:
        raise InvalidStateError("state is not Hermitian")
    if abs(np.trace(mat) - 1.0) > tol:
        raise InvalidStateError("state does not have unit trace")


def von_neumann(state: MultipartiteState, tol: float = DEFAULT_TOL) -> float:
    mat = state.matrix
    _check_density(mat, tol)
    s = _matrix_entropy(mat, tol)
    # rounding can push a pure state a hair below zero
    return max(s, 0.0)


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"binary entropy needs 0 <= p <= 1, got {p}")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def relative_entropy(
    tau: MultipartiteState, sigma: MultipartiteState, tol: float = DEFAULT_TOL
) -> float:
    """D(tau || sigma) in bits, or :data:`INFINITE` when the support condition fails.

    Evaluated in sigma's eigenbasis: ``tr(tau log tau) - sum_j <v_j|tau|v_j> log mu_j``.
    Support failure means tau puts weight above ``tol`` on eigenvectors of sigma
    whose eigenvalues are at or below :data:`KERNEL_CUTOFF`.
    """
    if tau.dims != sigma.dims:
        raise DimensionError(f"dims differ: {tau.dims} vs {sigma.dims}")
    s_tau = _matrix_entropy(tau.matrix, tol)
    mu, v = np.linalg.eigh((sigma.matrix + sigma.matrix.conj().T) / 2)
    weights = np.real(np.einsum("ij,ik,kj->j", v.conj(), tau.matrix, v))
    kernel = mu <= KERNEL_CUTOFF
    if weights[kernel].sum() > tol:
        return INFINITE
    cross = -float(np.sum(weights[~kernel] * np.log2(mu[~kernel])))
    return cross - s_tau


class EntropyTable:
    """Memoized entropies S(X) of subsets X of a state's parties.

    The empty set has entropy 0, standing in for the trivial system.
    Keys are frozensets of 0-based party indices. Hermiticity and trace are
    checked up front; a negative eigenvalue below -tol raises when met.
    """

    def __init__(self, state: MultipartiteState, tol: float = DEFAULT_TOL):
        _check_density(state.matrix, tol)
        self.state = state
        self.tol = tol
        self._cache: dict[frozenset, float] = {frozenset(): 0.0}

    @property
    def n(self) -> int:
        return self.state.n

    def __call__(self, parties: Iterable[int]) -> float:
        key = frozenset(parties)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        keep = subsystem_set(key, self.state.n)
        mat = reduced_matrix(self.state.matrix, self.state.dims, keep)
        value = max(_matrix_entropy(mat, self.tol), 0.0)
        self._cache[key] = value
        return value

    def __len__(self) -> int:
        return len(self._cache)


def as_table(obj, tol: float = DEFAULT_TOL) -> EntropyTable:
    return obj if isinstance(obj, EntropyTable) else EntropyTable(obj, tol)


@dataclass(frozen=True)
class InequalityReport:
    """Signed residuals (right side minus left side); nonnegative means satisfied.

    The two entries involving Z are None when Z is empty.
    """

    araki_lieb_xy: float
    araki_lieb_yx: float
    subadditivity: float
    weak_monotonicity: float | None
    strong_subadditivity: float | None

    def as_dict(self) -> dict:
        return {
            "araki_lieb_xy": self.araki_lieb_xy,
            "araki_lieb_yx": self.araki_lieb_yx,
            "subadditivity": self.subadditivity,
            "weak_monotonicity": self.weak_monotonicity,
            "strong_subadditivity": self.strong_subadditivity,
        }

    def worst(self) -> float:
        return min(v for v in self.as_dict().values() if v is not None)


def basic_inequality_report(state, x, y, z=(), tol: float = DEFAULT_TOL) -> InequalityReport:
    """Residuals of
    S(X) - S(Y) <= S(XY) (and with X, Y swapped), S(XY) <= S(X) + S(Y),
    S(X) + S(Y) <= S(XZ) + S(YZ) and S(Y) + S(XYZ) <= S(XY) + S(YZ).
    """
    table = as_table(state, tol)
    x, y, z = (frozenset(subsystem_set(s, table.n)) for s in (x, y, z))
    if not x or not y:
        raise PartitionError("X and Y must be nonempty")
    if x & y or x & z or y & z:
        raise PartitionError("X, Y and Z must be disjoint")
    S = table
    sx, sy, sxy = S(x), S(y), S(x | y)
    al_xy = sxy - (sx - sy)
    al_yx = sxy - (sy - sx)
    sub = sx + sy - sxy
    if not z:
        return InequalityReport(al_xy, al_yx, sub, None, None)
    weak = S(x | z) + S(y | z) - sx - sy
    ssa = sxy + S(y | z) - sy - S(x | y | z)
    return InequalityReport(al_xy, al_yx, sub, weak, ssa)
