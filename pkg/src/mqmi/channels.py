"""Local Kraus channels, measure-and-broadcast, and information deviation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ChannelError, DimensionError, PartitionError
from .measures import MeasureSpec, evaluate, normalize_parts
from .qmatrix import DEFAULT_TOL, MultipartiteState, matrix_to_pairs, pairs_to_matrix
from .states import haar_isometry

TP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPTP map on one party given by Kraus operators ``sum_i K_i^dagger K_i = I``."""

    operators: tuple[np.ndarray, ...]
    target: int = 0

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.operators)
        if not ops:
            raise ChannelError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        for k in ops:
            if k.shape != (d, d):
                raise ChannelError(f"Kraus operators must all be {d}x{d}, got {k.shape}")
            k.setflags(write=False)
        gram = sum(k.conj().T @ k for k in ops)
        defect = float(np.max(np.abs(gram - np.eye(d))))
        if defect > TP_TOL:
            raise ChannelError(f"channel is not trace preserving (defect {defect:.3g})")
        if self.target < 0:
            raise ChannelError(f"target must be a party index, got {self.target}")
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def to_json(self) -> dict:
        return {"target": self.target + 1, "kraus": [matrix_to_pairs(k) for k in self.operators]}

    @classmethod
    def from_json(cls, data: dict) -> "KrausChannel":
        try:
            target = int(data["target"]) - 1
            kraus = [pairs_to_matrix(k) for k in data["kraus"]]
        except (KeyError, TypeError, ValueError, DimensionError) as exc:
            raise ChannelError(f"malformed channel JSON: {exc}") from exc
        return cls(tuple(kraus), target)


def identity_channel(d: int, target: int = 0) -> KrausChannel:
    return KrausChannel((np.eye(d),), target)


def unitary_channel(u: np.ndarray, target: int = 0) -> KrausChannel:
    return KrausChannel((np.asarray(u),), target)


def _weyl_operators(d: int) -> list[np.ndarray]:
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return [
        np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
        for a in range(d)
        for b in range(d)
    ]


def depolarizing(d: int, p: float, target: int = 0) -> KrausChannel:
    """rho -> (1 - p) rho + p tr(rho) I/d, through the d^2 Weyl operators."""
    if not 0.0 <= p <= 1.0:
        raise ChannelError(f"depolarizing probability must lie in [0, 1], got {p}")
    weyl = _weyl_operators(d)
    ops = [np.sqrt(1.0 - p + p / d**2) * weyl[0]]
    ops += [np.sqrt(p) / d * w for w in weyl[1:]]
    return KrausChannel(tuple(ops), target)


def random_local_channel(d: int, kraus_rank: int, seed: int, target: int = 0) -> KrausChannel:
    """Slice a Haar isometry C^d -> C^(d * kraus_rank) into ``kraus_rank`` Kraus operators."""
    if kraus_rank < 1:
        raise ChannelError(f"kraus_rank must be >= 1, got {kraus_rank}")
    rng = np.random.default_rng(seed)
    v = haar_isometry(d * kraus_rank, d, rng)
    ops = tuple(v[i * d:(i + 1) * d, :] for i in range(kraus_rank))
    return KrausChannel(ops, target)


def _split(state: MultipartiteState, party: int) -> tuple[int, int, int]:
    dims = state.dims
    if not 0 <= party < state.n:
        raise PartitionError(f"party {party} outside 0..{state.n - 1}")
    before = int(np.prod(dims[:party])) if party else 1
    after = int(np.prod(dims[party + 1:])) if party + 1 < state.n else 1
    return before, dims[party], after


def _conjugate_local(t: np.ndarray, k: np.ndarray) -> np.ndarray:
    # t has shape (B, d, A, B, d, A); returns (I x K x I) t (I x K x I)^dagger
    return np.einsum("ij,ajbckd,lk->aibcld", k, t, k.conj())


def apply_local(channel: KrausChannel, state: MultipartiteState) -> MultipartiteState:
    before, d, after = _split(state, channel.target)
    if d != channel.dim:
        raise DimensionError(
            f"channel acts on dimension {channel.dim} but party {channel.target} has dimension {d}"
        )
    t = state.matrix.reshape(before, d, after, before, d, after)
    out = sum(_conjugate_local(t, k) for k in channel.operators)
    side = state.dim
    return MultipartiteState(out.reshape(side, side), state.dims, state.labels)


def measure_and_broadcast(
    state: MultipartiteState,
    party: int,
    basis,
    owner_registers: bool = True,
    public_register: bool = True,
) -> MultipartiteState:
    """Projectively measure ``party`` and publish the outcome as classical registers.

    ``basis`` holds the measurement vectors as columns. The output is
    ``sum_o P_o rho P_o (x) |o><o|`` on every register: with
    ``owner_registers`` one register per original party is appended (party
    ``i`` owns register ``n + i``), and with ``public_register`` one more
    copy goes last for the public record, which an eavesdropper also holds.
    Use :func:`broadcast_blocks` to group owner registers with their parties.
    """
    before, d, after = _split(state, party)
    b = np.asarray(basis, dtype=complex)
    if b.shape != (d, d):
        raise DimensionError(f"basis must be {d}x{d} for party {party}, got {b.shape}")
    if float(np.max(np.abs(b.conj().T @ b - np.eye(d)))) > TP_TOL:
        raise ChannelError("measurement basis is not orthonormal")
    copies = (state.n if owner_registers else 0) + (1 if public_register else 0)
    reg_side = d**copies
    side = state.dim
    t = state.matrix.reshape(before, d, after, before, d, after)
    out = np.zeros((side * reg_side, side * reg_side), dtype=complex)
    # index of |o o ... o> in the register space
    stride = sum(d**j for j in range(copies))
    for o in range(d):
        proj = np.outer(b[:, o], b[:, o].conj())
        branch = _conjugate_local(t, proj).reshape(side, side)
        r = o * stride
        out[r::reg_side, r::reg_side] = branch
    return MultipartiteState(out, state.dims + (d,) * copies)


def broadcast_blocks(n: int, parts=None, owner_registers: bool = True):
    """Blocks and conditioning set for a state produced by :func:`measure_and_broadcast`.

    Each block of the original ``n`` parties is joined with its owners'
    registers; the public register is returned as the conditioning set.
    Both register kinds are assumed present unless ``owner_registers`` is off.
    """
    base = normalize_parts(parts, n)
    if owner_registers:
        blocks = tuple(tuple(sorted(b | {n + i for i in b})) for b in base)
        public = 2 * n
    else:
        blocks = tuple(tuple(sorted(b)) for b in base)
        public = n
    return blocks, (public,)


def deviation(
    state: MultipartiteState,
    channel: KrausChannel,
    measure: MeasureSpec,
    tol: float = DEFAULT_TOL,
) -> float:
    """|Q(channel(rho)) - Q(rho)| for the quantity Q named by ``measure``."""
    return abs(evaluate(apply_local(channel, state), measure, tol) - evaluate(state, measure, tol))


def local_unitary_product(unitaries: Sequence[np.ndarray]) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for u in unitaries:
        out = np.kron(out, u)
    return out
