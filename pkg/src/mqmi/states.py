"""Named states and seeded random sampling.

Every random draw uses ``numpy.random.default_rng(seed)`` (PCG64) created
inside the call, so a seed fully determines the returned state.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import DimensionError, SpecError
from .qmatrix import MultipartiteState, pairs_to_matrix

KINDS = (
    "ggz",
    "dicke",
    "antisym3",
    "cluster4",
    "hs4",
    "product",
    "pure_vector",
    "dense",
    "random_pure",
    "random_mixed",
)


@dataclass(frozen=True)
class StateSpec:
    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params)}

    @classmethod
    def from_dict(cls, data: dict) -> "StateSpec":
        if not isinstance(data, dict) or "kind" not in data:
            raise SpecError('state spec must be an object with a "kind" field')
        params = data.get("params", {})
        if not isinstance(params, dict):
            raise SpecError('"params" must be an object')
        return cls(str(data["kind"]), dict(params))


def computational_ket(levels: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    psi = np.zeros(int(np.prod(dims)), dtype=complex)
    index = 0
    for x, d in zip(levels, dims):
        index = index * d + int(x)
    psi[index] = 1.0
    return psi


def ggz(n: int, p: float = 0.5, phi: float = 0.0) -> MultipartiteState:
    """sqrt(p)|0...0> + e^{i phi} sqrt(1-p)|1...1> on n qubits."""
    if n < 2:
        raise SpecError(f"ggz needs n >= 2, got {n}")
    if not 0.0 <= p <= 1.0:
        raise SpecError(f"ggz needs 0 <= p <= 1, got {p}")
    dims = (2,) * n
    psi = math.sqrt(p) * computational_ket([0] * n, dims)
    psi = psi + cmath.exp(1j * phi) * math.sqrt(1.0 - p) * computational_ket([1] * n, dims)
    return MultipartiteState.from_ket(psi, dims)


def dicke(n: int, r: int) -> MultipartiteState:
    """Uniform superposition of the n-qubit kets with Hamming weight r."""
    if n < 1 or not 0 <= r <= n:
        raise SpecError(f"dicke needs n >= 1 and 0 <= r <= n, got n={n}, r={r}")
    dims = (2,) * n
    psi = np.zeros(2**n, dtype=complex)
    for ones in itertools.combinations(range(n), r):
        psi += computational_ket([1 if i in ones else 0 for i in range(n)], dims)
    return MultipartiteState.from_ket(psi, dims)


def antisym3() -> MultipartiteState:
    """Totally antisymmetric three-qutrit state; labels 1, 2, 3 map to levels 0, 1, 2."""
    dims = (3, 3, 3)
    psi = np.zeros(27, dtype=complex)
    for perm in itertools.permutations(range(3)):
        inversions = sum(a > b for a, b in itertools.combinations(perm, 2))
        sign = -1.0 if inversions % 2 else 1.0
        psi += sign * computational_ket(perm, dims)
    return MultipartiteState.from_ket(psi, dims)


def cluster4() -> MultipartiteState:
    dims = (2,) * 4
    psi = (
        computational_ket([0, 0, 0, 0], dims)
        + computational_ket([0, 0, 1, 1], dims)
        + computational_ket([1, 1, 0, 0], dims)
        - computational_ket([1, 1, 1, 1], dims)
    )
    return MultipartiteState.from_ket(psi, dims)


def hs4() -> MultipartiteState:
    dims = (2,) * 4
    w = cmath.exp(2j * math.pi / 3)

    def k(*bits):
        return computational_ket(bits, dims)

    psi = (
        k(0, 0, 1, 1)
        + k(1, 1, 0, 0)
        + w * (k(1, 0, 1, 0) + k(0, 1, 0, 1))
        + w**2 * (k(1, 0, 0, 1) + k(0, 1, 1, 0))
    )
    return MultipartiteState.from_ket(psi, dims)


def product(
    dims: Sequence[int] | None = None,
    levels: Sequence[int] | None = None,
    mixed: bool = False,
) -> MultipartiteState:
    """Product state: computational basis levels, or maximally mixed factors when ``mixed``."""
    if levels is None and dims is None:
        raise SpecError("product needs dims or levels")
    if dims is None:
        dims = [2] * len(levels)
    dims = tuple(int(d) for d in dims)
    if any(d < 2 for d in dims):
        raise SpecError(f"product dims must be >= 2, got {dims}")
    if mixed:
        side = int(np.prod(dims))
        return MultipartiteState(np.eye(side) / side, dims)
    if levels is None:
        levels = [0] * len(dims)
    if len(levels) != len(dims) or any(not 0 <= x < d for x, d in zip(levels, dims)):
        raise SpecError(f"levels {list(levels)} do not fit dims {dims}")
    return MultipartiteState.from_ket(computational_ket(levels, dims), dims)


def _check_dims(dims) -> tuple[int, ...]:
    try:
        dims = tuple(int(d) for d in dims)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"bad dims {dims!r}") from exc
    if not dims or any(d < 2 for d in dims):
        raise SpecError(f"dims must be a nonempty list of integers >= 2, got {dims}")
    return dims


def random_ket(dim: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)


def random_pure(dims: Sequence[int], seed: int) -> MultipartiteState:
    """Haar-random pure state: a normalized complex Gaussian vector."""
    dims = _check_dims(dims)
    rng = np.random.default_rng(seed)
    return MultipartiteState.from_ket(random_ket(int(np.prod(dims)), rng), dims)


def random_mixed(dims: Sequence[int], rank: int, seed: int) -> MultipartiteState:
    """Induced-measure mixed state: trace out a ``rank``-dimensional ancilla of a Haar pure state."""
    dims = _check_dims(dims)
    side = int(np.prod(dims))
    if not 1 <= rank <= side:
        raise SpecError(f"rank must lie in 1..{side}, got {rank}")
    rng = np.random.default_rng(seed)
    psi = random_ket(side * rank, rng)
    if rank == 1:
        return MultipartiteState.from_ket(psi, dims)
    g = psi.reshape(side, rank)
    rho = g @ g.conj().T
    return MultipartiteState(rho / np.trace(rho).real, dims)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from the QR decomposition of a complex Ginibre matrix, phases fixed."""
    return haar_isometry(d, d, rng)


def haar_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """``rows x cols`` matrix with orthonormal columns, Haar distributed."""
    z = (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def _param(params: dict, name: str, cast, default=None, required=False):
    if name not in params:
        if required:
            raise SpecError(f"missing parameter {name!r}")
        return default
    try:
        return cast(params[name])
    except (TypeError, ValueError) as exc:
        raise SpecError(f"bad value for {name!r}: {params[name]!r}") from exc


def _complex_vector(values) -> np.ndarray:
    out = []
    for z in values:
        if isinstance(z, (list, tuple)):
            if len(z) != 2:
                raise SpecError(f"amplitude must be [re, im], got {z!r}")
            out.append(complex(float(z[0]), float(z[1])))
        else:
            out.append(complex(float(z)))
    return np.array(out, dtype=complex)


def build(spec: StateSpec | dict) -> MultipartiteState:
    if isinstance(spec, dict):
        spec = StateSpec.from_dict(spec)
    kind, p = spec.kind, spec.params
    if kind == "ggz":
        return ggz(
            _param(p, "n", int, required=True),
            _param(p, "p", float, 0.5),
            _param(p, "phi", float, 0.0),
        )
    if kind == "dicke":
        return dicke(_param(p, "n", int, required=True), _param(p, "r", int, required=True))
    if kind == "antisym3":
        return antisym3()
    if kind == "cluster4":
        return cluster4()
    if kind == "hs4":
        return hs4()
    if kind == "product":
        dims = p.get("dims")
        levels = p.get("levels")
        return product(
            None if dims is None else _check_dims(dims),
            None if levels is None else [int(x) for x in levels],
            bool(p.get("mixed", False)),
        )
    if kind == "pure_vector":
        dims = _check_dims(_param(p, "dims", list, required=True))
        amps = _complex_vector(_param(p, "amplitudes", list, required=True))
        if amps.size != int(np.prod(dims)):
            raise DimensionError(f"{amps.size} amplitudes do not fit dims {dims}")
        return MultipartiteState.from_ket(amps, dims)
    if kind == "dense":
        dims = _check_dims(_param(p, "dims", list, required=True))
        return MultipartiteState(pairs_to_matrix(_param(p, "matrix", list, required=True)), dims)
    if kind == "random_pure":
        return random_pure(_param(p, "dims", list, required=True), _param(p, "seed", int, 0))
    if kind == "random_mixed":
        dims = _param(p, "dims", list, required=True)
        rank = _param(p, "rank", int, int(np.prod(_check_dims(dims))))
        return random_mixed(dims, rank, _param(p, "seed", int, 0))
    raise SpecError(f"unknown state kind {kind!r}; expected one of {', '.join(KINDS)}")


def reference_table_specs(p: float = 0.5, phi: float = 0.0) -> list[tuple[str, StateSpec]]:
    """Rows of the reference table of named states, in order; gGHZ rows take ``p`` and ``phi``."""

    def g(n):
        return (f"gGHZ_{n}", StateSpec("ggz", {"n": n, "p": p, "phi": phi}))

    return [
        g(2),
        g(3),
        ("D_3^1", StateSpec("dicke", {"n": 3, "r": 1})),
        ("psi_as", StateSpec("antisym3")),
        g(4),
        ("D_4^1", StateSpec("dicke", {"n": 4, "r": 1})),
        ("D_4^2", StateSpec("dicke", {"n": 4, "r": 2})),
        ("C_4", StateSpec("cluster4")),
        ("HS_4", StateSpec("hs4")),
        g(5),
        ("D_5^1", StateSpec("dicke", {"n": 5, "r": 1})),
        ("D_5^2", StateSpec("dicke", {"n": 5, "r": 2})),
    ]
