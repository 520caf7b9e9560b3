"""Multiparty mutual-information measures built from subset entropies.

Every measure acts on *blocks*: disjoint groups of 0-based party indices.
Passing ``parts=None`` means one block per party. Parties not covered by
any block are traced out, so grouped and discarded variants of a measure
need no special handling.

Linear entropic expressions are kept as maps ``{party set: coefficient}``
and summed with ``math.fsum``. The sum is then independent of term order,
which makes block relabelings bit-for-bit exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .entropy import EntropyTable, as_table, relative_entropy
from .errors import PartitionError
from .qmatrix import (
    DEFAULT_TOL,
    partial_trace,
    permute_subsystems,
    subsystem_set,
    tensor_all,
)

Blocks = tuple[frozenset, ...]

T_FORMS = ("entropic", "relative", "chain", "regions")
S_FORMS = ("entropic", "chain", "regions", "complement")


def normalize_parts(parts, n: int) -> Blocks:
    """Check blocks are nonempty, in range and pairwise disjoint."""
    if parts is None:
        return tuple(frozenset([i]) for i in range(n))
    blocks = []
    seen: set[int] = set()
    for part in parts:
        if isinstance(part, (int, np.integer)):
            part = [part]
        block = frozenset(subsystem_set(part, n))
        if not block:
            raise PartitionError("blocks must be nonempty")
        if block & seen:
            raise PartitionError(f"block {sorted(block)} overlaps another block")
        seen |= block
        blocks.append(block)
    if not blocks:
        raise PartitionError("at least one block is required")
    return tuple(blocks)


def _cond_set(cond, n: int, blocks: Blocks) -> frozenset:
    y = frozenset(subsystem_set(cond or (), n))
    if any(b & y for b in blocks):
        raise PartitionError("conditioning set overlaps the blocks")
    return y


def _union(blocks: Iterable[frozenset]) -> frozenset:
    out: frozenset = frozenset()
    for b in blocks:
        out = out | b
    return out


def _add(coeffs: dict, key: frozenset, c: float) -> None:
    coeffs[key] = coeffs.get(key, 0.0) + c


def evaluate_coefficients(table: EntropyTable, coeffs: dict) -> float:
    return math.fsum(c * table(key) for key, c in coeffs.items() if c != 0)


def mutual_information(state, a, b, cond=(), tol: float = DEFAULT_TOL) -> float:
    """I(A:B|C) = S(AC) + S(BC) - S(C) - S(ABC); with C empty this is I(A:B)."""
    S = as_table(state, tol)
    a, b, c = (frozenset(subsystem_set(x, S.n)) for x in (a, b, cond))
    return math.fsum([S(a | c), S(b | c), -S(c), -S(a | b | c)])


# ---------------------------------------------------------------------------
# generalized conditional mutual information


def gcmi_coefficients(blocks: Blocks, cond: frozenset) -> dict:
    coeffs: dict = {}
    _add(coeffs, cond, -1.0)
    m = len(blocks)
    for j in range(1, m + 1):
        sign = 1.0 if j % 2 else -1.0
        for combo in itertools.combinations(blocks, j):
            _add(coeffs, _union(combo) | cond, sign)
    return coeffs


def gcmi(state, blocks, cond=(), tol: float = DEFAULT_TOL) -> float:
    """I(X_1 : ... : X_m | Y) by inclusion-exclusion over the blocks, each joined with Y.

    One block gives the conditional entropy S(X|Y); an empty ``cond`` plays the
    role of the trivial system with zero entropy. The value can be negative.
    """
    S = as_table(state, tol)
    bl = normalize_parts(blocks, S.n)
    y = _cond_set(cond, S.n, bl)
    return evaluate_coefficients(S, gcmi_coefficients(bl, y))


# ---------------------------------------------------------------------------
# the M_k family


def mqmi_coefficients(blocks: Blocks, k: int, cond: frozenset = frozenset()) -> dict:
    m = len(blocks)
    if not 1 <= k <= m:
        raise PartitionError(f"k must lie in 1..{m}, got {k}")
    coeffs: dict = {}
    for combo in itertools.combinations(blocks, k):
        _add(coeffs, _union(combo) | cond, 1.0)
    _add(coeffs, _union(blocks) | cond, -float(comb(m - 1, k - 1)))
    if cond:
        # every conditioned subset term carries -S(Y); C(m, k) - C(m-1, k-1) of them survive
        _add(coeffs, cond, -float(comb(m - 1, k)))
    return coeffs


def mqmi(state, parts=None, k: int = 1, cond=(), tol: float = DEFAULT_TOL) -> float:
    """M_k over the blocks: sum of k-block entropies minus C(m-1, k-1) S(all).

    A nonempty ``cond`` conditions every entropy on Y (each S(X) becomes
    S(XY) - S(Y)); for a classical Y this is the Y-average of M_k.
    """
    S = as_table(state, tol)
    bl = normalize_parts(parts, S.n)
    y = _cond_set(cond, S.n, bl)
    return evaluate_coefficients(S, mqmi_coefficients(bl, k, y))


def mqmi_profile(state, parts=None, cond=(), tol: float = DEFAULT_TOL) -> list[float]:
    """[M_1, ..., M_m], sharing one entropy table across all k."""
    S = as_table(state, tol)
    bl = normalize_parts(parts, S.n)
    y = _cond_set(cond, S.n, bl)
    return [evaluate_coefficients(S, mqmi_coefficients(bl, k, y)) for k in range(1, len(bl) + 1)]


def combined(state, parts, weights: Sequence[float], tol: float = DEFAULT_TOL) -> float:
    """Convex combination sum_k weights[k-1] * M_k."""
    S = as_table(state, tol)
    bl = normalize_parts(parts, S.n)
    w = np.asarray(weights, dtype=float)
    if w.shape != (len(bl),):
        raise PartitionError(f"need {len(bl)} weights, got {w.size}")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be nonnegative and sum to 1")
    profile = mqmi_profile(S, bl)
    return math.fsum(float(wk) * mk for wk, mk in zip(w, profile))


def common_information(state, parts=None, tol: float = DEFAULT_TOL) -> float:
    """C = sum_k (-1)^(k+1) M_k; may be negative."""
    profile = mqmi_profile(state, parts, tol=tol)
    return math.fsum((1.0 if k % 2 == 0 else -1.0) * mk for k, mk in enumerate(profile))


# ---------------------------------------------------------------------------
# total correlation and dual total correlation in their equivalent forms


def _region_values(S: EntropyTable, bl: Blocks) -> dict[tuple[int, ...], float]:
    """Value of every Venn region: blocks J jointly, conditioned on all other blocks."""
    out = {}
    m = len(bl)
    for j in range(1, m + 1):
        for idx in itertools.combinations(range(m), j):
            inside = tuple(bl[i] for i in idx)
            outside = _union(bl[i] for i in range(m) if i not in idx)
            out[idx] = evaluate_coefficients(S, gcmi_coefficients(inside, outside))
    return out


def _relative_form(S: EntropyTable, bl: Blocks) -> float:
    state = S.state
    keep = sorted(_union(bl))
    reduced = partial_trace(state, keep) if len(keep) < state.n else state
    position = {p: i for i, p in enumerate(keep)}
    order = [position[p] for b in bl for p in sorted(b)]
    tau = permute_subsystems(reduced, order)
    sigma = tensor_all([partial_trace(state, sorted(b)) for b in bl])
    return relative_entropy(tau, sigma, S.tol)


def total_correlation(state, parts=None, form: str = "entropic", tol: float = DEFAULT_TOL) -> float:
    """T = M_1 by one of the forms in :data:`T_FORMS`."""
    S = as_table(state, tol)
    bl = normalize_parts(parts, S.n)
    m = len(bl)
    if form == "entropic":
        return math.fsum([S(b) for b in bl] + [-S(_union(bl))])
    if form == "relative":
        return _relative_form(S, bl)
    if form == "chain":
        return math.fsum(
            mutual_information(S, bl[k], _union(bl[k + 1:])) for k in range(m - 1)
        )
    if form == "regions":
        regions = _region_values(S, bl)
        return math.fsum((len(idx) - 1) * v for idx, v in regions.items() if len(idx) >= 2)
    raise ValueError(f"unknown form {form!r}; expected one of {T_FORMS}")


def dual_total_correlation(
    state, parts=None, form: str = "entropic", tol: float = DEFAULT_TOL
) -> float:
    """S = M_{m-1} by one of the forms in :data:`S_FORMS`."""
    S = as_table(state, tol)
    bl = normalize_parts(parts, S.n)
    m = len(bl)
    everything = _union(bl)
    if form == "entropic":
        return math.fsum([S(everything - b) for b in bl] + [-(m - 1) * S(everything)])
    if form == "chain":
        if m < 2:
            return 0.0
        terms = [mutual_information(S, bl[0], _union(bl[1:]))]
        for k in range(1, m - 1):
            terms.append(mutual_information(S, bl[k], _union(bl[k + 1:]), _union(bl[:k])))
        return math.fsum(terms)
    if form == "regions":
        regions = _region_values(S, bl)
        return math.fsum(v for idx, v in regions.items() if len(idx) >= 2)
    if form == "complement":
        # entropy of the whole minus the information held exclusively by each block
        exclusive = [S(everything) - S(everything - b) for b in bl]
        return math.fsum([S(everything)] + [-x for x in exclusive])
    raise ValueError(f"unknown form {form!r}; expected one of {S_FORMS}")


# ---------------------------------------------------------------------------
# three-block Venn regions


@dataclass(frozen=True)
class TripartiteRegions:
    a: float
    b: float
    c: float
    ab: float
    ac: float
    bc: float
    abc: float
    T3: float
    S3: float
    residuals: dict = field(default_factory=dict)

    def regions(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in ("a", "b", "c", "ab", "ac", "bc", "abc")}


def tripartite_regions(state, parts=None, tol: float = DEFAULT_TOL) -> TripartiteRegions:
    """The seven Venn regions of three blocks A, B, C, plus T_3 and S_3.

    ``residuals`` holds the absolute gaps between the entropic T_3 / S_3 and
    each of their alternative decompositions.
    """
    S = as_table(state, tol)
    bl = normalize_parts(parts, S.n)
    if len(bl) != 3:
        raise PartitionError(f"tripartite regions need exactly 3 blocks, got {len(bl)}")
    A, B, C = bl
    r = _region_values(S, bl)
    a, b, c = r[(0,)], r[(1,)], r[(2,)]
    ab, ac, bc, abc = r[(0, 1)], r[(0, 2)], r[(1, 2)], r[(0, 1, 2)]
    t3 = total_correlation(S, bl, "entropic")
    s3 = dual_total_correlation(S, bl, "entropic")
    i = mutual_information
    residuals = {
        "T3_relative": abs(t3 - total_correlation(S, bl, "relative")),
        "T3_chain": abs(t3 - (i(S, A, B | C) + i(S, B, C))),
        "T3_regions": abs(t3 - math.fsum([ab, ac, bc, 2 * abc])),
        "S3_chain": abs(s3 - (i(S, A, B | C) + i(S, B, C, A))),
        "S3_regions": abs(s3 - math.fsum([ab, ac, bc, abc])),
        "S3_exclusive": abs(s3 - (S(A | B | C) - a - b - c)),
        "region_sum": abs(S(A | B | C) - math.fsum([a, b, c, ab, ac, bc, abc])),
    }
    return TripartiteRegions(a, b, c, ab, ac, bc, abc, t3, s3, residuals)


# ---------------------------------------------------------------------------
# identities as residual evaluators


def partition_identity_residual(state, parts=None, p: int = 1, tol: float = DEFAULT_TOL) -> float:
    """|M_p + M_q - sum_K I(K : complement K)| with K over all p-block subsets, q = m - p.

    When p == q each bipartition appears twice, once from each side.
    """
    S = as_table(state, tol)
    bl = normalize_parts(parts, S.n)
    m = len(bl)
    if not 1 <= p <= m - 1:
        raise PartitionError(f"p must lie in 1..{m - 1}, got {p}")
    q = m - p
    lhs = mqmi(S, bl, p) + mqmi(S, bl, q)
    everything = _union(bl)
    rhs = math.fsum(
        mutual_information(S, _union(K), everything - _union(K))
        for K in itertools.combinations(bl, p)
    )
    return abs(lhs - rhs)


def recurrence_residuals(state, parts=None, tol: float = DEFAULT_TOL) -> dict[str, float]:
    """Absolute residuals of the recurrences and relations between the M_k.

    Names encode which blocks play the distinguished roles (0-based block
    positions). Needs at least three blocks.
    """
    S = as_table(state, tol)
    bl = normalize_parts(parts, S.n)
    m = len(bl)
    if m < 3:
        raise PartitionError(f"recurrences need at least 3 blocks, got {m}")
    everything = _union(bl)
    I = mutual_information
    T = lambda blocks: total_correlation(S, blocks)  # noqa: E731
    D = lambda blocks: dual_total_correlation(S, blocks)  # noqa: E731
    M = lambda blocks, k: mqmi(S, blocks, k)  # noqa: E731
    t_all, s_all = T(bl), D(bl)
    out: dict[str, float] = {}

    def merged(i, j):
        rest = [b for x, b in enumerate(bl) if x not in (i, j)]
        return (bl[i] | bl[j], *rest)

    for j in range(m):
        rest = tuple(b for x, b in enumerate(bl) if x != j)
        out[f"T_split_off[{j}]"] = abs(t_all - (T(rest) + I(S, _union(rest), bl[j])))
    for i, j in itertools.combinations(range(m), 2):
        out[f"T_merge[{i},{j}]"] = abs(t_all - (T(merged(i, j)) + I(S, bl[i], bl[j])))
        others = everything - bl[i] - bl[j]
        out[f"S_merge[{i},{j}]"] = abs(s_all - (D(merged(i, j)) + I(S, bl[i], bl[j], others)))

    pair_mi = math.fsum(I(S, a, b) for a, b in itertools.combinations(bl, 2))
    out["M2_M1"] = abs(M(bl, 2) + pair_mi - (m - 1) * M(bl, 1))

    for k in range(1, m):
        cross = []
        for J in itertools.combinations(range(m), k):
            xj = _union(bl[x] for x in J)
            cross.extend(I(S, xj, bl[i]) for i in range(m) if i not in J)
        cross = math.fsum(cross)
        lhs = (k + 1) * M(bl, k + 1) + cross
        rhs = (m - k) * M(bl, k) + (1 - k / m) * comb(m, k) * M(bl, 1)
        out[f"Mk_Mk+1[k={k}]"] = abs(lhs - rhs)

    for last in range(m):
        rest = tuple(b for x, b in enumerate(bl) if x != last)
        tail = math.fsum(
            S(everything - b) + S(everything - bl[last]) - S(everything) - S(everything - b - bl[last])
            for b in rest
        )
        out[f"M(n-1)_M(n-2)[last={last}]"] = abs(M(bl, m - 1) - (M(rest, m - 2) + tail))

    for last in range(m):
        for first in range(m):
            if first == last:
                continue
            # reorder as X_1 = first, ..., X_n = last
            middle = [b for x, b in enumerate(bl) if x not in (first, last)]
            head = (bl[first], *middle)
            xn = bl[last]
            terms = [M(head, 2), M(head, 1), I(S, xn, _union(middle), bl[first])]
            for j, bj in enumerate(middle):
                others = _union(head) - bj
                terms.append(I(S, xn, others, bj))
            out[f"M2_rec[first={first},last={last}]"] = abs(M(bl, 2) - math.fsum(terms))
    return out


# ---------------------------------------------------------------------------
# secret sharing


@dataclass(frozen=True)
class LeakageReport:
    iab_e: float
    i_ae_given_b: float
    i_be_given_a: float
    i_abe: float
    m2_minus_iab_given_e: float
    residual: float


def secret_sharing_leakage(state, a, b, e, tol: float = DEFAULT_TOL) -> LeakageReport:
    """I(AB:E) and its decomposition into Venn regions involving E."""
    S = as_table(state, tol)
    A, B, E = normalize_parts([a, b, e], S.n)
    if len(A | B | E) != S.n:
        raise PartitionError("A, B and E must cover every party")
    I = mutual_information
    iab_e = I(S, A | B, E)
    i_ae_b = I(S, A, E, B)
    i_be_a = I(S, B, E, A)
    i_abe = gcmi(S, [A, B, E])
    m2_form = mqmi(S, [A, B, E], 2) - I(S, A, B, E)
    regions = math.fsum([i_ae_b, i_be_a, i_abe])
    residual = max(abs(regions - iab_e), abs(m2_form - iab_e), abs(regions - m2_form))
    return LeakageReport(iab_e, i_ae_b, i_be_a, i_abe, m2_form, residual)


# ---------------------------------------------------------------------------
# named measures and reports

MEASURE_IDS = ("M", "T", "S", "C", "Mcomb", "gcmi")


@dataclass(frozen=True)
class MeasureSpec:
    """Which quantity to evaluate: an M_k, T, S, C, a convex combination, or a GCMI."""

    name: str
    parts: tuple | None = None
    k: int | None = None
    weights: tuple[float, ...] | None = None
    cond: tuple[int, ...] = ()

    def __post_init__(self):
        if self.name not in MEASURE_IDS:
            raise ValueError(f"unknown measure {self.name!r}; expected one of {MEASURE_IDS}")
        if self.name == "M" and self.k is None:
            raise ValueError("measure M needs k")
        if self.name == "Mcomb" and self.weights is None:
            raise ValueError("measure Mcomb needs weights")

    def label(self) -> str:
        if self.name == "M":
            return f"M_{self.k}"
        return self.name


def evaluate(state, spec: MeasureSpec, tol: float = DEFAULT_TOL) -> float:
    S = as_table(state, tol)
    if spec.name == "M":
        return mqmi(S, spec.parts, spec.k, spec.cond)
    if spec.name == "T":
        return mqmi(S, spec.parts, 1, spec.cond)
    if spec.name == "S":
        m = len(normalize_parts(spec.parts, S.n))
        return mqmi(S, spec.parts, max(m - 1, 1), spec.cond)
    if spec.name == "C":
        return common_information(S, spec.parts)
    if spec.name == "Mcomb":
        return combined(S, spec.parts, spec.weights)
    return gcmi(S, spec.parts, spec.cond)


def coefficients(spec: MeasureSpec, n: int) -> dict:
    """Entropy coefficient map of a measure on an n-party state."""
    bl = normalize_parts(spec.parts, n)
    y = _cond_set(spec.cond, n, bl)
    m = len(bl)
    if spec.name == "gcmi":
        return gcmi_coefficients(bl, y)
    if spec.name in ("M", "T", "S"):
        k = {"M": spec.k, "T": 1, "S": max(m - 1, 1)}[spec.name]
        return mqmi_coefficients(bl, k, y)
    if spec.name == "C":
        weights = [(1.0 if k % 2 else -1.0) for k in range(1, m + 1)]
    else:
        weights = list(spec.weights)
    out: dict = {}
    for k, w in enumerate(weights, start=1):
        for key, c in mqmi_coefficients(bl, k).items():
            _add(out, key, w * c)
    return out


@dataclass(frozen=True)
class MeasureReport:
    name: str
    value: float
    parts: tuple[tuple[int, ...], ...]
    cond: tuple[int, ...]
    terms: tuple[tuple[float, tuple[int, ...], float], ...]

    def recomputed(self) -> float:
        return math.fsum(c * s for c, _, s in self.terms)


def measure_report(state, spec: MeasureSpec, tol: float = DEFAULT_TOL) -> MeasureReport:
    S = as_table(state, tol)
    bl = normalize_parts(spec.parts, S.n)
    value = evaluate(S, spec)
    coeffs = coefficients(spec, S.n)
    terms = tuple(
        (c, tuple(sorted(key)), S(key))
        for key, c in sorted(coeffs.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
        if c != 0
    )
    return MeasureReport(
        spec.label(),
        value,
        tuple(tuple(sorted(b)) for b in bl),
        tuple(sorted(spec.cond)),
        terms,
    )

