"""Assertable claims run over seeded random states.

Each check is a function ``(spec, aux_seed, n, d) -> (residual, detail)``;
the spec and aux seed are everything needed to replay a trial.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .. import channels, entropy, measures, qmatrix
from ..entropy import EntropyTable
from ..measures import mqmi, mqmi_profile
from ..states import haar_unitary, random_mixed
from .report import CheckResult, SuiteConfig, ViolationReport
from .sampling import aux_seed, build_spec, sample_spec

# identities must hold to this; inequalities may dip this far below zero
IDENTITY_TOL = 1e-8
INEQUALITY_TOL = 1e-9

# largest total dimension an enlarged test state (tensor pairs, registers) may reach
ENLARGED_DIM_LIMIT = 256


@dataclass(frozen=True)
class Property:
    name: str
    kind: str
    tol: float
    func: Callable
    ensemble: str = "mix"
    applies: Callable[[int, int], bool] = lambda n, d: True


REGISTRY: dict[str, Property] = {}


def register(name, kind, tol, ensemble="mix", applies=None):
    def wrap(func):
        REGISTRY[name] = Property(name, kind, tol, func, ensemble, applies or (lambda n, d: True))
        return func

    return wrap


def _assignments(n: int, labels: int):
    """Every assignment of the n parties to ``labels`` groups."""
    return itertools.product(range(labels), repeat=n)


def _random_local_unitaries(n, d, rng):
    return [haar_unitary(d, rng) for _ in range(n)]


# ---------------------------------------------------------------------------
# entropy


@register("basic_inequalities", "inequality", INEQUALITY_TOL)
def _basic(spec, seed, n, d):
    S = EntropyTable(build_spec(spec))
    worst, where = math.inf, None
    # label 0 -> X, 1 -> Y, 2 -> Z, 3 -> traced out
    for labels in _assignments(n, 4):
        x = [i for i, g in enumerate(labels) if g == 0]
        y = [i for i, g in enumerate(labels) if g == 1]
        z = [i for i, g in enumerate(labels) if g == 2]
        if not x or not y:
            continue
        r = entropy.basic_inequality_report(S, x, y, z)
        for key, v in r.as_dict().items():
            if v is not None and v < worst:
                worst, where = v, {"X": x, "Y": y, "Z": z, "inequality": key}
    return worst, where


@register("entropy_unitary_invariance", "identity", INEQUALITY_TOL)
def _entropy_invariance(spec, seed, n, d):
    state = build_spec(spec)
    rng = np.random.default_rng(seed)
    s0 = entropy.von_neumann(state)
    u = channels.local_unitary_product(_random_local_unitaries(n, d, rng))
    perm = [int(p) for p in rng.permutation(n)]
    s_u = entropy.von_neumann(qmatrix.apply_unitary(state, u))
    s_p = entropy.von_neumann(qmatrix.permute_subsystems(state, perm))
    return max(abs(s_u - s0), abs(s_p - s0)), {"perm": perm}


@register("relative_entropy_nonnegative", "inequality", INEQUALITY_TOL)
def _klein(spec, seed, n, d):
    tau = build_spec(spec)
    sigma = random_mixed(tau.dims, tau.dim, seed)
    return entropy.relative_entropy(tau, sigma), {"sigma_seed": seed}


@register("relative_entropy_partial_trace_monotone", "inequality", INEQUALITY_TOL)
def _relent_monotone(spec, seed, n, d):
    tau = build_spec(spec)
    rng = np.random.default_rng(seed)
    sigma = random_mixed(tau.dims, tau.dim, int(rng.integers(2**31)))
    if n == 1:
        return entropy.relative_entropy(tau, sigma), {}
    keep = sorted(int(i) for i in rng.choice(n, size=int(rng.integers(1, n)), replace=False))
    full = entropy.relative_entropy(tau, sigma)
    reduced = entropy.relative_entropy(qmatrix.partial_trace(tau, keep), qmatrix.partial_trace(sigma, keep))
    return full - reduced, {"keep": keep}


# ---------------------------------------------------------------------------
# the M_k family: inequalities


@register("mk_semipositive", "inequality", INEQUALITY_TOL)
def _semipositive(spec, seed, n, d):
    profile = mqmi_profile(build_spec(spec))
    k = int(np.argmin(profile))
    return profile[k], {"k": k + 1}


@register("mn_zero", "identity", 0.0)
def _mn_zero(spec, seed, n, d):
    return abs(mqmi(build_spec(spec), None, n)), {}


@register("discard_monotone", "inequality", INEQUALITY_TOL, applies=lambda n, d: n >= 2)
def _discard(spec, seed, n, d):
    S = EntropyTable(build_spec(spec))
    worst, where = math.inf, None
    for k in range(1, n):
        full = mqmi(S, None, k)
        for j in range(n):
            rest = [[i] for i in range(n) if i != j]
            v = full - mqmi(S, rest, k)
            if v < worst:
                worst, where = v, {"k": k, "dropped": j}
    return worst, where


@register("group_monotone", "inequality", INEQUALITY_TOL, applies=lambda n, d: n >= 2)
def _group(spec, seed, n, d):
    S = EntropyTable(build_spec(spec))
    worst, where = math.inf, None
    for k in range(1, n):
        full = mqmi(S, None, k)
        for i, j in itertools.combinations(range(n), 2):
            parts = [[i, j]] + [[x] for x in range(n) if x not in (i, j)]
            v = full - mqmi(S, parts, k)
            if v < worst:
                worst, where = v, {"k": k, "merged": [i, j]}
    return worst, where


@register("gcmi_two_block_nonnegative", "inequality", INEQUALITY_TOL, applies=lambda n, d: n >= 2)
def _gcmi_two(spec, seed, n, d):
    S = EntropyTable(build_spec(spec))
    worst, where = math.inf, None
    # label 0 -> block 1, 1 -> block 2, 2 -> conditioning, 3 -> traced out
    for labels in _assignments(n, 4):
        a = [i for i, g in enumerate(labels) if g == 0]
        b = [i for i, g in enumerate(labels) if g == 1]
        y = [i for i, g in enumerate(labels) if g == 2]
        if not a or not b:
            continue
        v = measures.gcmi(S, [a, b], y)
        if v < worst:
            worst, where = v, {"blocks": [a, b], "cond": y}
    return worst, where


@register("dual_total_bound", "inequality", INEQUALITY_TOL, applies=lambda n, d: n >= 2)
def _p11(spec, seed, n, d):
    S = EntropyTable(build_spec(spec))
    t = measures.total_correlation(S)
    s = measures.dual_total_correlation(S)
    return t + 2 * S(range(n)) - s, {}


# ---------------------------------------------------------------------------
# equivalent forms and identities


@register("total_correlation_forms", "identity", IDENTITY_TOL, applies=lambda n, d: n >= 2)
def _t_forms(spec, seed, n, d):
    S = EntropyTable(build_spec(spec))
    vals = {f: measures.total_correlation(S, None, f) for f in measures.T_FORMS}
    return max(vals.values()) - min(vals.values()), {"values": vals}


@register("dual_total_correlation_forms", "identity", IDENTITY_TOL, applies=lambda n, d: n >= 2)
def _s_forms(spec, seed, n, d):
    S = EntropyTable(build_spec(spec))
    vals = {f: measures.dual_total_correlation(S, None, f) for f in measures.S_FORMS}
    return max(vals.values()) - min(vals.values()), {"values": vals}


@register("partition_identity", "identity", IDENTITY_TOL, applies=lambda n, d: n >= 2)
def _pq(spec, seed, n, d):
    S = EntropyTable(build_spec(spec))
    res = {p: measures.partition_identity_residual(S, None, p) for p in range(1, n)}
    p = max(res, key=res.get)
    return res[p], {"p": p}


def _random_blocks(n: int, count: int, rng) -> list[list[int]]:
    """Random split of all n parties into ``count`` nonempty blocks."""
    while True:
        labels = rng.integers(count, size=n)
        blocks = [[i for i in range(n) if labels[i] == b] for b in range(count)]
        if all(blocks):
            return blocks


@register("tripartite_decomposition", "identity", IDENTITY_TOL, applies=lambda n, d: n >= 3)
def _tripartite(spec, seed, n, d):
    rng = np.random.default_rng(seed)
    blocks = _random_blocks(n, 3, rng)
    r = measures.tripartite_regions(build_spec(spec), blocks)
    key = max(r.residuals, key=r.residuals.get)
    return r.residuals[key], {"blocks": blocks, "decomposition": key}


@register("secret_sharing_decomposition", "identity", IDENTITY_TOL, applies=lambda n, d: n >= 3)
def _leakage(spec, seed, n, d):
    rng = np.random.default_rng(seed)
    a, b, e = _random_blocks(n, 3, rng)
    r = measures.secret_sharing_leakage(build_spec(spec), a, b, e)
    return r.residual, {"A": a, "B": b, "E": e}


@register("recurrences", "identity", IDENTITY_TOL, applies=lambda n, d: n >= 3)
def _recurrences(spec, seed, n, d):
    res = measures.recurrence_residuals(build_spec(spec))
    key = max(res, key=res.get)
    return res[key], {"relation": key}


@register("common_equals_gcmi", "identity", INEQUALITY_TOL)
def _common_gcmi(spec, seed, n, d):
    S = EntropyTable(build_spec(spec))
    return abs(measures.common_information(S) - measures.gcmi(S, None)), {}


# ---------------------------------------------------------------------------
# pure-state structure


@register("pure_duality", "identity", INEQUALITY_TOL, ensemble="pure", applies=lambda n, d: n >= 2)
def _duality(spec, seed, n, d):
    profile = mqmi_profile(build_spec(spec))
    gaps = {p: abs(profile[p - 1] - profile[n - p - 1]) for p in range(1, n)}
    p = max(gaps, key=gaps.get)
    return gaps[p], {"p": p, "q": n - p}


@register("pure_total_equals_dual", "identity", INEQUALITY_TOL, ensemble="pure", applies=lambda n, d: n >= 2)
def _t_eq_s(spec, seed, n, d):
    profile = mqmi_profile(build_spec(spec))
    return abs(profile[0] - profile[n - 2]), {}


@register("odd_pure_common_vanishes", "identity", INEQUALITY_TOL, ensemble="pure", applies=lambda n, d: n % 2 == 1)
def _odd_c(spec, seed, n, d):
    return abs(measures.common_information(build_spec(spec))), {}


@register("pure_common_below_mk", "inequality", INEQUALITY_TOL, ensemble="pure", applies=lambda n, d: n >= 2)
def _c_le_mk(spec, seed, n, d):
    S = EntropyTable(build_spec(spec))
    profile = mqmi_profile(S)
    c = measures.common_information(S)
    slack = {k: profile[k - 1] - c for k in range(1, n)}
    k = min(slack, key=slack.get)
    return slack[k], {"k": k}


# ---------------------------------------------------------------------------
# symmetry and invariance


@register("block_symmetry", "identity", 0.0, applies=lambda n, d: n >= 2)
def _symmetry(spec, seed, n, d):
    S = EntropyTable(build_spec(spec))
    rng = np.random.default_rng(seed)
    perm = [int(p) for p in rng.permutation(n)]
    base = mqmi_profile(S)
    shuffled = mqmi_profile(S, [[p] for p in perm])
    return max(abs(a - b) for a, b in zip(base, shuffled)), {"perm": perm}


@register("party_relabeling", "identity", INEQUALITY_TOL)
def _relabel(spec, seed, n, d):
    state = build_spec(spec)
    rng = np.random.default_rng(seed)
    perm = [int(p) for p in rng.permutation(n)]
    moved = qmatrix.permute_subsystems(state, perm)
    a, b = mqmi_profile(state), mqmi_profile(moved)
    return max(abs(x - y) for x, y in zip(a, b)), {"perm": perm}


@register("local_unitary_invariance", "identity", INEQUALITY_TOL)
def _local_unitary(spec, seed, n, d):
    state = build_spec(spec)
    rng = np.random.default_rng(seed)
    u = channels.local_unitary_product(_random_local_unitaries(n, d, rng))
    a = mqmi_profile(state)
    b = mqmi_profile(qmatrix.apply_unitary(state, u))
    return max(abs(x - y) for x, y in zip(a, b)), {}


@register("additivity", "identity", IDENTITY_TOL, applies=lambda n, d: d ** (2 * n) <= ENLARGED_DIM_LIMIT)
def _additivity(spec, seed, n, d):
    a = build_spec(spec)
    b = random_mixed(a.dims, int(np.random.default_rng(seed).integers(1, a.dim + 1)), seed)
    joint = qmatrix.tensor(a, b)
    # party i of the combination holds the i-th factor of both states
    order = [x for i in range(n) for x in (i, n + i)]
    joint = qmatrix.permute_subsystems(joint, order)
    pairs = [[2 * i, 2 * i + 1] for i in range(n)]
    pa, pb, pj = mqmi_profile(a), mqmi_profile(b), mqmi_profile(joint, pairs)
    return max(abs(j - x - y) for j, x, y in zip(pj, pa, pb)), {"second_seed": seed}


# ---------------------------------------------------------------------------
# operations


def _random_channel(n, d, rng, max_rank=None):
    party = int(rng.integers(n))
    rank = int(rng.integers(1, (max_rank or d * d) + 1))
    ch_seed = int(rng.integers(2**31))
    return channels.random_local_channel(d, rank, ch_seed, party), {
        "party": party,
        "kraus_rank": rank,
        "channel_seed": ch_seed,
    }


@register("apply_local_cptp", "identity", INEQUALITY_TOL)
def _cptp(spec, seed, n, d):
    state = build_spec(spec)
    channel, detail = _random_channel(n, d, np.random.default_rng(seed))
    out = channels.apply_local(channel, state)
    v = qmatrix.validate(out)
    return max(v.trace_defect, v.hermiticity_defect, max(0.0, -v.min_eigenvalue)), detail


def _channel_drop(spec, seed, n, d, k):
    state = build_spec(spec)
    channel, detail = _random_channel(n, d, np.random.default_rng(seed))
    out = channels.apply_local(channel, state)
    return mqmi(state, None, k) - mqmi(out, None, k), detail


@register("channel_monotone_total", "inequality", INEQUALITY_TOL, applies=lambda n, d: n >= 2)
def _channel_t(spec, seed, n, d):
    return _channel_drop(spec, seed, n, d, 1)


@register("channel_monotone_dual_total", "inequality", INEQUALITY_TOL, applies=lambda n, d: n >= 2)
def _channel_s(spec, seed, n, d):
    return _channel_drop(spec, seed, n, d, n - 1)


def broadcast_event(state, seed, n, d):
    """Random projective measurement on a random party, published to everyone.

    Returns the broadcast state, the owner-grouped blocks, the public
    conditioning set and the trial detail. Owner registers are only
    materialized while the enlarged state stays small; conditioned on the
    public copy they do not change any value.
    """
    rng = np.random.default_rng(seed)
    party = int(rng.integers(n))
    basis = haar_unitary(d, rng)
    owners = state.dim * d ** (n + 1) <= ENLARGED_DIM_LIMIT // 2
    out = channels.measure_and_broadcast(state, party, basis, owner_registers=owners)
    blocks, cond = channels.broadcast_blocks(n, owner_registers=owners)
    return out, blocks, cond, {"party": party, "owner_registers": owners}


@register("broadcast_monotone", "inequality", INEQUALITY_TOL, applies=lambda n, d: n >= 2)
def _broadcast(spec, seed, n, d):
    state = build_spec(spec)
    out, blocks, cond, detail = broadcast_event(state, seed, n, d)
    S0, S1 = EntropyTable(state), EntropyTable(out)
    worst, where = math.inf, None
    for k in sorted({1, n - 1}):
        v = mqmi(S0, None, k) - mqmi(S1, blocks, k, cond)
        if v < worst:
            worst, where = v, dict(detail, k=k)
    return worst, where


# ---------------------------------------------------------------------------


def selected(config: SuiteConfig) -> list[Property]:
    names = config.properties or tuple(REGISTRY)
    unknown = [x for x in names if x not in REGISTRY]
    if unknown:
        raise ValueError(f"unknown properties: {unknown}")
    return [REGISTRY[x] for x in names if REGISTRY[x].applies(config.n, config.d)]


def run_property_suite(config: SuiteConfig) -> ViolationReport:
    """Run every selected, applicable property over ``config.samples`` seeded states."""
    report = ViolationReport("properties", config)
    for prop in selected(config):
        tol = prop.tol if config.tol is None else config.tol
        result = CheckResult(prop.name, prop.kind, tol)
        ensemble = "pure" if prop.ensemble == "pure" else (config.ensemble or prop.ensemble)
        for trial in range(config.samples):
            spec = sample_spec(config.n, config.d, ensemble, config.seed, prop.name, trial)
            seed = aux_seed(config.seed, prop.name, trial)
            residual, detail = prop.func(spec, seed, config.n, config.d)
            result.record(
                float(residual),
                {"state": spec, "aux_seed": seed, "residual": float(residual), "detail": detail},
            )
        report.results.append(result)
    return report


def replay(name: str, witness: dict, n: int, d: int) -> float:
    """Recompute a property witness's residual from its stored spec and seed."""
    residual, _ = REGISTRY[name].func(witness["state"], witness["aux_seed"], n, d)
    return float(residual)
