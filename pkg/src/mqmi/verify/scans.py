"""Conjecture scans: record where the unproven claims hold and where they fail.

Nothing here is asserted. A violation is a finding, carried with a witness
(state spec plus auxiliary seed) that reproduces it exactly.
"""

from __future__ import annotations

from math import comb

import numpy as np

from .. import channels
from ..entropy import EntropyTable
from ..measures import common_information, mqmi, mqmi_profile
from ..states import reference_table_specs
from .properties import INEQUALITY_TOL, _random_channel, broadcast_event
from .report import CheckResult, SuiteConfig, ViolationReport
from .sampling import aux_seed, build_spec, sample_spec

STREAM = "scan"


def ratio_constant(n: int, k1: int, k2: int) -> float:
    """k2 C(n, k2) / (k1 C(n, k1))."""
    return k2 * comb(n, k2) / (k1 * comb(n, k1))


def ordering_slack(profile: list[float], c: float) -> tuple[float, str]:
    """Smallest slack in C <= (M_1, M_{n-1}) < (M_2, M_{n-2}) < ... < M_{n/2}."""
    n = len(profile)
    M = lambda k: profile[k - 1]  # noqa: E731
    links = {"C<=M_1": M(1) - c, f"C<=M_{n - 1}": M(n - 1) - c}
    for j in range(1, n // 2):
        lower = max(M(j), M(n - j))
        upper = min(M(j + 1), M(n - j - 1))
        links[f"pair{j}<pair{j + 1}"] = upper - lower
    name = min(links, key=links.get)
    return links[name], name


def _is_unimodal(profile: list[float], tol: float = 1e-9) -> bool:
    diffs = np.diff(profile[:-1])
    signs = [1 if x > tol else -1 if x < -tol else 0 for x in diffs]
    signs = [s for s in signs if s]
    return all(a >= b for a, b in zip(signs, signs[1:]))


def scan_trial(spec: dict, seed: int, n: int, d: int) -> dict[str, tuple[float, dict]]:
    """Every scanned quantity for one state; keys are finding names."""
    state = build_spec(spec)
    S = EntropyTable(state)
    profile = mqmi_profile(S)
    c = common_information(S)
    out: dict[str, tuple[float, dict]] = {}

    slack, link = ordering_slack(profile, c)
    out["ordering_chain"] = (slack, {"link": link, "profile": profile})
    for k1 in range(1, n // 2 + 1):
        for k2 in range(k1 + 1, n // 2 + 1):
            const = ratio_constant(n, k1, k2)
            out[f"ratio[k1={k1},k2={k2}]"] = (const * profile[k1 - 1] - profile[k2 - 1], {"c": const})
    out["common_negative"] = (c, {})

    rng = np.random.default_rng(seed)
    channel, detail = _random_channel(n, d, rng)
    after = EntropyTable(channels.apply_local(channel, state))
    after_profile = mqmi_profile(after)
    for k in range(1, n):
        out[f"channel_monotone[k={k}]"] = (profile[k - 1] - after_profile[k - 1], detail)
    weights = rng.dirichlet(np.ones(n))
    before_mix = float(np.dot(weights, profile))
    after_mix = float(np.dot(weights, after_profile))
    out["channel_monotone_combined"] = (before_mix - after_mix, dict(detail, weights=weights.tolist()))

    bstate, blocks, cond, bdetail = broadcast_event(state, int(rng.integers(2**31)), n, d)
    B = EntropyTable(bstate)
    for k in range(1, n):
        out[f"broadcast_monotone[k={k}]"] = (profile[k - 1] - mqmi(B, blocks, k, cond), bdetail)
    return out


def scan_conjectures(config: SuiteConfig) -> ViolationReport:
    """Scan the ordering, ratio and interior-k monotonicity conjectures.

    The k = 1 and k = n - 1 monotonicity entries are proven cases kept in the
    same scan as a control group. Reference-table states with ``config.n`` parties
    are added to the negativity findings as enumerated witnesses.
    """
    n, d = config.n, config.d
    tol = INEQUALITY_TOL if config.tol is None else config.tol
    ensemble = config.ensemble or "mix"
    results: dict[str, CheckResult] = {}
    unimodal = pure = 0
    max_dual_gap = 0.0

    def result(name):
        if name not in results:
            res = CheckResult(name, "finding", tol)
            if name.startswith(("channel_monotone[", "broadcast_monotone[")):
                k = int(name.split("=")[1].rstrip("]"))
                res.control = k in (1, n - 1)
            results[name] = res
        return results[name]

    for label, spec in reference_table_specs():
        state = build_spec(spec.to_dict())
        if state.n != n or set(state.dims) != {d}:
            continue
        c = common_information(state)
        result("common_negative").record(
            c, {"state": spec.to_dict(), "aux_seed": 0, "residual": c, "detail": {"table_row": label}}
        )

    for trial in range(config.samples):
        spec = sample_spec(n, d, ensemble, config.seed, STREAM, trial)
        seed = aux_seed(config.seed, STREAM, trial)
        found = scan_trial(spec, seed, n, d)
        for name, (residual, detail) in found.items():
            result(name).record(
                float(residual),
                {"state": spec, "aux_seed": seed, "residual": float(residual), "detail": detail},
            )
        profile = found["ordering_chain"][1]["profile"]
        max_dual_gap = max(max_dual_gap, max(abs(profile[k - 1] - profile[n - k - 1]) for k in range(1, n)))
        if spec["kind"] == "random_pure":
            pure += 1
            unimodal += _is_unimodal(profile)

    results["ordering_chain"].notes = {"max_gap_M_k_vs_M_n-k": max_dual_gap}
    results["common_negative"].notes = {
        "pure_profiles": pure,
        "pure_profiles_unimodal": unimodal,
    }
    report = ViolationReport("conjectures", config)
    report.results = [results[k] for k in sorted(results)]
    return report


def replay(name: str, witness: dict, n: int, d: int) -> float:
    """Recompute a finding's residual from its witness."""
    if witness["detail"].get("table_row"):
        return common_information(build_spec(witness["state"]))
    return float(scan_trial(witness["state"], witness["aux_seed"], n, d)[name][0])
