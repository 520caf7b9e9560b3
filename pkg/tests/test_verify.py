from __future__ import annotations

import json

import pytest

from mqmi.verify import (
    REGISTRY,
    SuiteConfig,
    replay_finding,
    replay_property,
    run_property_suite,
    scan_conjectures,
)
from mqmi.verify.report import CheckResult
from mqmi.verify.sampling import derive_seed, sample_spec
from mqmi.verify.scans import ordering_slack, ratio_constant


def test_derive_seed_is_stable_and_stream_dependent():
    assert derive_seed(0, "a", 1) == derive_seed(0, "a", 1)
    assert derive_seed(0, "a", 1) != derive_seed(0, "b", 1)
    assert derive_seed(0, "a", 1) != derive_seed(1, "a", 1)
    assert 0 <= derive_seed(5, "x", 2, 3) < 2**32


def test_sample_spec_ensembles():
    assert sample_spec(3, 2, "pure", 0, "s", 0)["kind"] == "random_pure"
    mixed = sample_spec(3, 2, "mixed", 0, "s", 0)
    assert mixed["kind"] == "random_mixed" and mixed["params"]["rank"] in (2, 8)
    kinds = {sample_spec(3, 2, "mix", 0, "s", t)["kind"] for t in range(20)}
    assert kinds == {"random_pure", "random_mixed"}
    with pytest.raises(ValueError):
        sample_spec(3, 2, "thermal", 0, "s", 0)


def test_suite_config_validation():
    with pytest.raises(ValueError):
        SuiteConfig(samples=0)
    with pytest.raises(ValueError):
        SuiteConfig(tol=-1)
    with pytest.raises(ValueError):
        run_property_suite(SuiteConfig(n=3, properties=("no_such_check",)))


def test_check_result_counting():
    ident = CheckResult("x", "identity", 1e-8)
    ident.record(1e-12, {"w": 1})
    ident.record(1e-3, {"w": 2})
    assert ident.failures == 1 and ident.witnesses == [{"w": 2}] and ident.worst_residual == 1e-3
    ineq = CheckResult("y", "inequality", 1e-9)
    ineq.record(0.5, {})
    ineq.record(-1e-12, {})
    assert ineq.failures == 0 and ineq.worst_residual == -1e-12 and ineq.rate == 1.0


def test_small_property_suite_has_no_failures():
    report = run_property_suite(SuiteConfig(n=3, samples=10, seed=11))
    assert report.total_failures == 0
    assert {r.name for r in report.results} == set(REGISTRY)
    assert report.to_text().endswith("0 failures")


def test_pure_only_checks_skip_even_n_where_inapplicable():
    report = run_property_suite(SuiteConfig(n=4, samples=2, properties=("odd_pure_common_vanishes", "mn_zero")))
    assert [r.name for r in report.results] == ["mn_zero"]


def test_reports_are_deterministic_json():
    cfg = SuiteConfig(n=3, samples=5, seed=3, properties=("basic_inequalities", "channel_monotone_total"))
    a, b = run_property_suite(cfg).to_json(), run_property_suite(cfg).to_json()
    assert a == b
    data = json.loads(a)
    assert data["config"]["properties"] == ["basic_inequalities", "channel_monotone_total"]
    assert data["total_failures"] == 0


def test_forced_failures_carry_replayable_witnesses():
    # an absurdly strict tolerance turns float noise into failures, which must replay exactly
    cfg = SuiteConfig(n=3, samples=5, seed=1, tol=1e-300, properties=("partition_identity", "local_unitary_invariance"))
    report = run_property_suite(cfg)
    assert report.total_failures > 0
    for res in report.results:
        for witness in res.witnesses:
            assert replay_property(res.name, witness, 3, 2) == witness["residual"]


def test_ratio_constant_and_ordering_slack():
    assert ratio_constant(4, 1, 2) == pytest.approx(3.0)
    assert ratio_constant(5, 1, 2) == pytest.approx(4.0)
    slack, link = ordering_slack([4, 9, 4, 0], -2)
    assert slack == pytest.approx(5) and link == "pair1<pair2"
    slack, link = ordering_slack([3, 3, 0], 0)
    assert slack == pytest.approx(3)


def test_scan_controls_are_clean_and_cluster_witness_recorded():
    report = scan_conjectures(SuiteConfig(n=4, samples=20, seed=2))
    controls = [r for r in report.results if r.control]
    assert {r.name for r in controls} == {
        "channel_monotone[k=1]", "channel_monotone[k=3]", "broadcast_monotone[k=1]", "broadcast_monotone[k=3]"
    }
    assert all(r.failures == 0 for r in controls)
    rows = {w["detail"].get("table_row"): w["residual"] for w in report.result("common_negative").witnesses}
    assert rows["C_4"] == pytest.approx(-2.0)
    assert rows["HS_4"] == pytest.approx(-2.75489, abs=1e-5)
    for res in report.results:
        for witness in res.witnesses[:2]:
            assert replay_finding(res.name, witness, 4, 2) == witness["residual"]


def test_scan_is_deterministic_and_never_raises_on_findings():
    cfg = SuiteConfig(n=3, samples=8, seed=4)
    a = scan_conjectures(cfg)
    assert a.to_json() == scan_conjectures(cfg).to_json()
    assert "ordering_chain" in {r.name for r in a.results}
