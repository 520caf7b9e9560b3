from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mqmi import channels
from mqmi.errors import ChannelError, DimensionError, PartitionError
from mqmi.measures import MeasureSpec, mqmi, mqmi_profile
from mqmi.qmatrix import MultipartiteState, apply_unitary, local_operator, partial_trace, validate
from mqmi.states import ggz, haar_unitary, product, random_mixed
from mqmi.verify.properties import broadcast_event


def test_full_depolarization_erases_local_state():
    out = channels.apply_local(channels.depolarizing(2, 1.0, 0), ggz(2))
    np.testing.assert_allclose(out.matrix, np.eye(4) / 4, atol=1e-14)
    q = channels.apply_local(channels.depolarizing(3, 1.0, 1), random_mixed([2, 3], 6, 0))
    np.testing.assert_allclose(partial_trace(q, [1]).matrix, np.eye(3) / 3, atol=1e-14)


def test_deviation_of_bell_pair_under_full_depolarization():
    spec = MeasureSpec("M", k=1)
    assert channels.deviation(ggz(2), channels.depolarizing(2, 1.0, 0), spec) == pytest.approx(2.0)
    assert channels.deviation(ggz(2), channels.identity_channel(2, 1), spec) == pytest.approx(0.0)


def test_non_trace_preserving_operators_rejected():
    with pytest.raises(ChannelError):
        channels.KrausChannel((np.eye(2) * 0.9,))
    with pytest.raises(ChannelError):
        channels.KrausChannel((np.eye(2), np.eye(3)))
    with pytest.raises(ChannelError):
        channels.depolarizing(2, 1.5)


def test_channel_target_and_dimension_checks():
    with pytest.raises(PartitionError):
        channels.apply_local(channels.identity_channel(2, 3), ggz(3))
    with pytest.raises(DimensionError):
        channels.apply_local(channels.identity_channel(3, 0), ggz(3))


def test_unitary_channel_matches_global_conjugation():
    state = random_mixed([2, 3, 2], 5, 1)
    u = haar_unitary(3, np.random.default_rng(2))
    got = channels.apply_local(channels.unitary_channel(u, 1), state)
    expected = apply_unitary(state, local_operator(u, 1, state.dims))
    np.testing.assert_allclose(got.matrix, expected.matrix, atol=1e-13)


def test_channel_json_round_trip_uses_one_based_target():
    ch = channels.random_local_channel(2, 3, seed=4, target=1)
    data = ch.to_json()
    assert data["target"] == 2
    back = channels.KrausChannel.from_json(data)
    assert back.target == 1
    for a, b in zip(back.operators, ch.operators):
        np.testing.assert_array_equal(a, b)
    with pytest.raises(ChannelError):
        channels.KrausChannel.from_json({"kraus": []})


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31), rank=st.integers(1, 4), target=st.integers(0, 2), state_seed=st.integers(0, 2**31))
def test_random_channels_are_cptp_and_never_raise_total_correlation(seed, rank, target, state_seed):
    state = random_mixed([2, 2, 2], 8, state_seed)
    ch = channels.random_local_channel(2, rank, seed, target)
    gram = sum(k.conj().T @ k for k in ch.operators)
    np.testing.assert_allclose(gram, np.eye(2), atol=1e-12)
    out = channels.apply_local(ch, state)
    assert validate(out).valid
    before, after = mqmi_profile(state), mqmi_profile(out)
    assert after[0] <= before[0] + 1e-9
    assert after[1] <= before[1] + 1e-9


def test_broadcast_output_structure():
    state = random_mixed([2, 2], 4, 3)
    out = channels.measure_and_broadcast(state, 0, np.eye(2))
    assert out.dims == (2,) * 5
    assert validate(out).valid
    # the owner and public registers hold identical copies of the outcome
    reg = partial_trace(out, [2, 3, 4]).matrix
    diag = np.real(np.diag(reg))
    assert diag[0] + diag[7] == pytest.approx(1.0)
    # the system alone sees only the dephased state
    sys_part = partial_trace(out, [0, 1]).matrix
    dephased = sum(local_operator(np.diag(e), 0, (2, 2)) @ state.matrix @ local_operator(np.diag(e), 0, (2, 2))
                   for e in ([1, 0], [0, 1]))
    np.testing.assert_allclose(sys_part, dephased, atol=1e-14)


def test_broadcast_basis_checks():
    state = ggz(2)
    with pytest.raises(ChannelError):
        channels.measure_and_broadcast(state, 0, np.array([[1, 1], [0, 1]]))
    with pytest.raises(DimensionError):
        channels.measure_and_broadcast(state, 0, np.eye(3))


def test_broadcast_blocks_layout():
    blocks, cond = channels.broadcast_blocks(3)
    assert blocks == ((0, 3), (1, 4), (2, 5)) and cond == (6,)
    blocks, cond = channels.broadcast_blocks(3, owner_registers=False)
    assert blocks == ((0,), (1,), (2,)) and cond == (3,)


def test_unconditioned_broadcast_can_raise_total_correlation():
    # |+>|0>: no correlation before; after publishing A's Z outcome, the
    # owner-grouped blocks share one classical bit unless the public copy is conditioned on
    plus = np.array([1, 0, 1, 0]) / np.sqrt(2)
    state = MultipartiteState.from_ket(plus, (2, 2))
    assert mqmi(state, k=1) == pytest.approx(0.0, abs=1e-12)
    out = channels.measure_and_broadcast(state, 0, np.eye(2))
    blocks, cond = channels.broadcast_blocks(2)
    assert mqmi(out, blocks, 1) == pytest.approx(1.0)
    assert mqmi(out, blocks, 1, cond) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(8))
def test_owner_registers_do_not_change_conditioned_values(seed):
    state = random_mixed([2, 2, 2], 8, seed)
    rng = np.random.default_rng(seed)
    party, basis = int(rng.integers(3)), haar_unitary(2, rng)
    full = channels.measure_and_broadcast(state, party, basis, owner_registers=True)
    public = channels.measure_and_broadcast(state, party, basis, owner_registers=False)
    full_blocks, full_cond = channels.broadcast_blocks(3, owner_registers=True)
    pub_blocks, pub_cond = channels.broadcast_blocks(3, owner_registers=False)
    for k in (1, 2, 3):
        assert mqmi(full, full_blocks, k, full_cond) == pytest.approx(
            mqmi(public, pub_blocks, k, pub_cond), abs=1e-10
        )


def test_suite_broadcast_uses_owner_registers_at_three_qubits():
    _, blocks, cond, detail = broadcast_event(product(dims=[2, 2, 2], mixed=True), 0, 3, 2)
    assert detail["owner_registers"] and blocks == ((0, 3), (1, 4), (2, 5)) and cond == (6,)


def test_local_unitary_product_orders_factors():
    a, b = np.diag([1, -1]), np.array([[0, 1], [1, 0]])
    np.testing.assert_array_equal(channels.local_unitary_product([a, b]), np.kron(a, b))
