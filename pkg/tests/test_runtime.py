"""Channel registry and endpoint semantics."""

import threading
import time

import pytest

from choreo.runtime import (
    UNIT, AssertionFailure, ChannelRegistry, ChoreoRuntimeError,
    DeadlockTimeout, ClosedPeerError, EnumV, ExecutionContext, ListV,
    OptionalV, SocketChannelEndpoint, SocketRelay, assert_builtin, is_unit,
    new_local_channel,
)


def make_pair(deadline=5.0):
    ctx = ExecutionContext(deadline)
    reg = ChannelRegistry(ctx)
    return reg, reg.claim("k", "A"), reg.claim("k", "B"), ctx


def test_two_roles_obtain_connected_endpoints():
    reg, a, b, _ = make_pair()
    a.send_data(5)
    assert b.receive_data() == 5


def test_same_role_claiming_twice_gets_same_endpoint():
    reg = ChannelRegistry(ExecutionContext(None))
    e1 = new_local_channel(reg, "key", "Device")
    e2 = new_local_channel(reg, "key", "Device")
    assert e1 is e2


def test_three_roles_on_one_key_is_an_error():
    reg, a, b, _ = make_pair()
    with pytest.raises(ChoreoRuntimeError):
        reg.claim("k", "C")


def test_registry_linearisability_under_concurrent_claims():
    ctx = ExecutionContext(None)
    reg = ChannelRegistry(ctx)
    results = {}
    def claim(role):
        results[role] = reg.claim("shared", role)
    threads = [threading.Thread(target=claim, args=(r,)) for r in ("A", "B")]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results["A"].pair is results["B"].pair
    assert results["A"].side != results["B"].side


def test_per_direction_fifo_order():
    reg, a, b, _ = make_pair()
    sent = list(range(10))
    for v in sent:
        a.send_data(v)
    assert [b.receive_data() for _ in sent] == sent


def test_value_fidelity_for_prelude_values():
    reg, a, b, _ = make_pair()
    payload = ListV([1, "two", OptionalV(True, 3), EnumV("Choice", "GO")])
    a.send_data(payload)
    got = b.receive_data()
    assert got is payload  # in-memory channels move values without marshalling


def test_string_round_trip():
    reg, a, b, _ = make_pair()
    a.send_data("Hello")
    assert b.receive_data() == "Hello"


def test_com_direction_from_payload():
    # A payload argument sends; the injected unit receives.
    reg, a, b, _ = make_pair()
    assert is_unit(a.com("msg"))
    assert b.com() == "msg"
    b.com("reply")
    assert a.com(UNIT) == "reply"


def test_select_round_trips_equal_label():
    reg, a, b, _ = make_pair()
    a.select(EnumV("Choice", "GO"))
    got = b.select(UNIT)
    assert got == EnumV("Choice", "GO")


def test_select_rejects_non_enum_payload():
    reg, a, b, _ = make_pair()
    with pytest.raises(ChoreoRuntimeError):
        a.send_label("GO")


def test_label_vs_data_protocol_violation():
    reg, a, b, _ = make_pair()
    a.send_data(1)
    with pytest.raises(ChoreoRuntimeError):
        b.receive_label()


def test_receive_hits_deadline():
    reg, a, b, _ = make_pair(deadline=0.3)
    with pytest.raises(DeadlockTimeout):
        b.receive_data()


def test_closed_peer_error():
    reg, a, b, ctx = make_pair(deadline=5.0)
    ctx.mark_finished("A")
    with pytest.raises(ClosedPeerError):
        b.receive_data()


def test_send_blocks_when_buffer_full():
    reg, a, b, _ = make_pair(deadline=0.4)
    from choreo.runtime import CHANNEL_CAPACITY

    for i in range(CHANNEL_CAPACITY):
        a.send_data(i)
    with pytest.raises(DeadlockTimeout):
        a.send_data("overflow")


def test_assert_builtin():
    assert assert_builtin(True, "x") is UNIT
    with pytest.raises(AssertionFailure) as exc:
        assert_builtin(False, "bad pseudonymisation")
    assert "bad pseudonymisation" in str(exc.value)
    with pytest.raises(ChoreoRuntimeError):
        assert_builtin("yes", "msg")


# --------------------------------------------------------- socket transport

def test_socket_transport_round_trip():
    relay = SocketRelay()
    try:
        results = {}

        def left():
            ep = SocketChannelEndpoint(relay.address, "chan-1")
            ep.send_data(ListV([1, 2, 3]))
            ep.send_label(EnumV("Choice", "GO"))
            results["left_got"] = ep.receive_data()
            ep.close()

        def right():
            ep = SocketChannelEndpoint(relay.address, "chan-1")
            results["data"] = ep.receive_data()
            results["label"] = ep.receive_label()
            ep.send_data("done")
            ep.close()

        t1 = threading.Thread(target=left)
        t2 = threading.Thread(target=right)
        t1.start(); t2.start()
        t1.join(5); t2.join(5)
        assert results["data"] == ListV([1, 2, 3])
        assert results["label"] == EnumV("Choice", "GO")
        assert results["left_got"] == "done"
    finally:
        relay.close()


def test_socket_handshake_is_one_json_line():
    import json
    import socket as socketlib

    relay = SocketRelay()
    try:
        got = {}

        def peer():
            ep = SocketChannelEndpoint(relay.address, "probe")
            got["value"] = ep.receive_data()
            ep.close()

        t = threading.Thread(target=peer)
        t.start()
        raw = socketlib.create_connection(relay.address)
        raw.sendall((json.dumps({"key": "probe"}) + "\n").encode())
        raw.sendall((json.dumps({"kind": "data", "value": 7}) + "\n").encode())
        t.join(5)
        raw.close()
        assert got["value"] == 7
    finally:
        relay.close()
