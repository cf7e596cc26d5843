"""Projected units running over the TCP transport instead of in-memory
channels: the endpoints share the com/select surface, so workers
interpreting local units cannot tell the difference."""

import threading

from conftest import compile_ok

from choreo.builtins import Console
from choreo.diagnostics import Reporter
from choreo.distributed import LocalInterpreter
from choreo.projector import project_program
from choreo.runtime import (
    ChannelRegistry, ExecutionContext, SocketChannelEndpoint, SocketRelay,
)

ROUND_TRIP = """
public class Courier@(A, B) {
    public static <T@X> T@A roundTrip(DiDataChannel@(A, B)<T> chAB, DiDataChannel@(B, A)<T> chBA, T@A mesg) {
        return chBA.<T>com(chAB.<T>com(mesg));
    }
}
"""


def test_projected_units_run_over_tcp():
    checked = compile_ok(ROUND_TRIP)
    units, reporter = project_program(checked, Reporter())
    assert not reporter.has_errors()

    relay = SocketRelay()
    console = Console()
    context = ExecutionContext(10.0)
    results = {}
    try:
        def worker(role):
            ab = SocketChannelEndpoint(relay.address, "tcp-ab")
            ba = SocketChannelEndpoint(relay.address, "tcp-ba")
            interp = LocalInterpreter(units.units, role,
                                      ChannelRegistry(context), console, context)
            unit = units.unit(f"Courier_{role}")
            method = unit.decl.methods[0]
            from choreo.runtime import UNIT

            mesg = "over-tcp" if role == "A" else UNIT
            results[role] = interp.call(None, unit.generated_name, method,
                                        [ab, ba, mesg])
            ab.close()
            ba.close()

        threads = [threading.Thread(target=worker, args=(r,)) for r in ("A", "B")]
        for t in threads:
            t.start()
        for t in threads:
            t.join(10)
        assert results["A"] == "over-tcp"
    finally:
        relay.close()


def test_interleaved_data_and_labels_stay_fifo():
    from choreo.runtime import EnumV, UNIT

    relay = SocketRelay()
    try:
        seen = []

        def sender():
            ep = SocketChannelEndpoint(relay.address, "mix")
            ep.send_data(1)
            ep.send_label(EnumV("Choice", "GO"))
            ep.send_data(2)
            ep.send_label(EnumV("Choice", "STOP"))
            ep.close()

        def receiver():
            ep = SocketChannelEndpoint(relay.address, "mix")
            seen.append(ep.receive_data())
            seen.append(ep.receive_label())
            seen.append(ep.receive_data())
            seen.append(ep.receive_label())
            ep.close()

        ts = [threading.Thread(target=sender), threading.Thread(target=receiver)]
        for t in ts:
            t.start()
        for t in ts:
            t.join(10)
        assert seen == [1, EnumV("Choice", "GO"), 2, EnumV("Choice", "STOP")]
    finally:
        relay.close()
