"""Channel semantics, the unit singleton, the shared registry, and builtins.

Runtime values use native Python types where they fit (int, float, bool,
str); the remaining variants are small classes (unit singleton, enum labels,
lists, optionals, objects). Channel endpoints carry one tagged FIFO queue
per direction; ``com`` on an endpoint sends when given a payload and
receives when given the unit value, which is exactly the shape projection
produces (receivers always pass the injected ``Unit.id``). Labels sent by
``select`` are received as equal labels.
"""

from __future__ import annotations

import json
import queue
import socket
import threading
import time
from dataclasses import dataclass, field

CHANNEL_CAPACITY = 16
_POLL = 0.05


class ChoreoRuntimeError(Exception):
    pass


class AssertionFailure(ChoreoRuntimeError):
    pass


class DeadlockTimeout(ChoreoRuntimeError):
    pass


class ClosedPeerError(ChoreoRuntimeError):
    pass


# ----------------------------------------------------------------- values

class UnitValue:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Unit.id"


UNIT = UnitValue()


@dataclass(frozen=True)
class EnumV:
    type_name: str
    case: str

    def __repr__(self):
        return f"{self.type_name}.{self.case}"


@dataclass
class ListV:
    items: list = field(default_factory=list)

    def __repr__(self):
        return repr(self.items)


@dataclass
class OptionalV:
    present: bool
    value: object = None

    def __repr__(self):
        return f"Optional({self.value!r})" if self.present else "Optional.empty"


@dataclass
class IteratorV:
    items: list
    index: int = 0


@dataclass
class ExceptionV:
    class_name: str
    message: str


def is_unit(v):
    return v is UNIT


# ------------------------------------------------------------- the registry

class ExecutionContext:
    """Shared clock/cancellation state for one distributed execution."""

    def __init__(self, deadline_seconds=10.0):
        self.deadline = (time.monotonic() + deadline_seconds
                         if deadline_seconds is not None else None)
        self.cancelled = threading.Event()
        self._finished = set()
        self._lock = threading.Lock()

    def mark_finished(self, role):
        with self._lock:
            self._finished.add(role)

    def finished(self, role):
        with self._lock:
            return role in self._finished

    def check(self):
        if self.cancelled.is_set():
            raise DeadlockTimeout("execution cancelled")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise DeadlockTimeout("deadline exceeded while blocked on a channel")


class _Pair:
    """The two directed queues behind one registry key."""

    def __init__(self, key):
        self.key = key
        self.queues = [queue.Queue(CHANNEL_CAPACITY), queue.Queue(CHANNEL_CAPACITY)]
        self.claimants = []  # role names, in claim order


@dataclass
class ChannelEndpoint:
    """One side of a point-to-point in-memory channel."""

    pair: _Pair
    side: int  # 0 or 1
    claimant: str
    context: ExecutionContext

    @property
    def _out(self):
        return self.pair.queues[self.side]

    @property
    def _in(self):
        return self.pair.queues[1 - self.side]

    def _peer(self):
        others = [c for c in self.pair.claimants if c != self.claimant]
        return others[0] if others else None

    def _put(self, item):
        while True:
            self.context.check()
            try:
                self._out.put(item, timeout=_POLL)
                return
            except queue.Full:
                continue

    def _get(self):
        while True:
            self.context.check()
            try:
                return self._in.get(timeout=_POLL)
            except queue.Empty:
                peer = self._peer()
                if peer is not None and self.context.finished(peer) and self._in.empty():
                    raise ClosedPeerError(
                        f"peer '{peer}' of channel '{self.pair.key}' has terminated")

    def send_data(self, value):
        self._put(("data", value))
        return UNIT

    def receive_data(self):
        kind, value = self._get()
        if kind != "data":
            raise ChoreoRuntimeError(
                f"protocol violation on '{self.pair.key}': expected data, got {kind}")
        return value

    def send_label(self, label):
        if not isinstance(label, EnumV):
            raise ChoreoRuntimeError("select requires an enumerated label")
        self._put(("label", label))
        return label

    def receive_label(self):
        kind, value = self._get()
        if kind != "label":
            raise ChoreoRuntimeError(
                f"protocol violation on '{self.pair.key}': expected label, got {kind}")
        return value

    # The com/select surface used by the interpreters: a unit argument means
    # this side is the receiver.
    def com(self, message=UNIT):
        if is_unit(message):
            return self.receive_data()
        return self.send_data(message)

    def select(self, label=UNIT):
        if is_unit(label):
            return self.receive_label()
        return self.send_label(label)


class ChannelRegistry:
    """Shared key -> channel map; each role claims its own endpoint."""

    def __init__(self, context: ExecutionContext = None):
        self.context = context if context is not None else ExecutionContext(None)
        self._pairs = {}
        self._endpoints = {}
        self._lock = threading.Lock()

    def claim(self, key, claimant):
        if not key:
            raise ChoreoRuntimeError("channel keys must be nonempty")
        with self._lock:
            pair = self._pairs.get(key)
            if pair is None:
                pair = _Pair(key)
                self._pairs[key] = pair
            if (key, claimant) in self._endpoints:
                return self._endpoints[(key, claimant)]
            if len(pair.claimants) >= 2:
                raise ChoreoRuntimeError(
                    f"channel '{key}' already connects two roles "
                    f"({', '.join(pair.claimants)}); it cannot serve '{claimant}'")
            side = len(pair.claimants)
            pair.claimants.append(claimant)
            ep = ChannelEndpoint(pair, side, claimant, self.context)
            self._endpoints[(key, claimant)] = ep
            return ep

    def keys(self):
        with self._lock:
            return sorted(self._pairs)


def new_local_channel(registry, key, claimant):
    """First caller creates the channel; both roles obtain their endpoints."""
    return registry.claim(key, claimant)


def assert_builtin(cond, message):
    """Returns unit when cond holds, raises an assertion failure otherwise."""
    if cond is True:
        return UNIT
    if cond is False:
        raise AssertionFailure(message)
    raise ChoreoRuntimeError("assertTrue requires a boolean condition")


# ------------------------------------------------------- socket transport

def _encode_value(value):
    if is_unit(value):
        return {"unit": True}
    if isinstance(value, EnumV):
        return {"enum": [value.type_name, value.case]}
    if isinstance(value, ListV):
        return {"list": [_encode_value(v) for v in value.items]}
    if isinstance(value, OptionalV):
        return {"optional": _encode_value(value.value) if value.present else None}
    if isinstance(value, (bool, int, float, str)) or value is None:
        return {"value": value}
    raise ChoreoRuntimeError(f"value {value!r} cannot travel over the socket transport")


def _decode_value(obj):
    if "unit" in obj:
        return UNIT
    if "enum" in obj:
        return EnumV(*obj["enum"])
    if "list" in obj:
        return ListV([_decode_value(v) for v in obj["list"]])
    if "optional" in obj:
        inner = obj["optional"]
        return OptionalV(inner is not None, _decode_value(inner) if inner is not None else None)
    return obj["value"]


class SocketRelay:
    """Rendezvous server pairing two connections per key and piping lines."""

    def __init__(self, host="127.0.0.1", port=0):
        self._server = socket.create_server((host, port))
        self.address = self._server.getsockname()
        self._waiting = {}
        self._lock = threading.Lock()
        self._threads = []
        self._stop = threading.Event()
        self._accept_thread = threading.Thread(target=self._accept_loop, daemon=True)
        self._accept_thread.start()

    def _accept_loop(self):
        while not self._stop.is_set():
            try:
                conn, _ = self._server.accept()
            except OSError:
                return
            t = threading.Thread(target=self._handshake, args=(conn,), daemon=True)
            t.start()
            self._threads.append(t)

    def _handshake(self, conn):
        f = conn.makefile("r")
        line = f.readline()
        try:
            key = json.loads(line)["key"]
        except (json.JSONDecodeError, KeyError):
            conn.close()
            return
        with self._lock:
            other = self._waiting.pop(key, None)
            if other is None:
                self._waiting[key] = (conn, f)
                return
        oconn, of = other
        a = threading.Thread(target=self._pipe, args=(f, oconn), daemon=True)
        b = threading.Thread(target=self._pipe, args=(of, conn), daemon=True)
        a.start()
        b.start()

    @staticmethod
    def _pipe(reader, wconn):
        for line in reader:
            try:
                wconn.sendall(line.encode())
            except OSError:
                return

    def close(self):
        self._stop.set()
        self._server.close()


class SocketChannelEndpoint:
    """Line-delimited JSON over TCP; one connection per channel.

    The one-line handshake names the key; each message is a tagged JSON
    object, ``{"kind": "data"|"label", ...}``.
    """

    def __init__(self, relay_address, key):
        self._sock = socket.create_connection(relay_address)
        self._reader = self._sock.makefile("r")
        self._sock.sendall((json.dumps({"key": key}) + "\n").encode())

    def send_data(self, value):
        frame = {"kind": "data"}
        frame.update(_encode_value(value))
        self._sock.sendall((json.dumps(frame) + "\n").encode())
        return UNIT

    def receive_data(self):
        frame = json.loads(self._reader.readline())
        if frame.pop("kind") != "data":
            raise ChoreoRuntimeError("protocol violation: expected data frame")
        return _decode_value(frame)

    def send_label(self, label):
        if not isinstance(label, EnumV):
            raise ChoreoRuntimeError("select requires an enumerated label")
        frame = {"kind": "label", "enum": [label.type_name, label.case]}
        self._sock.sendall((json.dumps(frame) + "\n").encode())
        return label

    def receive_label(self):
        frame = json.loads(self._reader.readline())
        if frame.pop("kind") != "label":
            raise ChoreoRuntimeError("protocol violation: expected label frame")
        return EnumV(*frame["enum"])

    def com(self, message=UNIT):
        if is_unit(message):
            return self.receive_data()
        return self.send_data(message)

    def select(self, label=UNIT):
        if is_unit(label):
            return self.receive_label()
        return self.send_label(label)

    def close(self):
        self._sock.close()
