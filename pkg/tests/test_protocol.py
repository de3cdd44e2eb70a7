"""Wire protocol framing and the channel implementations."""

import json
import socket
import sys
import threading
from pathlib import Path

import pytest

from drivebench.agents.decisions import Decision
from drivebench.agents.protocol import (
    AgentRequest,
    BuiltinChannel,
    ProcChannel,
    ProtocolError,
    ReplayChannel,
    TcpChannel,
    TransportError,
    decode_request,
    decode_response,
    encode_request,
    encode_response,
    make_channel,
    request_decision,
)
from drivebench.perception import LidarSummary, ScenePrompt
from worldkit import ego, observation

HELPERS = Path(__file__).parent / "helpers"
PROMPT = ScenePrompt(system_text="sys", scene_text="scene", task_text="task")
OBS = observation(ego())


def req(frame=0, lidar=None, history=()):
    return AgentRequest(frame=frame, prompt=PROMPT, lidar=lidar, history=tuple(history))


def helper(name: str) -> str:
    return f"{sys.executable} {HELPERS / name}"


def test_request_encoding_has_exact_key_order():
    line = encode_request(req(frame=3, history=[{"decision": "idle", "score": 0.5}]))
    assert line.startswith('{"type":"decision_request","frame":3,"system":')
    record = json.loads(line)
    assert list(record) == ["type", "frame", "system", "scene", "task", "lidar", "history"]
    assert record["lidar"] is None
    assert record["history"] == [{"decision": "idle", "score": 0.5}]
    assert "\n" not in line


def test_request_carries_lidar_block_when_present():
    summary = LidarSummary(2, 1.0, 2.0, 3.0)
    record = json.loads(encode_request(req(lidar=summary)))
    assert record["lidar"] == {
        "num_points": 2,
        "min_distance": 1.0,
        "mean_distance": 2.0,
        "max_distance": 3.0,
    }


def test_history_is_capped_at_eight():
    items = [{"decision": "idle", "score": 1.0}] * 9
    with pytest.raises(ValueError, match="at most 8"):
        req(history=items)
    req(history=items[:8])


def test_response_framing_round_trip():
    assert decode_response(encode_response("DECISION: idle")) == "DECISION: idle"


@pytest.mark.parametrize(
    "line",
    [
        "not json at all",
        '{"type":"decision"}',
        '{"type":"other","text":"x"}',
        '{"type":"decision","text":7}',
        "[1,2,3]",
    ],
)
def test_bad_response_records_raise(line):
    with pytest.raises(ProtocolError):
        decode_response(line)


def test_decode_request_validates_type():
    record = decode_request(encode_request(req(frame=9)))
    assert record["frame"] == 9
    with pytest.raises(ProtocolError):
        decode_request('{"type":"decision","text":"hi"}')
    with pytest.raises(ProtocolError):
        decode_request("garbage")


def test_builtin_channel():
    channel = BuiltinChannel("baseline")
    text = channel.ask(req(), OBS, timeout_s=1.0)
    assert text.startswith("DECISION: ")
    with pytest.raises(ValueError, match="unknown builtin agent"):
        BuiltinChannel("nonexistent")


def test_replay_channel_exhaustion():
    channel = ReplayChannel(["a", "b"])
    assert channel.ask(req(), OBS, 1.0) == "a"
    assert channel.ask(req(), OBS, 1.0) == "b"
    with pytest.raises(TransportError, match="exhausted"):
        channel.ask(req(), OBS, 1.0)


@pytest.mark.parametrize(
    "target",
    ["builtin:", "proc:", "http:foo", "tcp:nohost", "tcp:host:notaport", "bare"],
)
def test_make_channel_rejects_bad_targets(target):
    with pytest.raises(ValueError):
        make_channel(target)


def test_make_channel_builtin():
    channel = make_channel("builtin:slow_cautious")
    assert isinstance(channel, BuiltinChannel)
    channel.close()


class _StaticChannel:
    def __init__(self, text):
        self.text = text

    def ask(self, request, obs, timeout_s):
        return self.text

    def close(self):
        pass


class _FlakyChannel:
    """Raises transport errors for the first ``failures`` asks."""

    def __init__(self, failures, text="DECISION: idle"):
        self.failures = failures
        self.text = text
        self.asks = 0

    def ask(self, request, obs, timeout_s):
        self.asks += 1
        if self.asks <= self.failures:
            raise TransportError("boom")
        return self.text

    def close(self):
        pass


def test_request_decision_parses_good_replies():
    resp = request_decision(_StaticChannel("sure. DECISION: turn_left"), req(), OBS)
    assert resp.decision is Decision.TURN_LEFT
    assert resp.rationale == "sure. DECISION: turn_left"
    assert resp.latency_ms >= 0.0


def test_request_decision_falls_back_on_unparseable_text():
    resp = request_decision(_StaticChannel("no keywords anywhere"), req(), OBS)
    assert resp.decision is Decision.DECELERATE
    assert resp.rationale == "fallback"


def test_request_decision_falls_back_on_timeout_and_protocol_errors():
    assert request_decision(_StaticChannel(None), req(), OBS).rationale == "fallback"

    class _Garbler:
        def ask(self, request, obs, timeout_s):
            raise ProtocolError("bad record")

        def close(self):
            pass

    assert request_decision(_Garbler(), req(), OBS).rationale == "fallback"


def test_request_decision_retries_then_raises_transport_errors():
    flaky = _FlakyChannel(failures=1)
    resp = request_decision(flaky, req(), OBS, retries=1)
    assert resp.decision is Decision.IDLE
    assert flaky.asks == 2
    dead = _FlakyChannel(failures=99)
    with pytest.raises(TransportError):
        request_decision(dead, req(), OBS, retries=1)
    assert dead.asks == 2


def test_proc_channel_round_trip():
    channel = ProcChannel(helper("idle_agent.py"))
    try:
        text = channel.ask(req(frame=4), OBS, timeout_s=5.0)
        assert text == "frame 4: DECISION: idle"
    finally:
        channel.close()


def test_proc_channel_drains_stale_replies():
    channel = ProcChannel(helper("double_reply_agent.py"))
    try:
        first = channel.ask(req(frame=0), OBS, timeout_s=5.0)
        assert first == "fresh frame 0: DECISION: idle"
        second = channel.ask(req(frame=1), OBS, timeout_s=5.0)
        assert second == "fresh frame 1: DECISION: idle"
    finally:
        channel.close()


def test_proc_channel_timeout_yields_fallback():
    channel = ProcChannel(helper("sleep_agent.py"))
    try:
        resp = request_decision(channel, req(), OBS, timeout_ms=50.0, retries=0)
        assert resp.decision is Decision.DECELERATE
        assert resp.rationale == "fallback"
    finally:
        channel.close()


def test_proc_channel_dead_process_is_a_transport_error():
    channel = ProcChannel("false")
    try:
        with pytest.raises(TransportError):
            request_decision(channel, req(), OBS, timeout_ms=500.0, retries=1)
    finally:
        channel.close()


def test_proc_channel_missing_binary_is_a_transport_error():
    with pytest.raises(TransportError, match="cannot start"):
        ProcChannel("/no/such/binary-xyz")


def _serve_once(server: socket.socket, reply_text: str):
    conn, _ = server.accept()
    with conn:
        buf = b""
        while b"\n" not in buf:
            buf += conn.recv(65536)
        decode_request(buf.decode().strip())
        conn.sendall((encode_response(reply_text) + "\n").encode())


def test_tcp_channel_round_trip():
    server = socket.socket()
    server.bind(("127.0.0.1", 0))
    server.listen(1)
    port = server.getsockname()[1]
    thread = threading.Thread(target=_serve_once, args=(server, "DECISION: accelerate"))
    thread.start()
    try:
        channel = make_channel(f"tcp:127.0.0.1:{port}")
        assert isinstance(channel, TcpChannel)
        try:
            assert channel.ask(req(), OBS, timeout_s=5.0) == "DECISION: accelerate"
        finally:
            channel.close()
    finally:
        thread.join()
        server.close()


def test_tcp_channel_connection_refused():
    server = socket.socket()
    server.bind(("127.0.0.1", 0))
    port = server.getsockname()[1]
    server.close()  # nothing listens here any more
    with pytest.raises(TransportError, match="cannot connect"):
        TcpChannel("127.0.0.1", port)
