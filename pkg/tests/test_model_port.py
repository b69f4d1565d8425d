from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from feelgrid.model_port import ModelPort, PortReply, build_request


class _StubHandler(BaseHTTPRequestHandler):
    response_body: bytes = b"{}"
    delay_s: float = 0.0
    requests: list = []

    def do_POST(self):
        import time

        length = int(self.headers.get("Content-Length", 0))
        _StubHandler.requests.append(json.loads(self.rfile.read(length)))
        if self.delay_s:
            time.sleep(self.delay_s)
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        self.wfile.write(_StubHandler.response_body)

    def log_message(self, *args):
        pass


@pytest.fixture()
def stub_server():
    server = HTTPServer(("127.0.0.1", 0), _StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    _StubHandler.requests = []
    _StubHandler.delay_s = 0.0
    _StubHandler.response_body = b"{}"
    yield f"http://127.0.0.1:{server.server_address[1]}/"
    server.shutdown()
    server.server_close()


def test_unconfigured_port_is_inert():
    port = ModelPort(url=None)
    assert not port.configured
    assert port.ask({"transcript": "x"}) is None


def test_round_trip_reply(stub_server):
    _StubHandler.response_body = json.dumps(
        {"intent": "DataExplore", "answer": "The max is 3.85%.",
         "cited_values": [{"task": "max", "value": 3.85}]}
    ).encode()
    port = ModelPort(url=stub_server, timeout_s=2.0)
    reply = port.ask({"transcript": "max?"})
    assert reply == PortReply(
        intent="DataExplore",
        answer="The max is 3.85%.",
        cited_values=({"task": "max", "value": 3.85},),
    )
    assert _StubHandler.requests[0] == {"transcript": "max?"}


def test_timeout_downgrades_to_none(stub_server):
    _StubHandler.delay_s = 1.0
    port = ModelPort(url=stub_server, timeout_s=0.2)
    assert port.ask({"transcript": "slow"}) is None
    assert any(e["kind"] == "port_timeout" for e in port.log_entries)


def test_schema_error_downgrades(stub_server):
    _StubHandler.response_body = b"[1, 2, 3]"
    port = ModelPort(url=stub_server, timeout_s=2.0)
    assert port.ask({"transcript": "x"}) is None
    assert any(e["kind"] == "port_schema_error" for e in port.log_entries)


def test_wrong_citation_rejected(interest_chart):
    port = ModelPort(url="http://unused.invalid/")
    reply = PortReply(answer="max is 9.9", cited_values=({"task": "max", "value": 9.9},))
    assert not port.verify_citations(reply, interest_chart, None)
    assert any(e["kind"] == "port_value_rejected" for e in port.log_entries)


def test_correct_citation_accepted(interest_chart):
    port = ModelPort(url="http://unused.invalid/")
    reply = PortReply(answer="max is 3.85%", cited_values=({"task": "max", "value": 3.85},))
    assert port.verify_citations(reply, interest_chart, None)


def test_build_request_schema(interest_chart):
    request = build_request("what is this", interest_chart, [], ["interest-rates"])
    assert request["chart"] == "interest-rates"
    assert {"name": "quarter", "type": "temporal"} in request["columns"]
    assert request["catalogue"] == ["interest-rates"]
    assert request["selections"] == []
