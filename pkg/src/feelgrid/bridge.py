"""Console bridge: a TCP socket carrying bus envelopes as line-delimited
JSON (UTF-8, one envelope per line; schema in docs/wire.md).

On connect a client immediately receives the current catalogue envelope
and the latest frame, then every subsequent envelope on any topic.
Inbound lines are published onto the bus; the session worker picks up
touch/button/query envelopes from there. Browsers cannot open raw TCP
sockets, so a production console would sit behind a small WebSocket relay;
the protocol itself is transport-agnostic.
"""

from __future__ import annotations

import json
import logging
import socket
import socketserver
import threading

from .bus import Bus, Envelope
from .errors import FeelgridError

log = logging.getLogger(__name__)

INBOUND_TOPICS = ("user/query", "session/event")


class BridgeServer:
    def __init__(self, bus: Bus, host: str = "127.0.0.1", port: int = 0,
                 hello: callable = None):
        self.bus = bus
        self.hello = hello  # () -> list[Envelope] sent to each new client
        self._clients: list[socket.socket] = []
        self._lock = threading.Lock()
        bridge = self

        class Handler(socketserver.StreamRequestHandler):
            def handle(self):
                bridge._serve_client(self)

        class Server(socketserver.ThreadingTCPServer):
            allow_reuse_address = True
            daemon_threads = True

        self.server = Server((host, port), Handler)
        self.port = self.server.server_address[1]
        self._threads: list[threading.Thread] = []

    def start(self) -> None:
        thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        thread.start()
        self._threads.append(thread)

    def stop(self) -> None:
        self.server.shutdown()
        self.server.server_close()
        with self._lock:
            for client in self._clients:
                try:
                    client.close()
                except OSError:
                    pass
            self._clients.clear()

    def _serve_client(self, handler: socketserver.StreamRequestHandler) -> None:
        sock = handler.connection
        with self._lock:
            self._clients.append(sock)
        subscription = self.bus.subscribe("+/+")
        stop = threading.Event()

        def writer():
            try:
                for envelope in self.hello() if self.hello else []:
                    handler.wfile.write((envelope.to_json() + "\n").encode("utf-8"))
                handler.wfile.flush()
                while not stop.is_set():
                    envelope = subscription.get(timeout=0.2)
                    if envelope is None:
                        continue
                    handler.wfile.write((envelope.to_json() + "\n").encode("utf-8"))
                    handler.wfile.flush()
            except (OSError, ValueError):
                pass

        writer_thread = threading.Thread(target=writer, daemon=True)
        writer_thread.start()
        try:
            for raw in handler.rfile:
                line = raw.decode("utf-8").strip()
                if not line:
                    continue
                self._publish_inbound(line)
        except (OSError, ValueError):
            pass
        finally:
            stop.set()
            subscription.unsubscribe()
            writer_thread.join(timeout=1.0)
            with self._lock:
                if sock in self._clients:
                    self._clients.remove(sock)

    def _publish_inbound(self, line: str) -> None:
        try:
            obj = json.loads(line)
            topic = obj["topic"]
            payload = obj.get("payload", {})
            timestamp = float(obj.get("t", 0.0))
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("bridge: bad inbound line: %s", exc)
            return
        if topic not in INBOUND_TOPICS:
            log.warning("bridge: inbound topic %r not accepted", topic)
            return
        try:
            self.bus.publish(topic, payload, timestamp=timestamp)
        except FeelgridError as exc:
            log.warning("bridge: rejected inbound envelope: %s", exc)


def catalogue_hello(session) -> callable:
    """Hello callback sending the catalogue and, if present, the current
    frame to a newly connected console."""

    def hello() -> list[Envelope]:
        envelopes = [
            Envelope(topic="vis/catalogue", payload=session.catalogue_payload(), seq=0,
                     timestamp=session.now)
        ]
        if session.frame is not None:
            envelopes.append(
                Envelope(topic="device/frame", payload=session.frame_payload(), seq=0,
                         timestamp=session.now)
            )
        return envelopes

    return hello
