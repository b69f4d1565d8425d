// Browser entry point. The bridge speaks line-delimited JSON over raw
// TCP, which browsers cannot open directly; point FEELGRID_WS (or the
// ?ws= query parameter) at a WebSocket-to-TCP relay in front of
// `feelgrid serve`.

import { createConsole } from "./app.js";
import { BridgeConnection, webSocketTransport } from "./connection.js";

const params = new URLSearchParams(window.location.search);
const url = params.get("ws") ?? "ws://127.0.0.1:8766/";

const connection = new BridgeConnection(webSocketTransport(url));
const root = document.getElementById("console-root");
if (root) {
  createConsole(document, root, connection, () => performance.now());
  void connection.open();
}
