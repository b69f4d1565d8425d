// Transport abstraction over the console bridge. The console itself is
// transport-agnostic: tests inject a TCP-backed transport from node, and a
// browser deployment can plug a WebSocket adapter pointed at a WS-to-TCP
// relay. Reconnection uses capped exponential backoff and surfaces
// connection state for the disconnect banner.

import { Envelope, LineDecoder, encodeLine } from "./protocol.js";

export interface Transport {
  send(line: string): void;
  onData(handler: (chunk: string) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

export type TransportFactory = () => Promise<Transport>;

export type ConnectionState = "connecting" | "open" | "down";

export interface ConnectionEvents {
  envelope: (envelope: Envelope) => void;
  state: (state: ConnectionState) => void;
}

export class BridgeConnection {
  private decoder = new LineDecoder();
  private transport: Transport | null = null;
  private handlers: { [K in keyof ConnectionEvents]: ConnectionEvents[K][] } = {
    envelope: [],
    state: [],
  };
  private closed = false;
  private retryMs = 250;

  constructor(private factory: TransportFactory, private maxRetryMs = 4000) {}

  on<K extends keyof ConnectionEvents>(event: K, handler: ConnectionEvents[K]): void {
    this.handlers[event].push(handler);
  }

  private emitState(state: ConnectionState): void {
    for (const handler of this.handlers.state) handler(state);
  }

  async open(): Promise<void> {
    this.emitState("connecting");
    try {
      const transport = await this.factory();
      this.transport = transport;
      this.decoder = new LineDecoder();
      transport.onData((chunk) => {
        for (const envelope of this.decoder.push(chunk)) {
          for (const handler of this.handlers.envelope) handler(envelope);
        }
      });
      transport.onClose(() => this.handleDown());
      this.retryMs = 250;
      this.emitState("open");
    } catch {
      this.handleDown();
    }
  }

  private handleDown(): void {
    this.transport = null;
    if (this.closed) return;
    this.emitState("down");
    const wait = this.retryMs;
    this.retryMs = Math.min(this.retryMs * 2, this.maxRetryMs);
    setTimeout(() => {
      if (!this.closed) void this.open();
    }, wait);
  }

  send(envelope: Envelope): void {
    this.transport?.send(encodeLine(envelope));
  }

  get isOpen(): boolean {
    return this.transport !== null;
  }

  close(): void {
    this.closed = true;
    this.transport?.close();
    this.transport = null;
  }
}

/** Browser adapter: one JSON envelope per WebSocket text message or line. */
export function webSocketTransport(url: string): TransportFactory {
  return () =>
    new Promise<Transport>((resolve, reject) => {
      const socket = new WebSocket(url);
      const dataHandlers: ((chunk: string) => void)[] = [];
      const closeHandlers: (() => void)[] = [];
      socket.onopen = () =>
        resolve({
          send: (line) => socket.send(line),
          onData: (handler) => dataHandlers.push(handler),
          onClose: (handler) => closeHandlers.push(handler),
          close: () => socket.close(),
        });
      socket.onerror = () => reject(new Error(`cannot reach ${url}`));
      socket.onmessage = (event) => {
        const text = typeof event.data === "string" ? event.data : "";
        const line = text.endsWith("\n") ? text : text + "\n";
        for (const handler of dataHandlers) handler(line);
      };
      socket.onclose = () => {
        for (const handler of closeHandlers) handler();
      };
    });
}
