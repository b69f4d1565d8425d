"""Headless interactive session: one chart, one device, one command stream.

The session owns the virtual clock (milliseconds; replay time never reads
the wall clock), the viewport, the touch/button state machines, the
selection cache, the playback machine, and the simulated device. Every
input enters through feed_touch / feed_button / submit_query, which keeps
the single-owner concurrency story honest: producers on other threads must
serialize through one queue in front of these calls.
"""

from __future__ import annotations

import base64
import logging
from dataclasses import replace

from . import output as output_mod
from .analytics import calculate
from .buttons import ButtonAction, ButtonClassifier, ButtonEvent
from .bus import Bus
from .catalogue import ChartCatalogue
from .chart import LoadedChart, load_chart
from .config import SessionConfig, model_port_url
from .deictic import classify_deictic
from .device import SimulatedDevice
from .errors import (
    EmptyRangeError,
    FeelgridError,
    NoCoarserLayerError,
    NoFinerLayerError,
)
from .frame import TactileFrame
from .intents import Intent, IntentCategory, route_intent
from .model_port import ModelPort, build_request
from .output import PlaybackMachine, miss_response, segment_response, touch_response
from .protocol import braille_line_packet, clear_packet, full_frame_packet, pulse_packet
from .renderer import render
from .responder import (
    AgentResponse,
    clarification,
    data_answer,
    image_answer,
    load_answer,
    operation_answer,
    overview_answer,
)
from .temporal import TemporalValue
from .touch import (
    ContactTracker,
    TapClassifier,
    TouchContext,
    TouchFrame,
    cache_selection,
    resolve_double_tap,
)
from .viewport import ViewportState, initial_viewport, pan, select_layer, zoom

log = logging.getLogger(__name__)


class Session:
    def __init__(
        self,
        catalogue: ChartCatalogue,
        bus: Bus | None = None,
        device: SimulatedDevice | None = None,
        config: SessionConfig | None = None,
        port: ModelPort | None = None,
    ):
        self.catalogue = catalogue
        self.config = config or SessionConfig()
        self.now = 0.0
        self.bus = bus if bus is not None else Bus(clock=lambda: self.now)
        self.device = device if device is not None else SimulatedDevice()
        self.port = port if port is not None else ModelPort(
            url=model_port_url(), timeout_s=self.config.agent.port_timeout_s
        )
        self.chart: LoadedChart | None = None
        self.entry = None
        self.viewport: ViewportState | None = None
        self.frame: TactileFrame | None = None
        self._frame_counter = 0
        self.contact = ContactTracker(self.config.touch)
        self.taps = TapClassifier(self.config.touch)
        self.btns = ButtonClassifier(self.config.buttons)
        self.touch_context = TouchContext(ttl_ms=self.config.touch.selection_ttl_ms)
        self.playback = PlaybackMachine(config=self.config.output)
        self.braille_page = 0
        self.data_cursor = -1
        self.listening = False
        self.dialogue_turn = 0
        self.last_response: AgentResponse | None = None
        self._port_reply = None
        self.log: list[dict] = []
        self.bus.publish("vis/catalogue", self.catalogue_payload(), timestamp=self.now)

    # --- clock and logging ---------------------------------------------------

    def _advance(self, t: float) -> None:
        t = max(self.now, t)
        for fire_t, action in self.btns.advance(t):
            self._drain_playback(fire_t)
            self.now = max(self.now, fire_t)
            self._apply_action(action, fire_t)
        self._drain_playback(t)
        self.now = t

    def _drain_playback(self, to_t: float) -> None:
        for event in self.playback.advance(to_t):
            self._emit_playback(event)

    def _log(self, kind: str, t: float | None = None, **payload) -> dict:
        entry = {"t": self.now if t is None else t, "kind": kind, **payload}
        self.log.append(entry)
        return entry

    def _event(self, kind: str, t: float | None = None, **payload) -> None:
        entry = self._log(kind, t=t, **payload)
        self.bus.publish("session/event", entry, timestamp=entry["t"])

    # --- catalogue and chart loading -----------------------------------------

    def catalogue_payload(self) -> dict:
        return {"charts": self.catalogue.summary()}

    def load_chart_by_name(self, name: str, t: float | None = None) -> bool:
        if t is not None:
            self._advance(t)
        entry = self.catalogue.get(name) or self.catalogue.find(name)
        if entry is None:
            return False
        self.entry = entry
        self.chart = load_chart(entry.spec)
        self.viewport = initial_viewport(self.chart)
        self.touch_context.clear()
        self.data_cursor = -1
        self._render_and_publish()
        self._event("chart_loaded", name=entry.name, rows=self.chart.table.row_count)
        return True

    def _render_and_publish(self) -> None:
        assert self.chart is not None and self.viewport is not None
        self._frame_counter += 1
        self.frame = render(self.chart, self.viewport, frame_id=self._frame_counter)
        self.braille_page = 0
        self.device.apply(full_frame_packet(self.frame.pins), t=self.now)
        self._send_braille_page()
        self.bus.publish("device/frame", self.frame_payload(), timestamp=self.now)

    def frame_payload(self) -> dict:
        assert self.frame is not None
        pages = self.frame.braille_pages
        return {
            "frame_id": self.frame.frame_id,
            "pins": base64.b64encode(self.frame.pins).decode("ascii"),
            "semantic": base64.b64encode(self.frame.semantic).decode("ascii"),
            "braille": list(pages[self.braille_page]) if pages else [],
            "braille_page": self.braille_page,
            "braille_pages": len(pages),
            "empty_viewport": self.frame.empty_viewport,
        }

    def _send_braille_page(self) -> None:
        pages = self.frame.braille_pages if self.frame else ()
        cells = pages[self.braille_page] if pages and self.braille_page < len(pages) else ()
        self.device.apply(braille_line_packet(cells), t=self.now)

    # --- touch pipeline --------------------------------------------------------

    def feed_touch(self, touch: TouchFrame) -> None:
        self._advance(touch.timestamp)
        for contact_event in self.contact.feed(touch):
            for gesture in self.taps.feed(contact_event):
                self._handle_gesture(gesture)

    def flush_gestures(self) -> None:
        """Finalize pending taps (end of a replay or an idle timeout)."""
        for gesture in self.taps.flush():
            self._handle_gesture(gesture)

    def _handle_gesture(self, gesture) -> None:
        if gesture.kind in ("tap", "double_tap"):
            self._log("gesture", t=gesture.timestamp, gesture=gesture.kind,
                      finger=gesture.finger, cell=list(gesture.grid_cell))
        if gesture.kind != "double_tap" or self.frame is None:
            return
        resolved = resolve_double_tap(gesture, self.frame, self.config.touch)
        selection = cache_selection(self.touch_context, resolved, self.frame)
        if selection is None:
            response = miss_response(self.now, self.frame.frame_id, self.config.output)
            self._event("miss", finger=gesture.finger, cell=list(gesture.grid_cell))
            self._speak(response.speech.text)
            return
        self._event(
            "selection",
            finger=selection.finger,
            element=selection.element_id,
            label=selection.label,
            probability=round(selection.probability, 6),
        )
        live = self.touch_context.snapshot(self.now)
        response = touch_response(
            live,
            self.frame,
            self.chart.spec.y.field,
            self.chart.spec.y.unit,
            self.now,
            self.config.output,
        )
        self._issue_touch_response(response)

    def _issue_touch_response(self, response) -> None:
        if self.playback.active:  # single-focus rule: new feedback preempts
            for event in self.playback.control(ButtonAction.STOP_OUTPUTS, self.now):
                self._emit_playback(event)
        if response.highlight is not None:
            cfg = self.config.output
            self.device.apply(
                pulse_packet(
                    sorted(response.highlight.cells),
                    response.highlight.pulse_rate_hz,
                    cfg.pulse_duty,
                    int(response.highlight.persist_ms or cfg.highlight_persist_ms),
                ),
                t=self.now,
            )
            self._log("highlight", cells=sorted(map(list, response.highlight.cells)))
        if response.braille_pages:
            self.device.apply(braille_line_packet(response.braille_pages[0]), t=self.now)
        self._speak(response.speech.text)

    def _speak(self, text: str) -> None:
        duration = output_mod.speech_duration_ms(text, self.config.output)
        self._event("speech", text=text, duration=duration)

    # --- buttons -----------------------------------------------------------------

    def feed_button(self, event: ButtonEvent) -> None:
        self._advance(event.timestamp)
        for t, action in self.btns.feed(event):
            self._apply_action(action, t)

    def _apply_action(self, action: ButtonAction, t: float) -> None:
        self._log("action", t=t, action=action.value)
        if self.playback.active and action in (
            ButtonAction.PAGE_LEFT,
            ButtonAction.PAGE_RIGHT,
            ButtonAction.STOP_OUTPUTS,
            ButtonAction.REPEAT_AUDIO,
        ):
            for event in self.playback.control(action, t):
                self._emit_playback(event)
            return
        if action in (ButtonAction.PAGE_LEFT, ButtonAction.PAGE_RIGHT):
            self._page_braille(1 if action == ButtonAction.PAGE_RIGHT else -1)
        elif action in (ButtonAction.PREV_POINT, ButtonAction.NEXT_POINT):
            self._step_data_cursor(1 if action == ButtonAction.NEXT_POINT else -1)
        elif action == ButtonAction.PUSH_TO_TALK:
            self.listening = True
            self._event("listening")
        elif action == ButtonAction.STOP_OUTPUTS:
            self._restore_frame()
            self._event("stopped")
        elif action == ButtonAction.REPEAT_AUDIO:
            last = next((e for e in reversed(self.log) if e["kind"] == "speech"), None)
            if last:
                self._speak(last["text"])
        elif action == ButtonAction.REFRESH_DISPLAY:
            if self.frame is not None:
                self.device.apply(full_frame_packet(self.frame.pins), t=self.now)
                self.bus.publish("device/frame", self.frame_payload(), timestamp=self.now)
        elif action in (ButtonAction.PAN_LEFT, ButtonAction.PAN_RIGHT):
            self._viewport_op("pan", "left" if action == ButtonAction.PAN_LEFT else "right")
        elif action in (ButtonAction.ZOOM_IN, ButtonAction.ZOOM_OUT):
            self._viewport_op(
                "zoom", "geometric_in" if action == ButtonAction.ZOOM_IN else "geometric_out"
            )

    def _page_braille(self, step: int) -> None:
        pages = self.frame.braille_pages if self.frame else ()
        if not pages:
            return
        self.braille_page = max(0, min(len(pages) - 1, self.braille_page + step))
        self._send_braille_page()
        self._event("braille_page", page=self.braille_page)
        self.bus.publish("device/frame", self.frame_payload(), timestamp=self.now)

    def _step_data_cursor(self, step: int) -> None:
        if self.frame is None:
            return
        data = self.frame.data_elements()
        if not data:
            return
        self.data_cursor = max(0, min(len(data) - 1, self.data_cursor + step))
        element = data[self.data_cursor]
        cfg = self.config.output
        ring = output_mod.ring_cells(element.grid_position, element.footprint)
        if ring:
            self.device.apply(
                pulse_packet(sorted(ring), cfg.pulse_rate_hz, cfg.pulse_duty,
                             int(cfg.highlight_persist_ms)),
                t=self.now,
            )
        self._event("data_cursor", element=element.element_id, label=element.label)
        self._speak(element.label)

    def _restore_frame(self) -> None:
        if self.frame is not None:
            self.device.apply(full_frame_packet(self.frame.pins), t=self.now)
        else:
            self.device.apply(clear_packet(), t=self.now)

    def _viewport_op(self, op: str, direction: str) -> AgentResponse:
        if self.chart is None or self.viewport is None:
            return clarification("No chart is loaded yet. Which chart should I load?")
        try:
            if op == "pan":
                self.viewport = pan(self.viewport, direction, self.chart)
            elif op == "zoom":
                self.viewport = zoom(self.viewport, direction, self.chart)
                if self.chart.layers and direction.startswith("geometric"):
                    self.viewport = replace(
                        self.viewport, active_layer=select_layer(self.chart, self.viewport)
                    )
            elif op == "refresh":
                pass
        except (NoFinerLayerError, NoCoarserLayerError) as exc:
            return operation_answer(op, direction, ok=False, detail=str(exc))
        self._render_and_publish()
        return operation_answer(op, direction, ok=True)

    # --- queries -----------------------------------------------------------------

    def submit_query(self, text: str, t: float | None = None) -> AgentResponse:
        if t is not None:
            self._advance(t)
        self.flush_gestures()
        self.listening = False
        self.dialogue_turn += 1
        self._event("query", text=text)
        response = self._answer(text)
        self.last_response = response
        self._publish_response(response)
        return response

    def _answer(self, text: str) -> AgentResponse:
        selections = self.touch_context.snapshot(self.now)
        if self.chart is None:
            intent = route_intent(text)
            if intent.category == IntentCategory.LOAD_CHART:
                return self._do_load(intent)
            return clarification(
                "No chart is loaded yet. Which chart should I load? Available: "
                + ", ".join(self.catalogue.names())
                + "."
            )
        deictic = classify_deictic(
            text,
            selections,
            self.now,
            self.chart.spec.x.field,
            self.chart.spec.y.field,
            self.chart.spec.y.unit,
            self.config.agent,
            self.config.touch,
        )
        if deictic.augmented:
            self._event("augmented_query", text=deictic.text,
                        confidence=round(deictic.confidence, 4))
        intent = route_intent(deictic.text, has_touch_range=len(deictic.selections) >= 1)
        intent = self._maybe_port_override(deictic.text, intent, deictic)
        if intent.category == IntentCategory.LOAD_CHART:
            return self._do_load(intent)
        if intent.category == IntentCategory.OVERVIEW:
            return overview_answer(self.chart, self.frame)
        if intent.category == IntentCategory.IMAGE_ANALYSIS:
            return image_answer(self.chart, self.entry.preview is not None if self.entry else False)
        if intent.category == IntentCategory.OPERATIONS:
            return self._viewport_op(intent.slots.get("op", "refresh"),
                                     intent.slots.get("direction", ""))
        return self._do_explore(text, intent, deictic)

    def _maybe_port_override(self, text: str, intent: Intent, deictic) -> Intent:
        if not self.port.configured or self.chart is None:
            return intent
        request = build_request(text, self.chart, deictic.selections, self.catalogue.names())
        reply = self.port.ask(request)
        if reply is None:
            return intent
        self._port_reply = reply
        if reply.intent:
            try:
                return Intent(IntentCategory(reply.intent), slots=intent.slots)
            except ValueError:
                pass
        return intent

    def _do_load(self, intent: Intent) -> AgentResponse:
        name = intent.slots.get("name", "")
        if not self.load_chart_by_name(name):
            return clarification(
                f"Which chart do you mean by {name!r}? Available: "
                + ", ".join(self.catalogue.names())
                + ".",
                intent="LoadChart",
            )
        return load_answer(self.chart)

    def _selection_range(self, deictic) -> tuple[float, float] | None:
        xs = []
        for s in deictic.selections:
            if s.kind != "datum" or s.datum is None:
                continue
            x_raw = s.datum[0]
            if isinstance(x_raw, TemporalValue):
                xs.append(float(x_raw.ordinal))
            elif isinstance(x_raw, (int, float)):
                xs.append(float(x_raw))
        if len(xs) >= 2:
            return (min(xs), max(xs))
        return None

    def _those_points_range(self, text: str) -> tuple[float, float] | None:
        """Dialogue continuity: 'those points' can reach the previous
        answer's referents when nothing is freshly selected."""
        import re as _re

        if self.last_response is None or self.frame is None:
            return None
        if not _re.search(r"\bthose\b", text.lower()):
            return None
        xs = []
        for ids in self.last_response.sentence_elements:
            for eid in ids:
                element = self.frame.element(eid)
                if element and element.datum is not None:
                    x_raw = element.datum[0]
                    if isinstance(x_raw, TemporalValue):
                        xs.append(float(x_raw.ordinal))
                    elif isinstance(x_raw, (int, float)):
                        xs.append(float(x_raw))
        if len(xs) >= 2:
            return (min(xs), max(xs))
        return None

    def _do_explore(self, original: str, intent: Intent, deictic) -> AgentResponse:
        assert self.chart is not None
        if deictic.has_markers and not deictic.selections:
            x_range = self._those_points_range(original)
            if x_range is None:
                return clarification(
                    "Which point do you mean? Double-tap a data point, then ask again."
                )
        else:
            x_range = self._selection_range(deictic)
        if intent.needs_clarification:
            chart_name = self.chart.spec.title or self.chart.spec.name
            return clarification(
                f"What would you like to know about {chart_name}? "
                "For example the trend, maximum, or average."
            )
        task = intent.slots.get("task", "range_describe")
        x_at = None
        if task == "value_at" and len(deictic.selections) == 1:
            s = deictic.selections[0]
            if s.datum is not None:
                x_raw = s.datum[0]
                x_at = float(x_raw.ordinal) if isinstance(x_raw, TemporalValue) else (
                    float(x_raw) if isinstance(x_raw, (int, float)) else None
                )
        if task == "value_at" and x_at is None and x_range is not None:
            x_at = x_range[0]
        if task == "value_at" and x_at is None:
            return clarification("Which point should I read? Double-tap it, then ask again.")
        if task == "compare_points" and x_range is None:
            return clarification(
                "Which two points should I compare? Double-tap one with each finger."
            )
        try:
            result = calculate(
                task,
                self.chart.table,
                self.chart.spec.x.field,
                self.chart.spec.y.field,
                x_range,
                x_at,
            )
        except EmptyRangeError:
            return clarification("No data falls in that range. Which points do you mean?")
        except FeelgridError as exc:
            return clarification(f"I could not compute that: {exc}. Could you rephrase?")
        response = data_answer(
            result,
            self.chart,
            self.frame,
            selections=deictic.selections,
            confidence=deictic.confidence if deictic.augmented else 1.0,
            config=self.config.agent,
        )
        return self._maybe_port_answer(response, x_range)

    def _maybe_port_answer(self, response: AgentResponse, x_range) -> AgentResponse:
        reply = getattr(self, "_port_reply", None)
        self._port_reply = None
        if reply is None or not reply.answer or self.chart is None:
            return response
        if self.port.verify_citations(reply, self.chart, x_range):
            from .output import sentence_spans

            return replace(
                response,
                text=reply.answer,
                sentence_elements=((),) * len(sentence_spans(reply.answer)),
            )
        return response  # deterministic value wins; discrepancy already logged

    def _publish_response(self, response: AgentResponse) -> None:
        chunks = segment_response(
            response.text,
            [list(ids) for ids in response.sentence_elements],
            self.frame,
            self.config.output,
        )
        self.bus.publish(
            "agent/response",
            {
                "text": response.text,
                "intent": response.intent,
                "confidence": round(response.confidence, 4),
                "word_count": response.word_count,
                "chunks": [
                    {
                        "index": c.index,
                        "text": c.text,
                        "elements": list(c.referenced_elements),
                        "cells": sorted(map(list, c.highlight.cells)) if c.highlight else [],
                    }
                    for c in chunks
                ],
            },
            timestamp=self.now,
        )
        for command in response.commands:
            self.bus.publish("agent/command", dict(command), timestamp=self.now)
        self._log("response", text=response.text, intent=response.intent,
                  words=response.word_count)
        for event in self.playback.start(chunks, self.now):
            self._emit_playback(event)

    def _emit_playback(self, event: dict) -> None:
        entry = dict(event)
        entry["kind"] = f"playback_{event['kind']}"
        self.log.append(entry)
        self.bus.publish("session/event", entry, timestamp=event["t"])
        if event["kind"] == "highlight" and self.frame is not None:
            cfg = self.config.output
            cells = [tuple(c) for c in event["cells"]]
            if cells:
                chunk = self.playback.chunks[event["chunk"]]
                duration = output_mod.speech_duration_ms(chunk.text, cfg)
                self.device.apply(
                    pulse_packet(cells, cfg.pulse_rate_hz, cfg.pulse_duty, int(duration)),
                    t=event["t"],
                )
        elif event["kind"] == "speech":
            self._log("speech", t=event["t"], text=event["text"], chunk=event.get("chunk"))
        elif event["kind"] == "clear":
            self._restore_frame()

    # --- replay support -------------------------------------------------------

    def finish(self) -> None:
        """Drain pending taps and run playback to completion."""
        self.flush_gestures()
        for event in self.playback.finish():
            self._emit_playback(event)

    def state_digest(self) -> str:
        import hashlib

        h = hashlib.sha256()
        if self.frame is not None:
            h.update(self.frame.pins)
            h.update(self.frame.semantic)
        h.update(bytes(self.device.pins))
        h.update(bytes(self.device.braille))
        return h.hexdigest()

    def transcript(self) -> list[str]:
        return [e["text"] for e in self.log if e["kind"] == "speech"]
