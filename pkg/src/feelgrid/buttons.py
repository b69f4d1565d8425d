"""Three-state button model: quick tap, long hold, two-button combo.

Quick taps release in under 200 ms. Holds fire once at 500 ms while the
button is still down (release adds nothing). Two down edges within 100 ms
form a combo and suppress both buttons' individual actions. Presses
released between the quick and hold thresholds are deliberately inert.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .config import ButtonConfig

BUTTONS = ("Left", "Right", "F1", "F2", "F3", "F4")


class ButtonAction(Enum):
    PAGE_LEFT = "page_left"
    PAGE_RIGHT = "page_right"
    PREV_POINT = "prev_point"
    NEXT_POINT = "next_point"
    PUSH_TO_TALK = "push_to_talk"
    STOP_OUTPUTS = "stop_outputs"
    REPEAT_AUDIO = "repeat_audio"
    REFRESH_DISPLAY = "refresh_display"
    PAN_LEFT = "pan_left"
    PAN_RIGHT = "pan_right"
    ZOOM_OUT = "zoom_out"
    ZOOM_IN = "zoom_in"


@dataclass(frozen=True)
class ButtonEvent:
    button: str
    edge: str  # down | up
    timestamp: float  # ms


QUICK_ACTIONS = {
    "Left": ButtonAction.PAGE_LEFT,
    "Right": ButtonAction.PAGE_RIGHT,
}

HOLD_ACTIONS = {
    "Left": ButtonAction.PREV_POINT,
    "Right": ButtonAction.NEXT_POINT,
    "F1": ButtonAction.PUSH_TO_TALK,
    "F2": ButtonAction.STOP_OUTPUTS,
    "F3": ButtonAction.REPEAT_AUDIO,
    "F4": ButtonAction.REFRESH_DISPLAY,
}

COMBO_ACTIONS = {
    frozenset(("Left", "F1")): ButtonAction.PAN_LEFT,
    frozenset(("Right", "F1")): ButtonAction.PAN_RIGHT,
    frozenset(("Left", "F2")): ButtonAction.ZOOM_OUT,
    frozenset(("Right", "F2")): ButtonAction.ZOOM_IN,
}


@dataclass
class _Press:
    button: str
    t_down: float
    in_combo: bool = False
    hold_fired: bool = False


class ButtonClassifier:
    """Incremental classifier; time advances through event timestamps or an
    explicit ``advance``. Replaying the same stream yields the same actions.
    """

    def __init__(self, config: ButtonConfig | None = None):
        self.config = config or ButtonConfig()
        self._down: dict[str, _Press] = {}
        self._last_edge: dict[str, str] = {}

    def advance(self, now: float) -> list[tuple[float, ButtonAction]]:
        """Fire hold actions for presses that reached the hold threshold."""
        out = []
        for press in self._down.values():
            if press.in_combo or press.hold_fired:
                continue
            fire_at = press.t_down + self.config.hold_ms
            if now >= fire_at:
                press.hold_fired = True
                action = HOLD_ACTIONS.get(press.button)
                if action is not None:
                    out.append((fire_at, action))
        out.sort(key=lambda t: t[0])
        return out

    def feed(self, event: ButtonEvent) -> list[tuple[float, ButtonAction]]:
        if self._last_edge.get(event.button) == event.edge:
            raise ValueError(f"{event.button} sent two {event.edge!r} edges in a row")
        self._last_edge[event.button] = event.edge
        out = self.advance(event.timestamp)
        if event.edge == "down":
            press = _Press(button=event.button, t_down=event.timestamp)
            # pair with an unpaired live press whose down edge is close enough
            for other in self._down.values():
                if (
                    not other.in_combo
                    and not other.hold_fired
                    and event.timestamp - other.t_down <= self.config.combo_window_ms
                ):
                    press.in_combo = True
                    other.in_combo = True
                    action = COMBO_ACTIONS.get(frozenset((press.button, other.button)))
                    if action is not None:
                        out.append((event.timestamp, action))
                    break
            self._down[event.button] = press
            return out
        press = self._down.pop(event.button, None)
        if press is None or press.in_combo or press.hold_fired:
            return out
        duration = event.timestamp - press.t_down
        if duration < self.config.quick_max_ms:
            action = QUICK_ACTIONS.get(press.button)
            if action is not None:
                out.append((event.timestamp, action))
        return out


def classify_buttons(events, config: ButtonConfig | None = None) -> list[tuple[float, ButtonAction]]:
    """Batch classification; a dangling down at stream end emits nothing."""
    clf = ButtonClassifier(config)
    actions: list[tuple[float, ButtonAction]] = []
    for e in events:
        actions.extend(clf.feed(e))
    return actions
