"""Optional HTTP port to an external language model.

Inert unless FEELGRID_MODEL_URL is set. The request/response message
schema lives in docs/wire.md. Any numeric claim the endpoint returns is
re-verified against the deterministic calculation pipeline before use;
timeouts and malformed replies downgrade to the deterministic path and
are logged, never raised to the user.
"""

from __future__ import annotations

import json
import logging
import urllib.error
import urllib.request
from dataclasses import dataclass, field

from .analytics import ExtremeResult, ScalarResult, calculate
from .chart import LoadedChart
from .errors import EmptyRangeError, FeelgridError, PortSchemaError, PortTimeoutError

log = logging.getLogger(__name__)

VERIFY_EPS = 1e-9
_VERIFIABLE = ("min", "max", "mean", "sum", "count")


@dataclass(frozen=True)
class PortReply:
    intent: str | None = None
    answer: str | None = None
    cited_values: tuple[dict, ...] = ()


@dataclass
class ModelPort:
    url: str | None = None
    timeout_s: float = 10.0
    log_entries: list[dict] = field(default_factory=list)

    @property
    def configured(self) -> bool:
        return bool(self.url)

    def ask(self, request: dict) -> PortReply | None:
        """One round trip; None means the deterministic path stands alone."""
        if not self.configured:
            return None
        body = json.dumps(request).encode("utf-8")
        req = urllib.request.Request(
            self.url, data=body, headers={"Content-Type": "application/json"}, method="POST"
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout_s) as resp:
                raw = resp.read()
        except (urllib.error.URLError, TimeoutError, OSError) as exc:
            self._log("port_timeout", str(exc))
            return None
        try:
            obj = json.loads(raw.decode("utf-8"))
            if not isinstance(obj, dict):
                raise PortSchemaError("reply must be a JSON object")
            cited = obj.get("cited_values", [])
            if not isinstance(cited, list) or any(not isinstance(c, dict) for c in cited):
                raise PortSchemaError("cited_values must be a list of objects")
            return PortReply(
                intent=obj.get("intent"),
                answer=obj.get("answer"),
                cited_values=tuple(cited),
            )
        except (ValueError, PortSchemaError) as exc:
            self._log("port_schema_error", str(exc))
            return None

    def verify_citations(
        self,
        reply: PortReply,
        chart: LoadedChart,
        x_range: tuple[float, float] | None,
    ) -> bool:
        """True when every verifiable numeric claim matches the pipeline."""
        for cited in reply.cited_values:
            task = cited.get("task")
            value = cited.get("value")
            if task not in _VERIFIABLE or not isinstance(value, (int, float)):
                continue
            try:
                result = calculate(
                    task, chart.table, chart.spec.x.field, chart.spec.y.field, x_range
                )
            except (EmptyRangeError, FeelgridError):
                continue
            truth = result.value if isinstance(result, (ExtremeResult, ScalarResult)) else None
            if truth is None:
                continue
            if abs(float(truth) - float(value)) > VERIFY_EPS:
                self._log(
                    "port_value_rejected",
                    f"{task}: endpoint said {value}, pipeline computed {truth}",
                )
                return False
        return True

    def _log(self, kind: str, detail: str) -> None:
        entry = {"kind": kind, "detail": detail}
        self.log_entries.append(entry)
        log.warning("%s: %s", kind, detail)


def build_request(
    transcript: str,
    chart: LoadedChart,
    selections,
    catalogue_names: list[str],
) -> dict:
    return {
        "transcript": transcript,
        "chart": chart.spec.name,
        "columns": chart.table.schema(),
        "selections": [
            {
                "finger": s.finger,
                "element_id": s.element_id,
                "kind": s.kind,
                "label": s.label,
                "probability": s.probability,
            }
            for s in selections
        ],
        "catalogue": catalogue_names,
    }
