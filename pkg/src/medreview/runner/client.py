"""Chat-completion endpoint adapter and deterministic local stub.

The adapter isolates the provider wire shape: it POSTs the model name
and messages and extracts the completion text from either an
OpenAI-style response (choices[0].message.content) or a plain
{"content": ...} body. Credentials come from the MEDREVIEW_API_KEY
environment variable, never from config files.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Callable, Optional

import httpx

CREDENTIALS_ENV_VAR = "MEDREVIEW_API_KEY"


class EndpointUnavailable(RuntimeError):
    """The endpoint could not be reached (or kept failing) after retries."""


@dataclass(frozen=True)
class ModelConfig:
    model_name: str
    endpoint: str
    reasoning_effort: Optional[str] = None  # low | medium | high
    temperature: Optional[float] = None
    timeout_seconds: float = 120.0
    max_retries: int = 3

    def __post_init__(self) -> None:
        if self.reasoning_effort not in (None, "low", "medium", "high"):
            raise ValueError(f"invalid reasoning_effort {self.reasoning_effort!r}")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


class ChatEndpoint:
    def __init__(self, cfg: ModelConfig):
        self.cfg = cfg

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(CREDENTIALS_ENV_VAR)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def _payload(self, messages: list[dict]) -> dict:
        payload: dict = {"model": self.cfg.model_name, "messages": messages}
        if self.cfg.reasoning_effort is not None:
            payload["reasoning_effort"] = self.cfg.reasoning_effort
        if self.cfg.temperature is not None:
            payload["temperature"] = self.cfg.temperature
        return payload

    def check_reachable(self) -> None:
        """Run-start contract: the endpoint must answer HTTP at all."""
        try:
            httpx.get(self.cfg.endpoint, timeout=5.0)
        except httpx.HTTPError as e:
            raise EndpointUnavailable(f"endpoint {self.cfg.endpoint} unreachable: {e}")

    def complete(self, messages: list[dict]) -> str:
        """One completion; transport errors raise httpx exceptions."""
        response = httpx.post(
            self.cfg.endpoint,
            json=self._payload(messages),
            headers=self._headers(),
            timeout=self.cfg.timeout_seconds,
        )
        response.raise_for_status()
        body = response.json()
        if "choices" in body:
            return body["choices"][0]["message"]["content"]
        if "content" in body:
            return body["content"]
        raise EndpointUnavailable(f"unrecognised response shape: {sorted(body)}")


class StubEndpointServer:
    """Local HTTP stub producing deterministic structured reviews.

    The default behaviour flags a patient iff the rendered profile
    mentions any of a configured set of trigger substrings, emitting one
    issue per trigger found. A custom responder callable can override
    the full completion text (used to exercise retry paths).
    """

    DEFAULT_TRIGGERS = (
        "Methotrexate",
        "Warfarin",
        "Diltiazem",
        "Verapamil",
        "Risperidone",
        "Quetiapine",
        "Haloperidol",
        "Naproxen",
        "Ibuprofen",
        "Diclofenac",
    )

    def __init__(
        self,
        responder: Optional[Callable[[dict], str]] = None,
        triggers: tuple[str, ...] = DEFAULT_TRIGGERS,
    ):
        self.responder = responder or self._default_responder
        self.triggers = triggers
        self._server: Optional[ThreadingHTTPServer] = None
        self._thread: Optional[threading.Thread] = None
        self.request_count = 0

    def _default_responder(self, payload: dict) -> str:
        user_text = ""
        for msg in payload.get("messages", []):
            if msg.get("role") == "user":
                user_text = msg.get("content", "")
        found = [t for t in self.triggers if t in user_text]
        issues = [
            {
                "issue": f"Potential prescribing concern involving {t.lower()}",
                "evidence": f"{t} appears in the active medication record",
                "intervention_required": True,
            }
            for t in found
        ]
        flagged = bool(found)
        out = {
            "patient_review": "Structured medication review of the coded record.",
            "clinical_issues": issues,
            "intervention": (
                f"Review and address: {', '.join(t.lower() for t in found)}" if flagged else ""
            ),
            "intervention_required": flagged,
            "intervention_probability": 0.9 if flagged else 0.05,
        }
        return json.dumps(out)

    def start(self) -> str:
        stub = self

        class Handler(BaseHTTPRequestHandler):
            def do_GET(self):  # reachability probe
                self.send_response(200)
                self.end_headers()
                self.wfile.write(b"ok")

            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                payload = json.loads(self.rfile.read(length) or b"{}")
                stub.request_count += 1
                text = stub.responder(payload)
                body = json.dumps({"content": text}).encode()
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.end_headers()
                self.wfile.write(body)

            def log_message(self, *args):
                pass

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        host, port = self._server.server_address
        return f"http://{host}:{port}/v1/chat/completions"

    def stop(self) -> None:
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    def __enter__(self) -> str:
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()
