"""Language-model provider contract and its three implementations.

``send(prompt, timeout)`` returns raw response text. Providers raise
``ProviderError`` when no response can be produced; the binding engine treats
that as a signal to fall back.
"""

from __future__ import annotations

import hashlib
import os
import pathlib
from typing import Optional, Protocol

ENV_PROVIDER = "NARRACHART_PROVIDER"
ENV_URL = "NARRACHART_PROVIDER_URL"
ENV_MODEL = "NARRACHART_MODEL"
ENV_API_KEY = "NARRACHART_API_KEY"
ENV_FIXTURE_DIR = "NARRACHART_FIXTURE_DIR"


class ProviderError(RuntimeError):
    pass


class FixtureMissing(ProviderError):
    pass


class LlmProvider(Protocol):
    name: str

    def send(self, prompt, timeout: float = 60.0) -> str: ...


class NullProvider:
    """Provider that never answers; forces the deterministic fallback path."""

    name = "null"

    def send(self, prompt, timeout: float = 60.0) -> str:
        raise ProviderError("null provider has no responses")


class FixtureProvider:
    """Replays recorded responses keyed by a hash of the rendered prompt."""

    name = "fixture"

    def __init__(self, directory: str):
        self.directory = pathlib.Path(directory)

    @staticmethod
    def request_key(prompt) -> str:
        rendered = prompt.render() if hasattr(prompt, "render") else str(prompt)
        return hashlib.sha256(rendered.encode("utf-8")).hexdigest()[:16]

    def _path(self, prompt) -> pathlib.Path:
        return self.directory / f"{self.request_key(prompt)}.txt"

    def send(self, prompt, timeout: float = 60.0) -> str:
        path = self._path(prompt)
        if not path.exists():
            raise FixtureMissing(f"no recorded response at {path}")
        return path.read_text(encoding="utf-8")

    def record(self, prompt, response: str) -> pathlib.Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self._path(prompt)
        path.write_text(response, encoding="utf-8")
        return path


class HttpChatProvider:
    """Chat-completion client; endpoint, model and key come from the environment."""

    name = "http"

    def __init__(
        self,
        url: Optional[str] = None,
        model: Optional[str] = None,
        api_key: Optional[str] = None,
        timeout: float = 60.0,
    ):
        self.url = url or os.environ.get(ENV_URL, "")
        self.model = model or os.environ.get(ENV_MODEL, "gpt-3.5-turbo")
        self.api_key = api_key or os.environ.get(ENV_API_KEY, "")
        self.timeout = timeout
        if not self.url:
            raise ValueError(f"provider URL missing; set {ENV_URL}")

    def send(self, prompt, timeout: Optional[float] = None) -> str:
        import requests

        system = getattr(prompt, "system_instruction", "")
        body = prompt.render_body() if hasattr(prompt, "render_body") else str(prompt)
        payload = {
            "model": self.model,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": body},
            ],
            "temperature": 0,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = requests.post(
                self.url, json=payload, headers=headers, timeout=timeout or self.timeout
            )
            resp.raise_for_status()
            data = resp.json()
            return data["choices"][0]["message"]["content"]
        except Exception as exc:  # network, HTTP and schema errors all degrade
            raise ProviderError(f"chat completion failed: {exc}") from exc


def make_provider(spec: Optional[str] = None, fixture_dir: Optional[str] = None):
    """Build a provider from a selector string (null | fixture | http)."""
    spec = (spec or os.environ.get(ENV_PROVIDER, "null")).lower()
    if spec in ("null", "none", ""):
        return NullProvider()
    if spec == "fixture":
        directory = fixture_dir or os.environ.get(ENV_FIXTURE_DIR)
        if not directory:
            raise ValueError(f"fixture provider needs a directory; set {ENV_FIXTURE_DIR}")
        return FixtureProvider(directory)
    if spec == "http":
        return HttpChatProvider()
    raise ValueError(f"unknown provider {spec!r}")
