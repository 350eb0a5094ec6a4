"""JSON-over-HTTP clients for neural sub-model services.

Endpoints (all POST, JSON bodies):

- ``/answer``   {"question", "context"} -> {"answer": str|null, "score": float}
- ``/generate`` {"context", "answer", "vocab", "count", "top_p", "top_k", "max_len", "seed"}
  -> {"questions": [str]}
- ``/next``     {"history", "count", "top_p", "top_k", "seed"}
  -> {"candidates": [{"text": str, "logprob": float}]}
- ``/score``    {"history"} -> {"negative_prob": float}
"""

from __future__ import annotations

import logging
import threading
import time
from typing import Any, Optional

import requests

from ..errors import ServiceUnavailable
from .base import GenRequest, Sampling, ScoredAnswer

log = logging.getLogger(__name__)

RETRY_ATTEMPTS = 3
RETRY_BACKOFF = 0.25


class HttpService:
    def __init__(self, base_url: str, timeout: float = 30.0,
                 attempts: int = RETRY_ATTEMPTS, backoff: float = RETRY_BACKOFF):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.attempts = attempts
        self.backoff = backoff
        self._local = threading.local()

    def _session(self) -> requests.Session:
        s = getattr(self._local, "session", None)
        if s is None:
            s = self._local.session = requests.Session()
        return s

    def post(self, path: str, payload: dict[str, Any]) -> dict[str, Any]:
        url = self.base_url + path
        last: Optional[str] = None
        for attempt in range(self.attempts):
            if attempt:
                time.sleep(self.backoff * 2 ** (attempt - 1))
            try:
                resp = self._session().post(url, json=payload, timeout=self.timeout)
            except requests.RequestException as exc:
                last = str(exc)
                log.warning("%s failed (attempt %d/%d): %s", url, attempt + 1, self.attempts, exc)
                continue
            if resp.status_code >= 500:
                last = f"HTTP {resp.status_code}"
                log.warning("%s returned %d (attempt %d/%d)", url, resp.status_code,
                            attempt + 1, self.attempts)
                continue
            if resp.status_code >= 400:
                raise ServiceUnavailable(f"{url}: HTTP {resp.status_code}: {resp.text[:200]}")
            try:
                return resp.json()
            except ValueError as exc:
                raise ServiceUnavailable(f"{url}: invalid JSON response") from exc
        raise ServiceUnavailable(f"{url}: gave up after {self.attempts} attempts ({last})")


class HttpQA(HttpService):
    def answer(self, question: str, context: str) -> ScoredAnswer:
        data = self.post("/answer", {"question": question, "context": context})
        text = data.get("answer")
        if not text:
            return ScoredAnswer.abstain()
        return ScoredAnswer(str(text), float(data.get("score", 0.0)))


class HttpGenerator(HttpService):
    def generate(self, request: GenRequest) -> list[str]:
        data = self.post("/generate", {
            "context": request.context,
            "answer": request.answer,
            "vocab": list(request.vocabulary),
            "count": request.count,
            "top_p": request.sampling.top_p,
            "top_k": request.sampling.top_k,
            "max_len": request.sampling.max_len,
            "seed": request.seed,
        })
        return [str(q) for q in data.get("questions", [])]


class HttpNextGen(HttpService):
    def next(self, history: str, count: int, sampling: Sampling, seed: Optional[int] = None):
        data = self.post("/next", {"history": history, "count": count, "top_p": sampling.top_p,
                                   "top_k": sampling.top_k, "seed": seed})
        return [(str(c["text"]), float(c.get("logprob", 0.0))) for c in data.get("candidates", [])]


class HttpScorer(HttpService):
    def score(self, history: str) -> float:
        return float(self.post("/score", {"history": history})["negative_prob"])
