"""Soft graph matching: edges scored as sentences, and thresholded graph matching."""

from __future__ import annotations

import json
import logging
import math
import threading
import time
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Protocol, Sequence

import httpx

from .graph import Edge, KnowledgeGraph

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.95


class ScoringBackendError(RuntimeError):
    """The similarity provider failed; ``example_id`` is filled in by the caller when known."""

    def __init__(self, message: str, example_id: Optional[str] = None):
        self.example_id = example_id
        super().__init__(message if example_id is None else f"[{example_id}] {message}")


class ProtocolError(ScoringBackendError):
    pass


class SimilarityProvider(Protocol):
    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[float]: ...


@dataclass(frozen=True)
class GbsScore:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "GbsScore":
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        return cls(precision, recall, f1)


@dataclass(frozen=True)
class GmGbsSummary:
    matched: int
    total: int
    fraction: float


def serialize_edge(edge: tuple[str, str, str]) -> str:
    return " ".join(Edge(*edge))


def gbs_score(pred: KnowledgeGraph, gold: KnowledgeGraph, provider: SimilarityProvider) -> GbsScore:
    """Max-similarity alignment of predicted and gold edge sentences.

    Recall averages, over gold edges, the best similarity to any predicted
    edge; precision does the same from the predicted side.
    """
    gold_s = [serialize_edge(e) for e in gold.sorted_edges()]
    pred_s = [serialize_edge(e) for e in pred.sorted_edges()]
    if not gold_s and not pred_s:
        return GbsScore(1.0, 1.0, 1.0)
    if not gold_s or not pred_s:
        return GbsScore(0.0, 0.0, 0.0)
    pairs = [(g, p) for g in gold_s for p in pred_s]
    scores = provider.score_pairs(pairs)
    if len(scores) != len(pairs):
        raise ProtocolError(f"provider returned {len(scores)} scores for {len(pairs)} pairs")
    width = len(pred_s)
    rows = [scores[i * width:(i + 1) * width] for i in range(len(gold_s))]
    recall = sum(max(row) for row in rows) / len(gold_s)
    precision = sum(max(row[j] for row in rows) for j in range(width)) / width
    return GbsScore.from_pr(precision, recall)


def gm_gbs(scores: Sequence[GbsScore | float], threshold: float = DEFAULT_THRESHOLD) -> GmGbsSummary:
    """Fraction of graph pairs whose G-BS F1 is strictly above ``threshold``."""
    if not scores:
        raise ValueError("gm_gbs needs at least one score")
    if not 0 < threshold < 1:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    f1s = [s.f1 if isinstance(s, GbsScore) else float(s) for s in scores]
    matched = sum(1 for f in f1s if f > threshold)
    return GmGbsSummary(matched, len(f1s), matched / len(f1s))


# ---------------------------------------------------------------------------
# providers


def char_trigrams(sentence: str) -> Counter:
    grams: Counter = Counter()
    for token in sentence.lower().split():
        padded = f"#{token}#"
        for i in range(len(padded) - 2):
            grams[padded[i:i + 3]] += 1
    return grams


class LexicalProvider:
    """Cosine similarity of character-trigram count vectors. Deterministic and offline."""

    def similarity(self, a: str, b: str) -> float:
        va, vb = char_trigrams(a), char_trigrams(b)
        if va == vb:
            return 1.0
        dot = sum(n * vb[g] for g, n in va.items())
        if not dot:
            return 0.0
        norm = math.sqrt(sum(n * n for n in va.values())) * math.sqrt(sum(n * n for n in vb.values()))
        return min(1.0, dot / norm)

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        return [self.similarity(a, b) for a, b in pairs]


def lexical_provider() -> LexicalProvider:
    return LexicalProvider()


class RemoteProvider:
    """Client for a pair-scoring service.

    POSTs ``{"pairs": [[a, b], ...]}`` and expects ``{"scores": [...]}`` with
    one score per pair. Requests are serialized under a lock so concurrent
    callers never see each other's responses.
    """

    def __init__(
        self,
        endpoint: str,
        timeout: float = 30.0,
        batch_size: int = 64,
        retries: int = 3,
        backoff: float = 0.5,
        transport: Optional[httpx.BaseTransport] = None,
    ):
        if batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        self.endpoint = endpoint
        self.batch_size = batch_size
        self.retries = retries
        self.backoff = backoff
        self._client = httpx.Client(timeout=timeout, transport=transport)
        self._lock = threading.Lock()

    def close(self) -> None:
        self._client.close()

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        out: list[float] = []
        with self._lock:
            for start in range(0, len(pairs), self.batch_size):
                batch = [list(p) for p in pairs[start:start + self.batch_size]]
                out += self._post(batch)
        return out

    def _post(self, batch: list[list[str]]) -> list[float]:
        attempt = 0
        while True:
            try:
                resp = self._client.post(self.endpoint, json={"pairs": batch})
                if resp.status_code >= 500 or resp.status_code == 429:
                    raise httpx.HTTPStatusError(f"server error {resp.status_code}", request=resp.request, response=resp)
                break
            except (httpx.TransportError, httpx.HTTPStatusError) as exc:
                if attempt >= self.retries:
                    raise ScoringBackendError(f"scoring request failed after {attempt + 1} attempts: {exc}") from exc
                delay = self.backoff * 2 ** attempt
                log.warning("scoring request failed (%s); retrying in %.2fs", exc, delay)
                time.sleep(delay)
                attempt += 1
        if resp.status_code != 200:
            raise ScoringBackendError(f"scoring service answered {resp.status_code}: {resp.text[:200]}")
        return _parse_scores(resp.text, len(batch))


def _parse_scores(body: str, expected: int) -> list[float]:
    excerpt = body[:200]
    try:
        payload = json.loads(body)
    except ValueError:
        raise ProtocolError(f"response is not JSON: {excerpt!r}") from None
    scores = payload.get("scores") if isinstance(payload, dict) else None
    if not isinstance(scores, list) or len(scores) != expected:
        raise ProtocolError(f"expected {expected} scores, got: {excerpt!r}")
    out = []
    for s in scores:
        if isinstance(s, bool) or not isinstance(s, (int, float)) or not 0.0 <= s <= 1.0:
            raise ProtocolError(f"score out of range or not a number: {excerpt!r}")
        out.append(float(s))
    return out


def remote_provider(endpoint: str, timeout: float = 30.0, batch_size: int = 64, **kwargs) -> RemoteProvider:
    return RemoteProvider(endpoint, timeout=timeout, batch_size=batch_size, **kwargs)
