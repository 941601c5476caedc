"""Zero-shot dimension scoring: each dimension's lexicon words act as labels
and a backend assigns every label a probability for the document.

Two backends speak the same contract. The builtin one embeds the document as
the mean of its in-vocabulary token vectors and maps the cosine against each
label vector through (cos + 1) / 2, so scores are probabilities without any
fitted parameters and identical inputs give bitwise-identical outputs. The
external one POSTs to a scoring service over the shared wire protocol:

    POST /score   {"text": str, "labels": [str, ...], "multi_label": true}
                  -> {"scores": [float, ...]}   aligned with request order
    GET  /health  -> 200 {"status": "ok"}

Label scores aggregate into one feature per dimension (mean of the top-k
label scores), giving the 10-vector the classifiers train on.
"""

import json
import threading
import time
from dataclasses import dataclass

import numpy as np
import requests

from .dimensions import DIMENSIONS
from .errors import (
    MissingDimension,
    NoTokenCoverage,
    ProtocolViolation,
    ServiceUnreachable,
    Timeout,
    ZeroVector,
    ZscError,
)


@dataclass(frozen=True)
class LabelSet:
    """A dimension's labels: its merged-lexicon surfaces, stars stripped,
    deduplicated, in sorted order."""

    dimension: object
    labels: tuple

    def __post_init__(self):
        if not self.labels:
            raise ZscError(f"empty label set for {self.dimension}")
        if len(set(self.labels)) != len(self.labels):
            raise ZscError(f"duplicate labels for {self.dimension}")


@dataclass(frozen=True)
class LabelScores:
    dimension: object
    scores: tuple

    def __post_init__(self):
        for s in self.scores:
            if not (0.0 <= s <= 1.0):
                raise ProtocolViolation(f"score {s} outside [0, 1]")


def build_label_sets(lexicon, max_labels=None):
    """LabelSet per dimension from a merged lexicon.

    Wildcard surfaces lose their star, duplicates collapse, and the labels
    are sorted. ``max_labels`` caps each set (the first N in sorted order)
    for backends that bound request size.
    """
    label_sets = {}
    for dim in DIMENSIONS:
        surfaces = sorted({entry.surface for entry in lexicon.entries[dim].values()})
        if not surfaces:
            raise MissingDimension(f"lexicon has no entries for {dim.display_name}")
        if max_labels is not None:
            surfaces = surfaces[:max_labels]
        label_sets[dim] = LabelSet(dim, tuple(surfaces))
    return label_sets


class EmbeddingTable:
    """Word -> vector map with a single fixed dimensionality.

    File format: one ``word v1 v2 ... vd`` line per word, space-separated,
    with an optional ``count d`` header line. Immutable after load.
    """

    def __init__(self, vocabulary):
        if not vocabulary:
            raise ZscError("embedding table has empty vocabulary")
        dims = {len(v) for v in vocabulary.values()}
        if len(dims) != 1:
            raise ZscError(f"inconsistent embedding dimensions: {sorted(dims)}")
        self.d = dims.pop()
        self.vocabulary = {w: np.asarray(v, dtype=np.float64) for w, v in vocabulary.items()}

    def __contains__(self, word):
        return word in self.vocabulary

    def __getitem__(self, word):
        return self.vocabulary[word]

    def __len__(self):
        return len(self.vocabulary)

    @classmethod
    def load(cls, path):
        vocabulary = {}
        with open(path, encoding="utf-8") as fh:
            first = fh.readline()
            parts = first.split()
            is_header = len(parts) == 2 and parts[0].isdigit() and parts[1].isdigit()
            if parts and not is_header:
                vocabulary[parts[0]] = [float(x) for x in parts[1:]]
            for line in fh:
                parts = line.split()
                if not parts:
                    continue
                vocabulary[parts[0]] = [float(x) for x in parts[1:]]
        return cls(vocabulary)

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{len(self.vocabulary)} {self.d}\n")
            for word in sorted(self.vocabulary):
                vec = " ".join(repr(float(x)) for x in self.vocabulary[word])
                fh.write(f"{word} {vec}\n")


def validate_scores(labels, scores):
    """Contract check shared by every backend: length, range, finiteness."""
    if len(scores) != len(labels):
        raise ProtocolViolation(
            f"got {len(scores)} scores for {len(labels)} labels")
    for s in scores:
        if not isinstance(s, (int, float)) or isinstance(s, bool):
            raise ProtocolViolation(f"non-numeric score {s!r}")
        if not np.isfinite(s) or not (0.0 <= s <= 1.0):
            raise ProtocolViolation(f"score {s} outside [0, 1]")
    return [float(s) for s in scores]


def document_vector(tokens, emb):
    """Mean of the in-vocabulary token vectors."""
    vectors = [emb[t] for t in tokens if t in emb]
    if not vectors:
        raise NoTokenCoverage("no token found in the embedding vocabulary")
    return np.mean(vectors, axis=0)


def _cosine(u, v):
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("zero-norm vector in cosine")
    return float(np.dot(u, v) / (nu * nv))


def score_labels_builtin(tokens, label_set, emb):
    """Embedding-cosine backend.

    Labels missing from the vocabulary score the uninformative midpoint 0.5.
    Scores clamp to [0, 1] against floating-point overshoot of |cos| = 1.
    """
    docvec = document_vector(tokens, emb)
    scores = []
    for label in label_set.labels:
        if label not in emb:
            scores.append(0.5)
            continue
        cos = _cosine(docvec, emb[label])
        scores.append(min(1.0, max(0.0, (cos + 1.0) / 2.0)))
    return LabelScores(label_set.dimension, tuple(validate_scores(label_set.labels, scores)))


class ExternalScorer:
    """Client for the wire protocol, with bounded retries and concurrency.

    Transient failures (connection errors, timeouts, 5xx) retry with
    exponential backoff up to ``retries`` extra attempts; contract
    violations in a response are not retried, the server is just wrong.
    """

    def __init__(self, endpoint, timeout=10.0, retries=2, max_in_flight=4,
                 backoff=0.5, session=None):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self._session = session or requests.Session()
        self._slot = threading.BoundedSemaphore(max_in_flight)

    def health(self):
        try:
            resp = self._session.get(f"{self.endpoint}/health", timeout=self.timeout)
        except requests.exceptions.RequestException as exc:
            raise ServiceUnreachable(f"{self.endpoint}/health: {exc}")
        return resp.status_code == 200

    def score(self, text, label_set):
        payload = {"text": text, "labels": list(label_set.labels), "multi_label": True}
        last_error = None
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                with self._slot:
                    resp = self._session.post(f"{self.endpoint}/score", json=payload,
                                              timeout=self.timeout)
            except requests.exceptions.Timeout as exc:
                last_error = Timeout(f"{self.endpoint}/score: {exc}")
                continue
            except requests.exceptions.RequestException as exc:
                last_error = ServiceUnreachable(f"{self.endpoint}/score: {exc}")
                continue
            if resp.status_code >= 500:
                last_error = ServiceUnreachable(
                    f"{self.endpoint}/score: HTTP {resp.status_code}")
                continue
            if resp.status_code != 200:
                raise ProtocolViolation(
                    f"{self.endpoint}/score: HTTP {resp.status_code}: {resp.text[:200]}")
            try:
                body = resp.json()
            except (json.JSONDecodeError, ValueError):
                raise ProtocolViolation("response body is not JSON")
            if not isinstance(body, dict) or not isinstance(body.get("scores"), list):
                raise ProtocolViolation(f"response lacks a scores list: {body!r}")
            scores = validate_scores(label_set.labels, body["scores"])
            return LabelScores(label_set.dimension, tuple(scores))
        raise last_error


def score_labels_external(text, label_set, endpoint, timeout=10.0, retries=2):
    """One-shot convenience wrapper around ExternalScorer."""
    scorer = ExternalScorer(endpoint, timeout=timeout, retries=retries)
    return scorer.score(text, label_set)


def dimension_features(label_scores, k=5):
    """Aggregate per-label scores into the 10-vector of dimension features.

    Feature d is the mean of the top-min(k, |labels_d|) scores of dimension
    d, in canonical dimension order. Raising any single label score never
    lowers its dimension's feature.
    """
    if k < 1:
        raise ValueError("k must be positive")
    by_dim = {ls.dimension: ls for ls in label_scores.values()} \
        if isinstance(label_scores, dict) else {ls.dimension: ls for ls in label_scores}
    missing = [d for d in DIMENSIONS if d not in by_dim]
    if missing:
        raise MissingDimension(
            "no label scores for: " + ", ".join(d.display_name for d in missing))
    features = []
    for dim in DIMENSIONS:
        scores = sorted(by_dim[dim].scores, reverse=True)
        top = scores[:min(k, len(scores))]
        features.append(sum(top) / len(top))
    return features
