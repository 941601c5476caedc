"""Scoring backends.

Two implementations of the same one-method interface,
``score(text, labels) -> list of floats in [0, 1]`` aligned with the label
order:

* EmbeddingBackend: deterministic cosine scoring against a word-embedding
  table, suitable for tests and offline runs. Pure Python on purpose; the
  request sizes this server is meant for do not justify a numeric stack.
* NliBackend: a transformers zero-shot-classification pipeline in
  multi-label mode; each label is scored independently. Imported lazily so
  the embedding path works without torch installed.

The server is intentionally self-contained: it implements the wire
protocol and the documented embedding file format and imports nothing
from any client package.
"""

import math
import os
import re

# lowercase word runs, keeping word-internal apostrophes; digits excluded
_WORD = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)*")


def tokenize(text):
    return _WORD.findall(text.lower())


def load_embeddings(path):
    """Read `word v1 ... vd` lines; an optional first line `count d` is
    skipped. Returns (word -> vector dict, d)."""
    vectors = {}
    width = None
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            parts = line.split()
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
                continue
            values = [float(v) for v in parts[1:]]
            if width is None:
                width = len(values)
            if len(values) != width or width == 0:
                raise ValueError(f"{path}:{lineno}: expected {width} values")
            vectors[parts[0]] = values
    if not vectors:
        raise ValueError(f"{path}: no vectors")
    return vectors, width


class EmbeddingBackend:
    """Cosine of the mean token vector against each label's vector,
    mapped to [0, 1] by (cos + 1) / 2.

    Texts without vocabulary coverage and labels missing from the
    vocabulary score 0.5, the uninformative midpoint, so the protocol
    stays total over well-formed requests.
    """

    kind = "embedding"

    def __init__(self, path):
        self.vectors, self.width = load_embeddings(path)
        self.describe = f"embedding table {os.path.basename(path)} ({len(self.vectors)} words, d={self.width})"

    def score(self, text, labels):
        in_vocab = [self.vectors[t] for t in tokenize(text) if t in self.vectors]
        if not in_vocab:
            return [0.5] * len(labels)
        doc = [sum(column) / len(in_vocab) for column in zip(*in_vocab)]
        doc_norm = math.sqrt(sum(a * a for a in doc))
        return [self._one(doc, doc_norm, label) for label in labels]

    def _one(self, doc, doc_norm, label):
        vector = self.vectors.get(label.strip().lower())
        if vector is None or doc_norm == 0.0:
            return 0.5
        norm = math.sqrt(sum(b * b for b in vector))
        if norm == 0.0:
            return 0.5
        cosine = sum(a * b for a, b in zip(doc, vector)) / (doc_norm * norm)
        cosine = max(-1.0, min(1.0, cosine))
        return (cosine + 1.0) / 2.0


class NliBackend:
    """Entailment-based scoring through a transformers pipeline.

    Labels are scored in chunks of ``batch_size``; multi-label mode keeps
    the per-label probabilities independent, matching the protocol. The
    pipeline runs greedy classification heads only, so repeated identical
    requests score identically.
    """

    kind = "nli"

    def __init__(self, model_id, batch_size):
        from transformers import pipeline
        self._pipeline = pipeline("zero-shot-classification", model=model_id)
        self.batch_size = max(1, batch_size)
        self.describe = f"nli model {model_id}"

    def score(self, text, labels):
        out = []
        for start in range(0, len(labels), self.batch_size):
            chunk = list(labels[start:start + self.batch_size])
            result = self._pipeline(text, candidate_labels=chunk, multi_label=True)
            by_label = dict(zip(result["labels"], result["scores"]))
            out.extend(min(1.0, max(0.0, float(by_label[label]))) for label in chunk)
        return out


def build_backend(model, batch_size):
    """A model identifier naming an existing file is an embedding table;
    anything else is handed to transformers as a model id."""
    if os.path.exists(model):
        return EmbeddingBackend(model)
    return NliBackend(model, batch_size)
