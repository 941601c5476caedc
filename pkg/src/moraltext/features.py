"""Per-document feature extraction: moral word scores, emotion-category
proportions, zero-shot dimension features, and weak training labels.

The moral word score of a dimension is the fraction of the document's tokens
matching that dimension's lexicon. Weak labels are lexicon-derived (+1 when
the score clears a threshold), while the classifier's inputs are the
embedding-derived zero-shot features, so labels and features come from
different signals and the classifier cannot just read its own labels back.
"""

import csv
import io
import json
from dataclasses import dataclass

from .dimensions import DIMENSIONS
from .errors import LengthMismatch
from .lexicon import SELECTED_CATEGORIES, MatchKind, match_tokens

# Bumped whenever the classifier input layout changes shape or meaning.
FEATURE_LAYOUT_VERSION = "zsc10-v1"

_CATEGORY_SLUGS = ("pos_emotion", "neg_emotion", "anger", "anxiety", "sadness")


@dataclass
class FeatureRecord:
    """Everything downstream stages need about one document."""

    doc_id: str
    moral_scores: tuple   # 10, canonical dimension order, each in [0, 1]
    zsc_features: tuple   # 10, same order
    liwc: tuple           # 5, SELECTED_CATEGORIES order
    weak_labels: tuple    # 10, each -1 or +1
    token_count: int


def moral_word_scores(tokens, lexicon, valence_weighted=False):
    """Per-dimension match proportions for one document's tokens.

    Plain mode: matched-token count over token count. Valence-weighted mode
    instead averages the moral valence of the matched tokens, rescaled from
    [1, 9] to [0, 1]; entries without a valence count as the neutral 5, and
    a dimension with no matches scores 0. Empty token lists give the zero
    vector in both modes.
    """
    n = len(tokens)
    if n == 0:
        return [0.0] * len(DIMENSIONS)
    counts = match_tokens(tokens, lexicon)
    if not valence_weighted:
        return [counts[dim] / n for dim in DIMENSIONS]

    matcher = lexicon._matcher()
    sums = {dim: 0.0 for dim in DIMENSIONS}
    for token in tokens:
        for dim in matcher.keys_for(token):
            valences = [e.valence for e in lexicon.entries[dim].values()
                        if e.valence is not None and _entry_matches(e, token)]
            mean_valence = sum(valences) / len(valences) if valences else 5.0
            sums[dim] += (mean_valence - 1.0) / 8.0
    return [sums[dim] / counts[dim] if counts[dim] else 0.0 for dim in DIMENSIONS]


def _entry_matches(entry, token):
    if entry.match_kind is MatchKind.EXACT:
        return token == entry.surface
    return token.startswith(entry.surface)


def liwc_features(tokens, category_dict):
    """Matched-token proportion for each of the five selected categories."""
    n = len(tokens)
    if n == 0:
        return [0.0] * len(SELECTED_CATEGORIES)
    counts = match_tokens(tokens, category_dict)
    return [counts[cat] / n for cat in SELECTED_CATEGORIES]


def weak_labels(moral_scores, threshold=0.0):
    """+1 where the moral score strictly exceeds the threshold, else -1.

    The default threshold 0 makes a single lexicon match positive; a score
    exactly equal to the threshold stays negative.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    return [1 if s > threshold else -1 for s in moral_scores]


def build_record(doc, lexicon, category_dict, zsc_features, threshold=0.0,
                 valence_weighted=False):
    tokens = doc.tokens or ()
    if len(zsc_features) != len(DIMENSIONS):
        raise LengthMismatch(f"expected {len(DIMENSIONS)} zsc features")
    moral = moral_word_scores(tokens, lexicon, valence_weighted=valence_weighted)
    return FeatureRecord(
        doc_id=doc.id,
        moral_scores=tuple(moral),
        zsc_features=tuple(float(f) for f in zsc_features),
        liwc=tuple(liwc_features(tokens, category_dict)),
        weak_labels=tuple(weak_labels(moral, threshold)),
        token_count=len(tokens),
    )


def _columns():
    cols = ["doc_id"]
    cols += [f"moral_{d.slug}" for d in DIMENSIONS]
    cols += [f"zsc_{d.slug}" for d in DIMENSIONS]
    cols += [f"liwc_{s}" for s in _CATEGORY_SLUGS]
    cols += [f"label_{d.slug}" for d in DIMENSIONS]
    cols.append("token_count")
    return cols


FEATURE_CSV_COLUMNS = tuple(_columns())


def _record_row(rec):
    row = [rec.doc_id]
    row += [repr(v) for v in rec.moral_scores]
    row += [repr(v) for v in rec.zsc_features]
    row += [repr(v) for v in rec.liwc]
    row += [str(v) for v in rec.weak_labels]
    row.append(str(rec.token_count))
    return row


def write_records_csv(records):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(FEATURE_CSV_COLUMNS)
    for rec in records:
        writer.writerow(_record_row(rec))
    return out.getvalue()


def write_records_jsonl(records):
    lines = []
    for rec in records:
        payload = {"doc_id": rec.doc_id}
        payload.update({f"moral_{d.slug}": v for d, v in zip(DIMENSIONS, rec.moral_scores)})
        payload.update({f"zsc_{d.slug}": v for d, v in zip(DIMENSIONS, rec.zsc_features)})
        payload.update({f"liwc_{s}": v for s, v in zip(_CATEGORY_SLUGS, rec.liwc)})
        payload.update({f"label_{d.slug}": v for d, v in zip(DIMENSIONS, rec.weak_labels)})
        payload["token_count"] = rec.token_count
        lines.append(json.dumps(payload))
    return "\n".join(lines) + ("\n" if lines else "")


def read_records_csv(csv_text):
    reader = csv.DictReader(io.StringIO(csv_text))
    if reader.fieldnames is None or tuple(reader.fieldnames) != FEATURE_CSV_COLUMNS:
        raise ValueError("unexpected feature CSV header")
    records = []
    for row in reader:
        records.append(FeatureRecord(
            doc_id=row["doc_id"],
            moral_scores=tuple(float(row[f"moral_{d.slug}"]) for d in DIMENSIONS),
            zsc_features=tuple(float(row[f"zsc_{d.slug}"]) for d in DIMENSIONS),
            liwc=tuple(float(row[f"liwc_{s}"]) for s in _CATEGORY_SLUGS),
            weak_labels=tuple(int(row[f"label_{d.slug}"]) for d in DIMENSIONS),
            token_count=int(row["token_count"]),
        ))
    return records
