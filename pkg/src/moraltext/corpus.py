"""Post ingestion, geography/language/keyword/date filtering, tokenization.

Input files are pre-collected corpora, one record per post, as JSONL or CSV
with fields ``id``, ``text``, ``created_at`` (RFC 3339), ``lang``, and
``country``. Malformed records are skipped and counted, never fatal: large
social-media dumps always contain broken rows.
"""

import csv
import io
import json
import re
import unicodedata
from dataclasses import dataclass, field, replace
from datetime import datetime, time, timezone

from .errors import AllRecordsMalformed, FileUnreadable, UnknownFormat


@dataclass
class Document:
    """One ingested post. ``tokens`` is None until normalize fills it."""

    id: str
    text: str
    created_at: datetime
    lang: str = ""
    country: str = ""
    tokens: tuple = None


@dataclass
class FilterSpec:
    """Keep-predicates for a corpus; every empty field is a vacuous rule.

    A document survives when its country is in ``countries`` (or the set is
    empty), its language tag is in ``langs`` (or empty), at least one keyword
    appears among its tokens (hashtag bodies are tokens after normalization),
    and its timestamp falls inside the inclusive date window.
    """

    countries: frozenset = frozenset()
    langs: frozenset = frozenset()
    keywords: frozenset = frozenset()
    date_start: datetime = None
    date_end: datetime = None

    def __post_init__(self):
        if (self.date_start is not None and self.date_end is not None
                and self.date_start > self.date_end):
            raise ValueError("filter window start is after its end")


def parse_rfc3339(value):
    """RFC 3339 timestamp -> aware UTC datetime.

    Accepts a trailing Z, an explicit offset, or (leniently) no offset at
    all, which is taken as UTC. Date-only strings are midnight UTC.
    """
    raw = value.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    parsed = datetime.fromisoformat(raw)
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def format_rfc3339(dt):
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


_URL_RE = re.compile(r"https?://\S+|\bt\.co/\S+")
_MENTION_RE = re.compile(r"@\w+")
# Runs of unicode alphanumerics, with apostrophes kept when word-internal.
_TOKEN_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*")


def normalize(text, drop_stopwords=False, stopword_list=frozenset()):
    """Raw text -> lowercase token list.

    NFC-normalizes, lowercases, strips URLs (http/https/t.co) and
    @-mentions, then splits on non-alphanumeric characters so that '#tag'
    yields the token 'tag' and interior apostrophes survive ("don't").
    Idempotent on its own space-joined output.
    """
    if not text:
        return []
    lowered = unicodedata.normalize("NFC", text).lower()
    lowered = _URL_RE.sub(" ", lowered)
    lowered = _MENTION_RE.sub(" ", lowered)
    tokens = _TOKEN_RE.findall(lowered)
    if drop_stopwords and stopword_list:
        tokens = [t for t in tokens if t not in stopword_list]
    return tokens


def normalize_document(doc, drop_stopwords=False, stopword_list=frozenset()):
    """A copy of the document with tokens filled; the input is not mutated."""
    return replace(doc, tokens=tuple(normalize(doc.text, drop_stopwords, stopword_list)))


@dataclass
class IngestResult:
    documents: list = field(default_factory=list)
    skipped: int = 0
    lines: int = 0

    def report(self):
        return {"lines": self.lines, "documents": len(self.documents), "skipped": self.skipped}


def _record_to_document(record, seen_ids):
    doc_id = str(record.get("id") or "").strip()
    text = record.get("text")
    raw_created = record.get("created_at")
    if not doc_id or text is None or not raw_created or doc_id in seen_ids:
        return None
    try:
        created_at = parse_rfc3339(str(raw_created))
    except ValueError:
        return None
    return Document(
        id=doc_id,
        text=str(text),
        created_at=created_at,
        lang=str(record.get("lang") or "").strip(),
        country=str(record.get("country") or "").strip(),
    )


def ingest(path, fmt):
    """Read a corpus file into documents, skipping and counting bad records.

    A record is malformed when it fails to parse, lacks id/text/created_at,
    carries an unparseable timestamp, or repeats an id already seen. If a
    non-empty file yields zero documents, the whole input was junk and that
    is an error.
    """
    if fmt not in ("jsonl", "csv"):
        raise UnknownFormat(f"format must be jsonl or csv, got {fmt!r}")
    try:
        with open(path, encoding="utf-8") as fh:
            payload = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise FileUnreadable(f"{path}: {exc}")

    result = IngestResult()
    seen_ids = set()
    if fmt == "jsonl":
        for line in payload.splitlines():
            if not line.strip():
                continue
            result.lines += 1
            try:
                record = json.loads(line)
            except json.JSONDecodeError:
                record = None
            doc = _record_to_document(record, seen_ids) if isinstance(record, dict) else None
            if doc is None:
                result.skipped += 1
                continue
            seen_ids.add(doc.id)
            result.documents.append(doc)
    else:
        reader = csv.DictReader(io.StringIO(payload))
        for row in reader:
            result.lines += 1
            doc = _record_to_document(row, seen_ids)
            if doc is None:
                result.skipped += 1
                continue
            seen_ids.add(doc.id)
            result.documents.append(doc)

    if result.lines > 0 and not result.documents:
        raise AllRecordsMalformed(f"{path}: {result.lines} lines, no usable records")
    return result


# Rules are checked in this order; a drop is attributed to the first rule
# that rejects the document, so the counters always sum to input - output.
FILTER_RULES = ("country", "lang", "keyword", "date")


def apply_filters(docs, spec):
    """Filter documents by a FilterSpec; returns (kept, per-rule drop counts).

    Keyword matching needs tokens, so run normalize first when the keyword
    rule is active; untokenized documents fail that rule.
    """
    kept = []
    drops = {rule: 0 for rule in FILTER_RULES}
    for doc in docs:
        rule = _first_failing_rule(doc, spec)
        if rule is None:
            kept.append(doc)
        else:
            drops[rule] += 1
    return kept, drops


def _first_failing_rule(doc, spec):
    if spec.countries and doc.country not in spec.countries:
        return "country"
    if spec.langs and doc.lang not in spec.langs:
        return "lang"
    if spec.keywords:
        tokens = doc.tokens or ()
        if not any(t in spec.keywords for t in tokens):
            return "keyword"
    if spec.date_start is not None and doc.created_at < spec.date_start:
        return "date"
    if spec.date_end is not None and doc.created_at > spec.date_end:
        return "date"
    return None


def filter_spec_from_config(raw):
    """Build a FilterSpec from plain config values.

    Date bounds accept RFC 3339 timestamps or bare dates; a bare start date
    means its midnight, a bare end date is inclusive of the whole day.
    """
    def _bound(value, end_of_day):
        if value is None or value == "":
            return None
        raw_value = str(value).strip()
        if len(raw_value) == 10:  # YYYY-MM-DD
            day = datetime.strptime(raw_value, "%Y-%m-%d").date()
            moment = time.max if end_of_day else time.min
            return datetime.combine(day, moment, tzinfo=timezone.utc)
        return parse_rfc3339(raw_value)

    return FilterSpec(
        countries=frozenset(str(c).strip() for c in raw.get("countries", []) if str(c).strip()),
        langs=frozenset(str(l).strip() for l in raw.get("langs", []) if str(l).strip()),
        keywords=frozenset(str(k).strip().lower().lstrip("#")
                           for k in raw.get("keywords", []) if str(k).strip()),
        date_start=_bound(raw.get("date_start"), end_of_day=False),
        date_end=_bound(raw.get("date_end"), end_of_day=True),
    )


def document_to_json(doc):
    record = {
        "id": doc.id,
        "text": doc.text,
        "created_at": format_rfc3339(doc.created_at),
        "lang": doc.lang,
        "country": doc.country,
    }
    if doc.tokens is not None:
        record["tokens"] = list(doc.tokens)
    return record


def document_from_json(record):
    doc = _record_to_document(record, seen_ids=frozenset())
    if doc is None:
        raise ValueError(f"bad document record: {record!r}")
    if "tokens" in record:
        doc = replace(doc, tokens=tuple(record["tokens"]))
    return doc
