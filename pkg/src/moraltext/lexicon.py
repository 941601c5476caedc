"""Moral lexicon and emotion-category dictionary parsing, merging, matching.

Two moral lexicon formats are supported: the ``.dic`` category-dictionary
format (a ``%``-delimited header mapping numeric ids to category names like
``HarmVirtue``, then ``word<TAB>id [id...]`` lines, trailing ``*`` marking a
prefix wildcard) and a CSV with ``lemma, foundation, valence`` columns where
the moral valence in [1, 9] determines the polarity (above the midpoint 5 is
virtue, below is vice, exactly 5 is dropped). Parsed lexicons merge into a
single per-dimension entry set with duplicates removed.

Emotion categories use the same ``.dic`` format with category names kept as
names instead of mapped to dimensions; the five analysis categories are
positive emotion, negative emotion, anger, anxiety, and sadness. The real
LIWC dictionary is proprietary, so ``data/liwc_standin.dic`` ships an open
stand-in word list for those five categories.
"""

import csv
import io
from dataclasses import dataclass, field
from enum import Enum

from .dimensions import DIMENSIONS, Dimension, Polarity, dimension_of, foundation_from_name
from .errors import (
    BadValence,
    EmptyLexicon,
    LexiconError,
    MalformedHeader,
    UnknownCategoryId,
    UnknownFoundation,
)


class MatchKind(Enum):
    EXACT = "exact"
    PREFIX_WILDCARD = "prefix"


class Provenance(Enum):
    MFD = "MFD"
    MORALSTRENGTH = "MoralStrength"
    BOTH = "Both"


@dataclass(frozen=True)
class LexiconEntry:
    """One match entry: a lowercase surface, how it matches, optional valence."""

    surface: str
    match_kind: MatchKind
    valence: float | None = None

    def __post_init__(self):
        if not self.surface or "*" in self.surface or self.surface != self.surface.lower():
            raise LexiconError(f"bad entry surface: {self.surface!r}")
        if any(ch.isspace() for ch in self.surface):
            raise LexiconError(f"entry surface contains whitespace: {self.surface!r}")
        if self.valence is not None and not (1.0 <= self.valence <= 9.0):
            raise BadValence(f"valence {self.valence} outside [1, 9]")

    @property
    def key(self):
        return (self.surface, self.match_kind)


# The five analysis categories, in the fixed order used by every report row.
SELECTED_CATEGORIES = (
    "positive emotion",
    "negative emotion",
    "anger",
    "anxiety",
    "sadness",
)

# File-level category names seen in LIWC-style dictionaries.
_CATEGORY_ALIASES = {
    "posemo": "positive emotion",
    "positiveemotion": "positive emotion",
    "positive_emotion": "positive emotion",
    "positive emotion": "positive emotion",
    "negemo": "negative emotion",
    "negativeemotion": "negative emotion",
    "negative_emotion": "negative emotion",
    "negative emotion": "negative emotion",
    "anger": "anger",
    "anx": "anxiety",
    "anxiety": "anxiety",
    "sad": "sadness",
    "sadness": "sadness",
}

# .dic category names -> dimensions. The original MFD labels the care
# foundation "Harm*" and the loyalty foundation "Ingroup*"; newer releases
# use dotted lowercase names and "sanctity" for purity. All spellings land
# on the same ten dimensions.
_FOUNDATION_ALIASES = {
    "care": "care",
    "harm": "care",
    "fairness": "fairness",
    "ingroup": "loyalty",
    "loyalty": "loyalty",
    "authority": "authority",
    "purity": "purity",
    "sanctity": "purity",
}


def _build_mfd_name_table():
    table = {}
    for alias, foundation_name in _FOUNDATION_ALIASES.items():
        foundation = foundation_from_name(foundation_name)
        for polarity in Polarity:
            dim = dimension_of(foundation, polarity)
            for shape in (f"{alias}{polarity.value}", f"{alias}.{polarity.value}",
                          f"{alias}_{polarity.value}"):
                table[shape] = dim
    return table


_MFD_NAME_TABLE = _build_mfd_name_table()


def _empty_dim_map():
    return {dim: {} for dim in DIMENSIONS}


@dataclass
class PartialLexicon:
    """Output of one parser: per-dimension entries plus a source tag."""

    source: Provenance
    entries: dict = field(default_factory=_empty_dim_map)
    skipped_words: int = 0
    unmapped_assignments: int = 0
    dropped_neutral: int = 0

    def add(self, dim, entry):
        self.entries[dim][entry.key] = entry

    def entry_count(self):
        return sum(len(d) for d in self.entries.values())


def _split_dic_sections(text):
    """Split a .dic blob into header lines and word lines.

    The header is the block between the first two lines that consist of a
    single '%'. Both delimiters must be present.
    """
    lines = text.splitlines()
    marks = [i for i, line in enumerate(lines) if line.strip() == "%"]
    if len(marks) < 2:
        raise MalformedHeader("missing %-delimited category header")
    start, end = marks[0], marks[1]
    header = [ln for ln in lines[start + 1:end] if ln.strip()]
    words = [ln for ln in lines[end + 1:] if ln.strip()]
    return header, words


def _parse_dic_header(header_lines):
    """id -> category-name map; ids are integers in the file."""
    categories = {}
    for line in header_lines:
        parts = line.split()
        if len(parts) < 2:
            raise MalformedHeader(f"bad header line: {line!r}")
        try:
            cat_id = int(parts[0])
        except ValueError:
            raise MalformedHeader(f"non-numeric category id in header: {line!r}")
        categories[cat_id] = " ".join(parts[1:])
    if not categories:
        raise MalformedHeader("header block declares no categories")
    return categories


def _parse_dic_words(word_lines, declared_ids):
    """Yield (surface, match_kind, [category ids]) per usable word line.

    Word lines are whitespace-split: first field is the word, the rest are
    category ids. Lines whose surface is unusable (empty or with an interior
    star after stripping the trailing wildcard marker) are skipped, not
    fatal; a reference to an id missing from the header is fatal.
    """
    for line in word_lines:
        parts = line.split()
        word, id_tokens = parts[0], parts[1:]
        if not id_tokens:
            continue
        ids = []
        for tok in id_tokens:
            try:
                cat_id = int(tok)
            except ValueError:
                raise UnknownCategoryId(f"word {word!r} references non-numeric id {tok!r}")
            if cat_id not in declared_ids:
                raise UnknownCategoryId(f"word {word!r} references undeclared id {cat_id}")
            ids.append(cat_id)
        surface = word.lower()
        kind = MatchKind.EXACT
        if surface.endswith("*"):
            surface = surface[:-1]
            kind = MatchKind.PREFIX_WILDCARD
        if not surface or "*" in surface:
            yield None, None, None  # counted as skipped by the caller
            continue
        yield surface, kind, ids


def parse_mfd(dic_text):
    """Parse an MFD-style .dic blob into a partial lexicon.

    Category names resolve to dimensions through a fixed name table; names
    not in the table (e.g. a general-morality catch-all) stay declared but
    unmapped, and word assignments to them are dropped and counted.
    """
    header_lines, word_lines = _split_dic_sections(dic_text)
    id_to_name = _parse_dic_header(header_lines)
    id_to_dim = {}
    for cat_id, name in id_to_name.items():
        dim = _MFD_NAME_TABLE.get(name.strip().lower())
        if dim is not None:
            id_to_dim[cat_id] = dim

    result = PartialLexicon(source=Provenance.MFD)
    for surface, kind, ids in _parse_dic_words(word_lines, set(id_to_name)):
        if surface is None:
            result.skipped_words += 1
            continue
        for cat_id in ids:
            dim = id_to_dim.get(cat_id)
            if dim is None:
                result.unmapped_assignments += 1
                continue
            result.add(dim, LexiconEntry(surface, kind))
    if result.entry_count() == 0:
        raise EmptyLexicon("no word lines mapped onto any dimension")
    return result


def parse_moralstrength(csv_text):
    """Parse a MoralStrength-style CSV (columns lemma, foundation, valence).

    Polarity comes from the valence: above 5 is virtue, below 5 is vice, and
    exactly 5 is neutral and dropped (counted in ``dropped_neutral``).
    """
    reader = csv.DictReader(io.StringIO(csv_text))
    if reader.fieldnames is None:
        raise MalformedHeader("empty MoralStrength file")
    colmap = {name.strip().lower(): name for name in reader.fieldnames}
    for required in ("lemma", "foundation", "valence"):
        if required not in colmap:
            raise MalformedHeader(f"MoralStrength header lacks column {required!r}")

    result = PartialLexicon(source=Provenance.MORALSTRENGTH)
    rows = 0
    for row in reader:
        rows += 1
        lemma = (row[colmap["lemma"]] or "").strip().lower()
        if not lemma or "*" in lemma or any(ch.isspace() for ch in lemma):
            result.skipped_words += 1
            continue
        try:
            foundation = foundation_from_name(row[colmap["foundation"]] or "")
        except (KeyError, ValueError):
            raise UnknownFoundation(f"row {rows}: {row[colmap['foundation']]!r}")
        raw_valence = (row[colmap["valence"]] or "").strip()
        try:
            valence = float(raw_valence)
        except ValueError:
            raise BadValence(f"row {rows}: non-numeric valence {raw_valence!r}")
        if not (1.0 <= valence <= 9.0):
            raise BadValence(f"row {rows}: valence {valence} outside [1, 9]")
        if valence == 5.0:
            result.dropped_neutral += 1
            continue
        polarity = Polarity.VIRTUE if valence > 5.0 else Polarity.VICE
        result.add(dimension_of(foundation, polarity),
                   LexiconEntry(lemma, MatchKind.EXACT, valence))
    if result.entry_count() == 0:
        raise EmptyLexicon("no usable MoralStrength rows")
    return result


class _TokenMatcher:
    """Shared exact/prefix matching over (key, entry) pairs.

    A token matches an exact entry on string equality and a wildcard entry
    when it starts with the stored prefix. ``keys_for`` returns the set of
    keys, so a token never counts more than once per key no matter how many
    entries it matches.
    """

    def __init__(self, keyed_entries):
        self._exact = {}
        by_prefix = {}
        for key, entry in keyed_entries:
            if entry.match_kind is MatchKind.EXACT:
                self._exact.setdefault(entry.surface, set()).add(key)
            else:
                by_prefix.setdefault(entry.surface, set()).add(key)
        self._by_first_char = {}
        for prefix in sorted(by_prefix):
            bucket = self._by_first_char.setdefault(prefix[0], [])
            bucket.append((prefix, frozenset(by_prefix[prefix])))

    def keys_for(self, token):
        found = set(self._exact.get(token, ()))
        for prefix, keys in self._by_first_char.get(token[:1], ()):
            if token.startswith(prefix):
                found |= keys
        return found


class MergedLexicon:
    """Deduplicated per-dimension entry sets with per-entry provenance.

    Immutable after construction; safe to share across workers.
    """

    def __init__(self, entries, provenance):
        self.entries = {dim: dict(entries.get(dim, {})) for dim in DIMENSIONS}
        self.provenance = {dim: dict(provenance.get(dim, {})) for dim in DIMENSIONS}
        self._matcher_cache = None

    def keys(self):
        return DIMENSIONS

    def entries_for(self, dim):
        """Entries of one dimension in canonical (surface, kind) order."""
        return [self.entries[dim][k]
                for k in sorted(self.entries[dim], key=lambda k: (k[0], k[1].value))]

    def entry_count(self, dim=None):
        if dim is not None:
            return len(self.entries[dim])
        return sum(len(d) for d in self.entries.values())

    def triple_set(self):
        """All (dimension, surface, match_kind) triples; provenance-free view."""
        return {(dim, surface, kind)
                for dim, entries in self.entries.items()
                for (surface, kind) in entries}

    def _matcher(self):
        if self._matcher_cache is None:
            pairs = [(dim, entry)
                     for dim in DIMENSIONS
                     for entry in self.entries[dim].values()]
            self._matcher_cache = _TokenMatcher(pairs)
        return self._matcher_cache


def merge(a, b):
    """Merge two partial lexicons into one deduplicated lexicon.

    Entries are unioned per dimension on the (surface, match_kind) key. When
    both sides contribute the same key the provenance becomes Both and the
    valence-bearing entry wins; if both carry one, the side tagged
    MoralStrength is kept.
    """
    entries = _empty_dim_map()
    provenance = _empty_dim_map()
    for partial in (a, b):
        for dim in DIMENSIONS:
            for key, entry in partial.entries[dim].items():
                existing = entries[dim].get(key)
                if existing is None:
                    entries[dim][key] = entry
                    provenance[dim][key] = partial.source
                else:
                    if provenance[dim][key] is not partial.source:
                        provenance[dim][key] = Provenance.BOTH
                    if entry.valence is not None and (
                            existing.valence is None
                            or partial.source is Provenance.MORALSTRENGTH):
                        entries[dim][key] = entry
    return MergedLexicon(entries, provenance)


class CategoryDictionary:
    """Emotion-category word lists plus the fixed five-category selection."""

    def __init__(self, categories):
        self.categories = {name: dict(entry_map) for name, entry_map in categories.items()}
        self.selected = SELECTED_CATEGORIES
        missing = [c for c in self.selected if c not in self.categories]
        if missing:
            raise LexiconError(f"category dictionary lacks: {', '.join(missing)}")
        self._matcher_cache = None

    def keys(self):
        return tuple(self.categories)

    def _matcher(self):
        if self._matcher_cache is None:
            pairs = [(name, entry)
                     for name, entry_map in self.categories.items()
                     for entry in entry_map.values()]
            self._matcher_cache = _TokenMatcher(pairs)
        return self._matcher_cache


def parse_category_dic(dic_text):
    """Parse a LIWC-style .dic into a CategoryDictionary.

    Category names go through an alias table (posemo -> positive emotion and
    so on); unknown names are kept verbatim, since LIWC files carry dozens
    of categories beyond the five this package analyzes.
    """
    header_lines, word_lines = _split_dic_sections(dic_text)
    id_to_name = _parse_dic_header(header_lines)
    canonical = {}
    for cat_id, name in id_to_name.items():
        lowered = name.strip().lower()
        canonical[cat_id] = _CATEGORY_ALIASES.get(lowered, lowered)

    categories = {name: {} for name in canonical.values()}
    n_entries = 0
    for surface, kind, ids in _parse_dic_words(word_lines, set(id_to_name)):
        if surface is None:
            continue
        entry = LexiconEntry(surface, kind)
        for cat_id in ids:
            categories[canonical[cat_id]][entry.key] = entry
            n_entries += 1
    if n_entries == 0:
        raise EmptyLexicon("no word lines in category dictionary")
    return CategoryDictionary(categories)


def match_tokens(tokens, lexicon):
    """Count, per dimension or category, how many tokens match its entries.

    Tokens must already be normalized (lowercase). Every key of the lexicon
    appears in the result, zero-valued when nothing matched. A token may
    match several keys but counts at most once per key.
    """
    matcher = lexicon._matcher()
    counts = {key: 0 for key in lexicon.keys()}
    for token in tokens:
        for key in matcher.keys_for(token):
            counts[key] += 1
    return counts


MERGED_CSV_COLUMNS = ("foundation", "polarity", "surface", "match_kind", "valence", "provenance")


def write_merged_csv(lexicon):
    """Canonical CSV serialization, sorted lexicographically for stable bytes."""
    rows = []
    for dim in DIMENSIONS:
        for key, entry in lexicon.entries[dim].items():
            rows.append((
                dim.foundation.value,
                dim.polarity.value,
                entry.surface,
                entry.match_kind.value,
                "" if entry.valence is None else repr(entry.valence),
                lexicon.provenance[dim][key].value,
            ))
    rows.sort()
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(MERGED_CSV_COLUMNS)
    writer.writerows(rows)
    return out.getvalue()


def parse_merged_csv(csv_text):
    """Inverse of write_merged_csv."""
    reader = csv.DictReader(io.StringIO(csv_text))
    if reader.fieldnames is None or tuple(reader.fieldnames) != MERGED_CSV_COLUMNS:
        raise MalformedHeader("unexpected merged-lexicon CSV header")
    entries = _empty_dim_map()
    provenance = _empty_dim_map()
    for row in reader:
        dim = dimension_of(foundation_from_name(row["foundation"]),
                           Polarity(row["polarity"]))
        valence = float(row["valence"]) if row["valence"] else None
        entry = LexiconEntry(row["surface"], MatchKind(row["match_kind"]), valence)
        entries[dim][entry.key] = entry
        provenance[dim][entry.key] = Provenance(row["provenance"])
    return MergedLexicon(entries, provenance)
