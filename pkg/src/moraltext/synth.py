"""Bundled synthetic-corpus generator with planted, recoverable structure.

Emits a complete input bundle for the pipeline: a JSONL corpus, small moral
lexicon fixtures in both source formats, an emotion category dictionary, an
embedding table aligned with the lexicon, a ready-to-run config, and a
manifest recording what was planted.

Two signals are planted. Documents carry a count of Care words and a count
of positive-emotion words drawn from a shared Gaussian copula, quantized to
{0..3}; likewise Degradation words with negative-emotion words. Every
document has the same total token count, so the pipeline's proportion
series are the count series up to one scale factor and the planted count
correlation is exactly what the correlation stage should recover. The
latent copula correlations below are set above their targets to compensate
for quantization attenuation; the calibration targets expected realized r
of +0.6 (Care vs positive emotion) and +0.5 (Degradation vs negative
emotion) over seeds.

All other word counts are drawn independently, so the remaining matrix
cells hover near zero. Word pools are mutually non-matching by
construction (checked at generation time), including against the two
prefix-wildcard entries.

The bundle also contains documents that each violate exactly one filter
rule, plus a few malformed corpus lines, so an end-to-end run exercises the
ingest and filter bookkeeping; exactly the requested number of documents
survives filtering.

Usage: python -m moraltext.synth --out DIR [--seed N] [--docs N]
"""

import argparse
import json
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .dimensions import (
    DIMENSIONS,
    Dimension,
    Polarity,
    dimension_of,
    foundation_from_name,
)
from .lexicon import (
    SELECTED_CATEGORIES,
    match_tokens,
    merge,
    parse_category_dic,
    parse_mfd,
    parse_moralstrength,
)
from .rng import MASK64, XorShift64Star, mix_seed
from .zsc import EmbeddingTable

DEFAULT_SEED = 20200312
DEFAULT_DOCS = 2000

TOKENS_PER_DOC = 26

# Latent copula correlations, calibrated empirically so the expected count
# correlation after quantization hits the planted targets (the measured
# attenuation factor is about 0.888 in this range). At the default seed and
# 2,000 documents the realized sample correlations are 0.624 and 0.516.
PLANTED_R_CARE = 0.6
PLANTED_R_DEGRADATION = 0.5
LATENT_RHO_CARE = 0.676
LATENT_RHO_DEGRADATION = 0.570

# Count quantization: z below all thresholds -> 0, above all -> 3, giving
# level probabilities (0.35, 0.30, 0.20, 0.15). Thresholds are the standard
# normal quantiles at 0.35, 0.65, 0.85.
COUNT_THRESHOLDS = (-0.38532047, 0.38532047, 1.03643339)

# Per-document presence rates for the unplanted pools.
OTHER_DIM_RATE = 0.30
OTHER_EMOTION_RATE = 0.25

EMBEDDING_WIDTH = 16  # 10 dimension axes + 5 emotion axes + 1 filler axis
JITTER = 0.02
FILLER_MAGNITUDE = 0.3

DATE_START = "2020-03-12"
DATE_END = "2020-05-25"
KEYWORD = "covid"

# Lexicon surfaces per dimension as they appear in the MFD-format fixture;
# a trailing * marks a prefix entry.
MFD_SURFACES = {
    Dimension.CARE: ["compassion", "kindness", "nurture", "protect", "gentle", "heal*"],
    Dimension.HARM: ["cruelty", "wound", "torment"],
    Dimension.FAIRNESS: ["justice", "equality", "impartial"],
    Dimension.CHEATING: ["swindle", "fraud", "deceit"],
    Dimension.LOYALTY: ["devoted", "allegiance", "comrade"],
    Dimension.BETRAYAL: ["treason", "backstab", "defector"],
    Dimension.AUTHORITY: ["obedience", "hierarchy", "command"],
    Dimension.SUBVERSION: ["mutiny", "insolent", "defiance"],
    Dimension.PURITY: ["sacred", "pristine", "chaste"],
    Dimension.DEGRADATION: ["filth", "defile", "rotten", "sewage", "grime", "taint*"],
}

# Extra MoralStrength rows: two overlaps with the MFD fixture (merge keeps
# the valence), two new lemmas, and one neutral row that gets dropped.
MORALSTRENGTH_ROWS = [
    ("compassion", "care", 8.2),
    ("solace", "care", 7.5),
    ("filth", "purity", 1.8),
    ("squalor", "purity", 2.1),
    ("ritual", "purity", 5.0),
]

# Surface forms emitted into documents for the wildcard entries. Both forms
# match their stem and nothing else.
WILDCARD_FORMS = {
    "heal*": ["healing", "healer"],
    "taint*": ["tainted", "taints"],
}

CATEGORY_WORDS = {
    "positive emotion": ["happy", "joyful", "delight", "smile", "cheerful"],
    "negative emotion": ["awful", "dread", "misery", "sobbing", "gloomy"],
    "anger": ["rage", "furious", "irate"],
    "anxiety": ["worried", "nervous", "panic"],
    "sadness": ["weeping", "sorrow", "downcast"],
}

FILLER_WORDS = ["table", "window", "street", "coffee", "morning",
                "paper", "garden", "bridge", "lamp", "river"]

DECOYS_PER_RULE = 10


def _fnv1a64(data):
    h = 0xCBF29CE484222325
    for byte in data.encode("utf-8"):
        h ^= byte
        h = (h * 0x100000001B3) & MASK64
    return h


def _jitter(word, coord):
    """Deterministic per-coordinate jitter in [-JITTER, JITTER)."""
    u = (_fnv1a64(f"{word}:{coord}") >> 11) * 2.0 ** -53
    return (2.0 * u - 1.0) * JITTER


def doc_pool(dim):
    """Surfaces a document may contain for a dimension; wildcards expanded."""
    words = []
    for surface in MFD_SURFACES[dim]:
        if surface.endswith("*"):
            words.extend(WILDCARD_FORMS[surface])
        else:
            words.append(surface)
    for lemma, foundation, valence in MORALSTRENGTH_ROWS:
        if valence == 5.0:
            continue
        polarity = Polarity.VIRTUE if valence > 5.0 else Polarity.VICE
        target = dimension_of(foundation_from_name(foundation), polarity)
        if target is dim and lemma not in words:
            words.append(lemma)
    return words


def label_vocabulary():
    """Every string the embedding table must cover.

    Document tokens plus the star-stripped stems the label sets will use.
    """
    vocab = {}
    for axis, dim in enumerate(DIMENSIONS):
        for word in doc_pool(dim):
            vocab[word] = axis
        for surface in MFD_SURFACES[dim]:
            vocab[surface.rstrip("*")] = axis
    for cat_index, category in enumerate(SELECTED_CATEGORIES):
        for word in CATEGORY_WORDS[category]:
            vocab[word] = 10 + cat_index
    for word in FILLER_WORDS + [KEYWORD]:
        vocab[word] = 15
    return vocab


def build_embeddings():
    vectors = {}
    for word, axis in label_vocabulary().items():
        magnitude = FILLER_MAGNITUDE if axis == 15 else 1.0
        vec = [_jitter(word, i) for i in range(EMBEDDING_WIDTH)]
        vec[axis] += magnitude
        vectors[word] = vec
    return EmbeddingTable(vectors)


def mfd_text():
    lines = ["%"]
    for index, dim in enumerate(DIMENSIONS, start=1):
        lines.append(f"{index:02d}\t{dim.foundation.value}.{dim.polarity.value}")
    lines.append("%")
    for index, dim in enumerate(DIMENSIONS, start=1):
        for surface in MFD_SURFACES[dim]:
            lines.append(f"{surface}\t{index:02d}")
    return "\n".join(lines) + "\n"


def moralstrength_text():
    lines = ["lemma,foundation,valence"]
    for lemma, foundation, valence in MORALSTRENGTH_ROWS:
        lines.append(f"{lemma},{foundation},{valence}")
    return "\n".join(lines) + "\n"


def liwc_text():
    names = {"positive emotion": "posemo", "negative emotion": "negemo",
             "anger": "anger", "anxiety": "anx", "sadness": "sad"}
    lines = ["%"]
    for index, category in enumerate(SELECTED_CATEGORIES, start=1):
        lines.append(f"{index}\t{names[category]}")
    lines.append("%")
    for index, category in enumerate(SELECTED_CATEGORIES, start=1):
        for word in CATEGORY_WORDS[category]:
            lines.append(f"{word}\t{index}")
    return "\n".join(lines) + "\n"


def check_pools_disjoint():
    """Every pool word must match only its own dimension or category.

    Guards the planted correlations: a stray cross-match (exact or through
    a wildcard stem) would leak one series into another.
    """
    merged = merge(parse_mfd(mfd_text()), parse_moralstrength(moralstrength_text()))
    categories = parse_category_dic(liwc_text())
    for dim in DIMENSIONS:
        for word in doc_pool(dim):
            hits = [d for d, n in match_tokens([word], merged).items() if n]
            if hits != [dim]:
                raise AssertionError(f"{word!r} matches {hits}, expected only {dim}")
            cat_hits = [c for c, n in match_tokens([word], categories).items() if n]
            if cat_hits:
                raise AssertionError(f"moral word {word!r} matches categories {cat_hits}")
    for category in SELECTED_CATEGORIES:
        for word in CATEGORY_WORDS[category]:
            cat_hits = [c for c, n in match_tokens([word], categories).items() if n]
            if cat_hits != [category]:
                raise AssertionError(f"{word!r} matches {cat_hits}, expected {category}")
            hits = [d for d, n in match_tokens([word], merged).items() if n]
            if hits:
                raise AssertionError(f"emotion word {word!r} matches dimensions {hits}")
    for word in FILLER_WORDS + [KEYWORD]:
        hits = [d for d, n in match_tokens([word], merged).items() if n]
        cat_hits = [c for c, n in match_tokens([word], categories).items() if n]
        if hits or cat_hits:
            raise AssertionError(f"filler {word!r} matches {hits or cat_hits}")


def _quantize(z):
    return sum(1 for t in COUNT_THRESHOLDS if z > t)


def _pick(rng, pool):
    return pool[rng.randbelow(len(pool))]


def _make_document(index, seed):
    """One kept document; returns (record dict, care count, degradation count)."""
    rng = XorShift64Star(mix_seed(seed, index))
    z_care, z_pos = rng.normal_pair(LATENT_RHO_CARE)
    z_degr, z_neg = rng.normal_pair(LATENT_RHO_DEGRADATION)
    counts = {
        Dimension.CARE: _quantize(z_care),
        Dimension.DEGRADATION: _quantize(z_degr),
    }
    emotion_counts = {
        "positive emotion": _quantize(z_pos),
        "negative emotion": _quantize(z_neg),
    }
    for dim in DIMENSIONS:
        if dim not in counts:
            counts[dim] = 1 if rng.random() < OTHER_DIM_RATE else 0
    for category in ("anger", "anxiety", "sadness"):
        emotion_counts[category] = 1 if rng.random() < OTHER_EMOTION_RATE else 0

    tokens = [KEYWORD]
    for dim in DIMENSIONS:
        pool = doc_pool(dim)
        for _ in range(counts[dim]):
            tokens.append(_pick(rng, pool))
    for category in SELECTED_CATEGORIES:
        for _ in range(emotion_counts[category]):
            tokens.append(_pick(rng, CATEGORY_WORDS[category]))
    while len(tokens) < TOKENS_PER_DOC:
        tokens.append(_pick(rng, FILLER_WORDS))
    assert len(tokens) == TOKENS_PER_DOC
    rng.shuffle(tokens)

    # Raw-text noise that normalization removes; the keyword sometimes
    # appears as a hashtag, which normalizes to the same token.
    pieces = []
    if rng.random() < 0.25:
        pieces.append(f"@user{rng.randbelow(1000)}")
    pieces.extend("#" + t if t == KEYWORD and rng.random() < 0.3 else t
                  for t in tokens)
    if rng.random() < 0.25:
        pieces.append(f"https://t.co/{rng.next_u64():x}")
    created = (datetime(2020, 3, 12, 6, 0, tzinfo=timezone.utc)
               + timedelta(minutes=31 * index))
    record = {
        "id": f"d{index:06d}",
        "text": " ".join(pieces),
        "created_at": created.strftime("%Y-%m-%dT%H:%M:%SZ"),
        "lang": "en" if rng.random() < 0.8 else "fr",
        "country": "CA",
    }
    return record, counts, emotion_counts


def _make_decoys(seed):
    """Documents that each violate exactly one filter rule, in rule order."""
    decoys = []
    bad_dates = [datetime(2020, 3, 1, 12, 0, tzinfo=timezone.utc),
                 datetime(2020, 6, 15, 12, 0, tzinfo=timezone.utc)]
    for j in range(DECOYS_PER_RULE * 4):
        rng = XorShift64Star(mix_seed(seed, 1_000_000 + j))
        rule = ("country", "lang", "keyword", "date")[j // DECOYS_PER_RULE]
        tokens = [_pick(rng, FILLER_WORDS) for _ in range(TOKENS_PER_DOC - 1)]
        created = (datetime(2020, 4, 1, tzinfo=timezone.utc)
                   + timedelta(hours=j))
        record = {
            "id": f"x{rule[0]}{j % DECOYS_PER_RULE:02d}",
            "text": KEYWORD + " " + " ".join(tokens),
            "created_at": created.strftime("%Y-%m-%dT%H:%M:%SZ"),
            "lang": "en",
            "country": "CA",
        }
        if rule == "country":
            record["country"] = "US"
        elif rule == "lang":
            record["lang"] = "de"
        elif rule == "keyword":
            record["text"] = " ".join(tokens) + " " + _pick(rng, FILLER_WORDS)
        else:
            record["created_at"] = bad_dates[j % 2].strftime("%Y-%m-%dT%H:%M:%SZ")
        decoys.append(record)
    return decoys


JUNK_LINES = [
    "this line is not json",
    '{"id": "junk2", "created_at": "2020-03-15T00:00:00Z"}',
    '{"id": "junk3", "text": "covid morning", "created_at": "sometime in march"}',
]


CONFIG_TEMPLATE = """\
# Generated input bundle; paths are relative to this file.

[[corpora]]
name = "synth"
path = "corpus.jsonl"
format = "jsonl"

[lexicon]
mfd = "mfd_synth.dic"
moralstrength = "moralstrength_synth.csv"
liwc = "liwc_synth.dic"

[filters]
countries = ["CA"]
langs = ["en", "fr"]
keywords = ["{keyword}"]
date_start = "{date_start}"
date_end = "{date_end}"

[zsc]
backend = "builtin"
embeddings = "embeddings_synth.txt"
top_k = 5

[features]
drop_stopwords = false
valence_weighted = false
weak_label_threshold = 0.0

[train]
lambda = 0.001
epochs = 10
seed = 7
folds = 10

[output]
dir = "out"
plain_tables = false

[run]
workers = 2
"""


def generate(outdir, seed=DEFAULT_SEED, n_docs=DEFAULT_DOCS):
    """Write the full bundle into outdir; returns the manifest dict."""
    check_pools_disjoint()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    records = []
    for i in range(n_docs):
        record, _, _ = _make_document(i, seed)
        records.append(record)
    records.extend(_make_decoys(seed))

    order_rng = XorShift64Star(mix_seed(seed, 2_000_000))
    order_rng.shuffle(records)
    lines = [json.dumps(r) for r in records]
    for position, junk in zip((100, 500, 1500), JUNK_LINES):
        lines.insert(min(position, len(lines)), junk)

    (outdir / "corpus.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (outdir / "mfd_synth.dic").write_text(mfd_text(), encoding="utf-8")
    (outdir / "moralstrength_synth.csv").write_text(moralstrength_text(),
                                                    encoding="utf-8")
    (outdir / "liwc_synth.dic").write_text(liwc_text(), encoding="utf-8")
    build_embeddings().save(outdir / "embeddings_synth.txt")
    (outdir / "config.toml").write_text(
        CONFIG_TEMPLATE.format(keyword=KEYWORD, date_start=DATE_START,
                               date_end=DATE_END),
        encoding="utf-8")

    manifest = {
        "seed": seed,
        "documents": n_docs,
        "tokens_per_document": TOKENS_PER_DOC,
        "decoys": {rule: DECOYS_PER_RULE
                   for rule in ("country", "lang", "keyword", "date")},
        "junk_lines": len(JUNK_LINES),
        "planted": {
            "care": {"category": "positive emotion", "rho": PLANTED_R_CARE},
            "degradation": {"category": "negative emotion",
                            "rho": PLANTED_R_DEGRADATION},
        },
        "latent": {"care": LATENT_RHO_CARE,
                   "degradation": LATENT_RHO_DEGRADATION},
    }
    (outdir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="generate a synthetic corpus bundle with planted correlations")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--docs", type=int, default=DEFAULT_DOCS)
    args = parser.parse_args(argv)
    manifest = generate(args.out, seed=args.seed, n_docs=args.docs)
    print(f"wrote bundle to {args.out} "
          f"({manifest['documents']} documents + decoys)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
