"""Walk through the lexicon layer.

Parses the two bundled word lists, merges them, and matches a sentence
against the result. Run with: python3 demos/lexicon_merge.py
"""

from moraltext.bundled import bundled_text
from moraltext.corpus import normalize
from moraltext.dimensions import DIMENSIONS
from moraltext.lexicon import MatchKind, Provenance, match_tokens, merge, \
    parse_mfd, parse_moralstrength

mfd = parse_mfd(bundled_text("mfd_sample.dic"))
ms = parse_moralstrength(bundled_text("moralstrength_sample.csv"))
merged = merge(mfd, ms)

print("entries per dimension (mfd + rated - overlap = merged):")
for dim in DIMENSIONS:
    a = len(mfd.entries[dim])
    b = len(ms.entries[dim])
    overlap = len(set(mfd.entries[dim]) & set(ms.entries[dim]))
    print(f"  {dim.display_name:<12} {a:>2} + {b:>2} - {overlap} = {merged.entry_count(dim):>2}")
print(f"total merged entries: {merged.entry_count()}")

print("\nentries carried by both sources keep the numeric valence:")
for dim in DIMENSIONS:
    for key, source in merged.provenance[dim].items():
        if source is Provenance.BOTH:
            entry = merged.entries[dim][key]
            print(f"  {dim.display_name}: {entry.surface!r} valence {entry.valence}")

sentence = "The nurses guarded their patients with compassion while the cheaters rebelled."
tokens = normalize(sentence)
print(f"\n{sentence!r}\ntokens: {tokens}")
counts = match_tokens(tokens, merged)
hits = {dim.display_name: n for dim, n in counts.items() if n}
print(f"dimension hits: {hits}")
star = next(e for e in merged.entries_for(DIMENSIONS[0])
            if e.match_kind is MatchKind.PREFIX_WILDCARD)
print(f"(prefix entries like {star.surface!r}* match any token that starts with them)")
