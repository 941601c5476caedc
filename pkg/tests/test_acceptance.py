"""Headline guarantees, one test per criterion.

Every test funnels into a single boolean and prints one
``[ACCEPTANCE n] name: PASS/FAIL`` line through the shared recorder, so a
plain pytest run shows the per-criterion verdicts at the end. Assertion
messages carry the measured numbers for debugging; the checks themselves
are intentionally independent of the library code they exercise (math.fsum
for the correlation definition, scipy's t distribution for p-values,
frozen hand-derived word lists for the parsers).
"""

import json
import math
import random
import time

import numpy as np
import scipy.stats

from moraltext.bundled import bundled_text
from moraltext.dimensions import DIMENSIONS, Dimension
from moraltext.learn import TrainConfig, kfold_split, predict, train_svm
from moraltext.lexicon import MatchKind, Provenance, merge, parse_mfd, parse_moralstrength
from moraltext.report import UNDEFINED_CELL, parse_starred_value
from moraltext.stats import p_value, pearson_r

E = MatchKind.EXACT
W = MatchKind.PREFIX_WILDCARD


def _definition_r(x, y):
    """Pearson r straight from the definition, fsum-accumulated."""
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    cov = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    vx = math.fsum((a - mx) ** 2 for a in x)
    vy = math.fsum((b - my) ** 2 for b in y)
    return cov / math.sqrt(vx * vy)


def _t_oracle_p(r, n):
    if abs(r) >= 1.0:
        return 0.0
    t = abs(r) * math.sqrt((n - 2) / (1.0 - r * r))
    return 2.0 * float(scipy.stats.t.sf(t, n - 2))


def test_correlation_against_definition_and_t_oracle(record_acceptance):
    rng = np.random.default_rng(20260815)
    worst_r = 0.0
    worst_p = 0.0
    t0 = time.perf_counter()
    for _ in range(1000):
        n = int(rng.integers(3, 501))
        x = rng.standard_normal(n)
        y = rng.standard_normal(n) + float(rng.uniform(-1.5, 1.5)) * x
        r = pearson_r(x, y)
        worst_r = max(worst_r, abs(r - _definition_r(x.tolist(), y.tolist())))
        worst_p = max(worst_p, abs(p_value(r, n) - _t_oracle_p(r, n)))
    elapsed = time.perf_counter() - t0
    ok = worst_r <= 1e-10 and worst_p <= 1e-6 and elapsed < 10.0
    assert record_acceptance(1, "pearson r and p-value vs independent oracles", ok), (
        f"worst |r - def| = {worst_r:.3e}, worst |p - t oracle| = {worst_p:.3e}, "
        f"elapsed = {elapsed:.2f}s")


def _margin_blobs(n=200, seed=7):
    """Two 2-d classes separated by a unit gap along the first axis."""
    rng = np.random.default_rng(seed)
    y = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    x1 = y * (0.5 + np.abs(rng.standard_normal(n)))
    x2 = rng.normal(scale=2.0, size=n)
    return np.column_stack([x1, x2]), y


def test_classifier_fits_separable_blobs_deterministically(record_acceptance):
    X, y = _margin_blobs()
    cfg = TrainConfig(lam=1e-3, epochs=20, seed=7)
    t0 = time.perf_counter()
    model = train_svm(X, y, cfg)
    elapsed = time.perf_counter() - t0
    accuracy = float(np.mean(predict(model, X) == y))
    again = train_svm(X, y, cfg)
    identical = (model.weights.tobytes() == again.weights.tobytes()
                 and model.bias == again.bias)
    ok = accuracy >= 0.99 and identical and elapsed < 1.0
    assert record_acceptance(2, "linear classifier on margin blobs", ok), (
        f"accuracy = {accuracy:.4f}, bitwise identical = {identical}, "
        f"elapsed = {elapsed:.3f}s")


def test_planted_correlations_recovered(bundle_pair, record_acceptance):
    payload = json.loads(
        (bundle_pair.a / "out" / "synth" / "correlations.json").read_text())
    planted = (("positive emotion", "care", 0.6),
               ("negative emotion", "degradation", 0.5))
    problems = []
    if payload["n"] != 2000:
        problems.append(f"n = {payload['n']}, wanted 2000")
    for category, slug, rho in planted:
        cell = payload["cells"][category][slug]
        if cell.get("undefined"):
            problems.append(f"({category}, {slug}) undefined")
            continue
        if not cell["r"] > 0:
            problems.append(f"({category}, {slug}) r = {cell['r']} not positive")
        if not abs(cell["r"] - rho) < 0.1:
            problems.append(f"({category}, {slug}) |r - {rho}| = {abs(cell['r'] - rho):.3f}")
        if not cell["p"] < 0.001:
            problems.append(f"({category}, {slug}) p = {cell['p']}")
        if cell["stars"] != "***":
            problems.append(f"({category}, {slug}) stars = {cell['stars']!r}")
    budget = bundle_pair.generate_seconds + bundle_pair.runall_seconds
    if not budget < 30.0:
        problems.append(f"generate + pipeline took {budget:.1f}s")
    ok = not problems
    assert record_acceptance(3, "planted correlations recovered end to end", ok), \
        "; ".join(problems)


def test_cross_validated_f1_on_planted_dimensions(bundle_pair, record_acceptance):
    payload = json.loads(
        (bundle_pair.a / "out" / "synth" / "eval.json").read_text())
    problems = []
    if payload["folds"] != 10:
        problems.append(f"folds = {payload['folds']}, wanted 10")
    for slug in ("care", "degradation"):
        entry = payload["dimensions"][slug]
        if entry["skipped"] or entry["mean_f1"] is None:
            problems.append(f"{slug} skipped")
        elif not entry["mean_f1"] > 0.9:
            problems.append(f"{slug} mean F1 = {entry['mean_f1']:.3f}")

    table = (bundle_pair.a / "out" / "report" / "f1.md").read_text().splitlines()
    header = [c.strip() for c in table[0].strip("|").split("|")]
    wanted = ["corpus"] + [dim.display_name for dim in DIMENSIONS]
    if header != wanted:
        problems.append(f"table header {header}")
    row = [c.strip() for c in table[2].strip("|").split("|")]
    if len(row) != 11 or UNDEFINED_CELL in row:
        problems.append(f"table row incomplete: {row}")
    else:
        for cell in row[1:]:
            value, _ = parse_starred_value(cell)
            if value is None or not 0.0 <= value <= 1.0:
                problems.append(f"bad F1 cell {cell!r}")
    ok = not problems
    assert record_acceptance(4, "cross-validated F1 table on planted dimensions", ok), \
        "; ".join(problems)


# Hand-derived contents of the bundled fixtures, written down independently
# of the parsers. (surface, kind) per dimension; MoralStrength all exact.
MFD_EXPECTED = {
    Dimension.CARE: {("safe", W), ("peace", W), ("compassion", E), ("empath", W),
                     ("guard", W), ("shield", E), ("mother", E), ("benefit", E),
                     ("amity", E)},
    Dimension.HARM: {("kill", W), ("harm", W), ("suffer", W), ("war", E),
                     ("fight", W), ("sin", E)},
    Dimension.FAIRNESS: {("fair", E), ("justice", E), ("honest", W)},
    Dimension.CHEATING: {("unfair", W), ("cheat", W), ("betray", W)},
    Dimension.LOYALTY: {("loyal", W), ("family", E), ("nation", W), ("duty", E)},
    Dimension.BETRAYAL: {("betray", W), ("traitor", W), ("rebel", W)},
    Dimension.AUTHORITY: {("justice", E), ("obey", W), ("duty", E), ("order", E)},
    Dimension.SUBVERSION: {("rebel", W), ("defian", W), ("protest", W)},
    Dimension.PURITY: {("pure", W), ("sacred", W), ("clean", W), ("family", E)},
    Dimension.DEGRADATION: {("dirt", W), ("sin", E), ("disgust", W)},
}

MORALSTRENGTH_EXPECTED = {
    Dimension.CARE: {"compassion": 8.1, "shield": 7.2, "mother": 8.8,
                     "benefit": 6.9, "amity": 7.7, "caring": 8.0},
    Dimension.HARM: {"hurt": 2.3},
    Dimension.FAIRNESS: {"equity": 7.5},
    Dimension.CHEATING: {"rigged": 2.2},
    Dimension.LOYALTY: {"comrade": 6.8},
    Dimension.BETRAYAL: {"desertion": 1.9},
    Dimension.AUTHORITY: {"reverence": 7.4},
    Dimension.SUBVERSION: {"anarchy": 2.5},
    Dimension.PURITY: {"holiness": 8.3},
    Dimension.DEGRADATION: {"squalid": 2.0},
}


def test_parsers_match_hand_derived_sets_and_merge_identity(record_acceptance):
    mfd = parse_mfd(bundled_text("mfd_sample.dic"))
    ms = parse_moralstrength(bundled_text("moralstrength_sample.csv"))
    problems = []

    for dim in DIMENSIONS:
        got = set(mfd.entries[dim])
        if got != MFD_EXPECTED[dim]:
            problems.append(f"mfd {dim.slug}: {got ^ MFD_EXPECTED[dim]}")
        got_ms = {surface: entry.valence
                  for (surface, _), entry in ms.entries[dim].items()}
        if got_ms != MORALSTRENGTH_EXPECTED[dim]:
            problems.append(f"moralstrength {dim.slug}: {got_ms}")
    if ms.dropped_neutral != 1:
        problems.append(f"dropped_neutral = {ms.dropped_neutral}")

    merged = merge(mfd, ms)
    overlap_total = 0
    for dim in DIMENSIONS:
        overlap = len(set(mfd.entries[dim]) & set(ms.entries[dim]))
        overlap_total += overlap
        wanted = len(mfd.entries[dim]) + len(ms.entries[dim]) - overlap
        if merged.entry_count(dim) != wanted:
            problems.append(f"merged {dim.slug}: {merged.entry_count(dim)} != {wanted}")
    if overlap_total != 5:
        problems.append(f"overlap total = {overlap_total}, wanted 5")
    if merged.entry_count() != 52:
        problems.append(f"merged total = {merged.entry_count()}")
    key = ("compassion", E)
    if merged.provenance[Dimension.CARE][key] is not Provenance.BOTH:
        problems.append("compassion provenance not Both")
    if merged.entries[Dimension.CARE][key].valence != 8.1:
        problems.append("compassion valence not taken from the rated source")
    ok = not problems
    assert record_acceptance(5, "lexicon parsers and merge identity", ok), \
        "; ".join(problems)


def test_fold_partition_laws_hold_over_random_triples(record_acceptance):
    rng = random.Random(161803)
    problems = []
    for _ in range(500):
        k = rng.randrange(2, 21)
        n = rng.randrange(k, 2001)
        seed = rng.randrange(0, 2 ** 63)
        folds = kfold_split(n, k, seed)
        flat = sorted(i for fold in folds for i in fold)
        if flat != list(range(n)):
            problems.append(f"coverage broken at n={n} k={k} seed={seed}")
        sizes = [len(fold) for fold in folds]
        if max(sizes) - min(sizes) > 1:
            problems.append(f"imbalance {sizes} at n={n} k={k}")
        if folds != kfold_split(n, k, seed):
            problems.append(f"nondeterministic at n={n} k={k} seed={seed}")
        if problems:
            break
    ok = not problems
    assert record_acceptance(6, "k-fold partition laws over 500 random triples", ok), \
        "; ".join(problems)


def test_independent_runs_write_identical_trees(bundle_pair, record_acceptance):
    out_a = bundle_pair.a / "out"
    out_b = bundle_pair.b / "out"
    rel_a = sorted(p.relative_to(out_a) for p in out_a.rglob("*") if p.is_file())
    rel_b = sorted(p.relative_to(out_b) for p in out_b.rglob("*") if p.is_file())
    problems = []
    if rel_a != rel_b:
        problems.append(f"file lists differ: {set(rel_a) ^ set(rel_b)}")
    else:
        for rel in rel_a:
            if (out_a / rel).read_bytes() != (out_b / rel).read_bytes():
                problems.append(f"bytes differ: {rel}")
    if not rel_a:
        problems.append("no artifacts found")
    ok = not problems
    assert record_acceptance(7, "independent runs produce identical artifact trees", ok), \
        "; ".join(problems)
