"""Pipeline orchestration: config handling plus the eight subcommands.

Stages communicate only through files under the output directory, so every
stage can be re-run or inspected on its own:

    merged_lexicon.csv                    lexicon --merge
    <corpus>/documents.jsonl + meta       ingest
    <corpus>/features.csv                 featurize
    <corpus>/models/<dimension>.json      train
    <corpus>/eval.json                    evaluate
    <corpus>/correlations.json            correlate
    report/...                            report

Configuration comes from a TOML or JSON file; values can be overridden by
MORALTEXT_<SECTION>_<KEY> environment variables, then by repeated
--set section.key=value flags, then by the convenience flags. Relative
paths in the config resolve against the config file's directory. Failures
print one JSON object on stderr with the failing module's name and exit
nonzero.

Every stage writes deterministically: documents and feature rows are
sorted by document id before writing, model and report files depend only
on their inputs, and run metadata records input-derived facts only. Two
runs from the same config produce identical bytes.
"""

import argparse
import concurrent.futures
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from . import features as features_mod
from . import lexicon as lexicon_mod
from . import report as report_mod
from . import stats as stats_mod
from . import zsc as zsc_mod
from .dimensions import DIMENSIONS
from .errors import (
    CliError,
    ConfigInvalid,
    CorpusError,
    LearnError,
    LexiconError,
    MissingUpstreamArtifact,
    MoralTextError,
    NoTokenCoverage,
    ReportError,
    StatsError,
    ZeroVector,
    ZscError,
)
from .learn import TrainConfig, cross_validate, eval_report_from_dict, model_to_json, train_svm
from .rng import mix_seed

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

ENV_PREFIX = "MORALTEXT_"

_MODULE_OF = (
    (LexiconError, "lexicon"),
    (CorpusError, "corpus"),
    (ZscError, "zsc"),
    (LearnError, "learn"),
    (StatsError, "stats"),
    (ReportError, "report"),
    (CliError, "cli"),
)


def _owning_module(exc):
    for cls, name in _MODULE_OF:
        if isinstance(exc, cls):
            return name
    return "moraltext"


# ---------------------------------------------------------------- config --

def _parse_override_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _apply_env(config, environ):
    for name in sorted(environ):
        if not name.startswith(ENV_PREFIX):
            continue
        rest = name[len(ENV_PREFIX):]
        section, _, key = rest.partition("_")
        section, key = section.lower(), key.lower()
        if not key or section == "corpora":
            continue
        config.setdefault(section, {})[key] = _parse_override_value(environ[name])


def _apply_sets(config, sets):
    for item in sets or []:
        target, eq, value = item.partition("=")
        if not eq or "." not in target:
            raise ConfigInvalid(f"--set wants section.key=value, got {item!r}")
        section, key = target.split(".", 1)
        config.setdefault(section, {})[key] = _parse_override_value(value)


def _load_raw_config(path):
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config {path}: {exc}")
    if path.suffix == ".toml":
        try:
            return tomllib.loads(blob.decode("utf-8"))
        except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
            raise ConfigInvalid(f"{path}: {exc}")
    if path.suffix == ".json":
        try:
            parsed = json.loads(blob)
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"{path}: {exc}")
        if not isinstance(parsed, dict):
            raise ConfigInvalid(f"{path}: top level must be an object")
        return parsed
    raise ConfigInvalid(f"config must be .toml or .json, got {path.name!r}")


@dataclass
class RunConfig:
    root: Path
    corpora: list               # (name, path, format) triples
    mfd: Path
    moralstrength: Path
    liwc: Path
    filters: object
    backend: str
    embeddings: Path = None
    endpoint: str = None
    top_k: int = 5
    timeout: float = 10.0
    retries: int = 2
    drop_stopwords: bool = False
    stopwords: Path = None
    valence_weighted: bool = False
    threshold: float = 0.0
    train: TrainConfig = field(default_factory=TrainConfig)
    out_dir: Path = None
    plain_tables: bool = False
    workers: int = 1
    config_hash: str = ""


def _expect_table(config, name):
    value = config.get(name, {})
    if not isinstance(value, dict):
        raise ConfigInvalid(f"[{name}] must be a table")
    return value


def _existing(root, value, what):
    if value in (None, ""):
        raise ConfigInvalid(f"missing path for {what}")
    path = (root / str(value)).resolve() if not Path(str(value)).is_absolute() \
        else Path(str(value))
    if not path.is_file():
        raise ConfigInvalid(f"{what} path does not exist: {path}")
    return path


def load_run_config(path, sets=None, environ=None):
    config = _load_raw_config(path)
    _apply_env(config, os.environ if environ is None else environ)
    _apply_sets(config, sets)
    # hash the effective (post-override) config, before path resolution,
    # so the hash is stable across machines for the same inputs
    config_hash = hashlib.sha256(
        json.dumps(config, sort_keys=True, default=str).encode()).hexdigest()[:16]

    root = Path(path).resolve().parent
    raw_corpora = config.get("corpora", [])
    if not isinstance(raw_corpora, list) or not raw_corpora:
        raise ConfigInvalid("config needs at least one [[corpora]] entry")
    corpora = []
    seen = set()
    for entry in raw_corpora:
        if not isinstance(entry, dict) or "name" not in entry or "path" not in entry:
            raise ConfigInvalid("each [[corpora]] entry needs name and path")
        name = str(entry["name"]).strip()
        if not name or "/" in name or name in seen:
            raise ConfigInvalid(f"bad or duplicate corpus name {name!r}")
        seen.add(name)
        fmt = str(entry.get("format", "jsonl"))
        corpora.append((name, _existing(root, entry["path"], f"corpus {name}"), fmt))

    lex = _expect_table(config, "lexicon")
    filters = corpus_mod.filter_spec_from_config(_expect_table(config, "filters"))

    z = _expect_table(config, "zsc")
    backend = str(z.get("backend", "builtin"))
    if backend not in ("builtin", "external"):
        raise ConfigInvalid(f"zsc backend must be builtin or external, got {backend!r}")
    embeddings = endpoint = None
    if backend == "builtin":
        if z.get("endpoint"):
            raise ConfigInvalid("builtin backend must not set an endpoint")
        embeddings = _existing(root, z.get("embeddings"), "zsc embeddings")
    else:
        endpoint = str(z.get("endpoint") or "")
        if not endpoint:
            raise ConfigInvalid("external backend needs zsc.endpoint")

    feats = _expect_table(config, "features")
    train_raw = _expect_table(config, "train")
    try:
        train = TrainConfig(
            lam=float(train_raw.get("lambda", 1e-3)),
            epochs=int(train_raw.get("epochs", 20)),
            seed=int(train_raw.get("seed", 0)),
            folds=int(train_raw.get("folds", 10)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(f"bad [train] values: {exc}")

    output = _expect_table(config, "output")
    out_value = output.get("dir", "out")
    out_dir = (root / str(out_value)) if not Path(str(out_value)).is_absolute() \
        else Path(str(out_value))

    run = _expect_table(config, "run")
    workers = int(run.get("workers", 1))
    if workers < 1:
        raise ConfigInvalid("run.workers must be >= 1")

    stopwords = None
    if feats.get("stopwords"):
        stopwords = _existing(root, feats["stopwords"], "stopword list")

    return RunConfig(
        root=root,
        corpora=corpora,
        mfd=_existing(root, lex.get("mfd"), "MFD lexicon"),
        moralstrength=_existing(root, lex.get("moralstrength"), "MoralStrength lexicon"),
        liwc=_existing(root, lex.get("liwc"), "category dictionary"),
        filters=filters,
        backend=backend,
        embeddings=embeddings,
        endpoint=endpoint,
        top_k=int(z.get("top_k", 5)),
        timeout=float(z.get("timeout", 10.0)),
        retries=int(z.get("retries", 2)),
        drop_stopwords=bool(feats.get("drop_stopwords", False)),
        stopwords=stopwords,
        valence_weighted=bool(feats.get("valence_weighted", False)),
        threshold=float(feats.get("weak_label_threshold", 0.0)),
        train=train,
        out_dir=out_dir.resolve(),
        plain_tables=bool(output.get("plain_tables", False)),
        workers=workers,
        config_hash=config_hash,
    )


# ------------------------------------------------------------- artifacts --

def _merged_lexicon_path(cfg):
    return cfg.out_dir / "merged_lexicon.csv"


def _corpus_dir(cfg, name):
    return cfg.out_dir / name


def _require(path, producer):
    if not path.is_file():
        raise MissingUpstreamArtifact(f"{path} not found; run `moraltext {producer}` first")
    return path


def _write_text(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _write_json(path, payload):
    _write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _load_merged(cfg):
    text = _require(_merged_lexicon_path(cfg), "lexicon --merge").read_text(encoding="utf-8")
    return lexicon_mod.parse_merged_csv(text)


def _load_documents(cfg, name):
    path = _require(_corpus_dir(cfg, name) / "documents.jsonl", "ingest")
    docs = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.strip():
            docs.append(corpus_mod.document_from_json(json.loads(line)))
    return docs


def _load_records(cfg, name):
    path = _require(_corpus_dir(cfg, name) / "features.csv", "featurize")
    return features_mod.read_records_csv(path.read_text(encoding="utf-8"))


def _load_stopwords(cfg):
    if not cfg.drop_stopwords or cfg.stopwords is None:
        return frozenset()
    words = cfg.stopwords.read_text(encoding="utf-8").split()
    return frozenset(w.strip().lower() for w in words if w.strip())


# ---------------------------------------------------------------- stages --

def stage_lexicon(cfg, write_merged):
    mfd = lexicon_mod.parse_mfd(cfg.mfd.read_text(encoding="utf-8"))
    ms = lexicon_mod.parse_moralstrength(cfg.moralstrength.read_text(encoding="utf-8"))
    merged = lexicon_mod.merge(mfd, ms)
    print(f"lexicon: MFD {sum(len(e) for e in mfd.entries.values())} entries, "
          f"MoralStrength {sum(len(e) for e in ms.entries.values())} entries "
          f"({ms.dropped_neutral} neutral dropped), merged {merged.entry_count()}")
    if write_merged:
        path = _merged_lexicon_path(cfg)
        _write_text(path, lexicon_mod.write_merged_csv(merged))
        print(f"lexicon: wrote {path}")
    return merged


def stage_ingest(cfg):
    stopwords = _load_stopwords(cfg)
    for name, path, fmt in cfg.corpora:
        result = corpus_mod.ingest(path, fmt)
        normalized = [corpus_mod.normalize_document(d, cfg.drop_stopwords, stopwords)
                      for d in result.documents]
        kept, drops = corpus_mod.apply_filters(normalized, cfg.filters)
        kept.sort(key=lambda d: d.id)
        lines = [json.dumps(corpus_mod.document_to_json(d)) for d in kept]
        outdir = _corpus_dir(cfg, name)
        _write_text(outdir / "documents.jsonl",
                    "\n".join(lines) + ("\n" if lines else ""))
        meta = {
            "lines": result.lines,
            "skipped": result.skipped,
            "ingested": len(result.documents),
            "kept": len(kept),
            "drops": drops,
            "date_start": corpus_mod.format_rfc3339(min(d.created_at for d in kept))
            if kept else None,
            "date_end": corpus_mod.format_rfc3339(max(d.created_at for d in kept))
            if kept else None,
        }
        _write_json(outdir / "ingest_meta.json", meta)
        print(f"ingest {name}: {result.lines} lines -> {len(kept)} kept "
              f"({result.skipped} malformed, {sum(drops.values())} filtered)")


def _builtin_features(cfg, docs, label_sets, table):
    def one(doc):
        tokens = doc.tokens or ()
        try:
            scored = [zsc_mod.score_labels_builtin(tokens, label_sets[dim], table)
                      for dim in DIMENSIONS]
        except (NoTokenCoverage, ZeroVector):
            return None
        return zsc_mod.dimension_features(scored, k=cfg.top_k)

    with concurrent.futures.ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(one, docs))


def _external_features(cfg, docs, label_sets):
    scorer = zsc_mod.ExternalScorer(cfg.endpoint, timeout=cfg.timeout,
                                    retries=cfg.retries, max_in_flight=cfg.workers)

    def one(doc):
        text = " ".join(doc.tokens or ())
        scored = [scorer.score(text, label_sets[dim]) for dim in DIMENSIONS]
        return zsc_mod.dimension_features(scored, k=cfg.top_k)

    with concurrent.futures.ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(one, docs))


def stage_featurize(cfg):
    merged = _load_merged(cfg)
    categories = lexicon_mod.parse_category_dic(cfg.liwc.read_text(encoding="utf-8"))
    label_sets = zsc_mod.build_label_sets(merged)
    table = zsc_mod.EmbeddingTable.load(cfg.embeddings) if cfg.backend == "builtin" else None
    neutral = [0.5] * len(DIMENSIONS)
    for name, _, _ in cfg.corpora:
        docs = _load_documents(cfg, name)
        if cfg.backend == "builtin":
            feature_rows = _builtin_features(cfg, docs, label_sets, table)
        else:
            feature_rows = _external_features(cfg, docs, label_sets)
        no_coverage = sum(1 for row in feature_rows if row is None)
        records = [features_mod.build_record(
            doc, merged, categories,
            row if row is not None else neutral,
            threshold=cfg.threshold,
            valence_weighted=cfg.valence_weighted,
        ) for doc, row in zip(docs, feature_rows)]
        records.sort(key=lambda r: r.doc_id)
        outdir = _corpus_dir(cfg, name)
        _write_text(outdir / "features.csv", features_mod.write_records_csv(records))
        _write_json(outdir / "features_meta.json", {
            "records": len(records),
            "no_coverage": no_coverage,
            "backend": cfg.backend,
            "top_k": cfg.top_k,
        })
        print(f"featurize {name}: {len(records)} records "
              f"({no_coverage} without embedding coverage)")


def stage_train(cfg):
    for name, _, _ in cfg.corpora:
        records = _load_records(cfg, name)
        X = np.array([r.zsc_features for r in records], dtype=np.float64)
        outdir = _corpus_dir(cfg, name) / "models"
        trained, skipped = [], []
        for dim_index, dim in enumerate(DIMENSIONS):
            y = np.array([r.weak_labels[dim_index] for r in records], dtype=np.float64)
            if len(np.unique(y)) < 2:
                skipped.append(dim.slug)
                continue
            dim_cfg = TrainConfig(lam=cfg.train.lam, epochs=cfg.train.epochs,
                                  seed=mix_seed(cfg.train.seed, dim_index),
                                  folds=cfg.train.folds)
            model = train_svm(X, y, dim_cfg, dimension=dim)
            _write_text(outdir / f"{dim.slug}.json", model_to_json(model, dim_cfg))
            trained.append(dim.slug)
        _write_json(_corpus_dir(cfg, name) / "train_meta.json",
                    {"trained": trained, "skipped": skipped,
                     "records": len(records), "config_hash": cfg.train.hash()})
        print(f"train {name}: {len(trained)} models"
              + (f", skipped single-class: {', '.join(skipped)}" if skipped else ""))


def stage_evaluate(cfg):
    for name, _, _ in cfg.corpora:
        records = _load_records(cfg, name)
        result = cross_validate(records, cfg.train)
        _write_json(_corpus_dir(cfg, name) / "eval.json", result.as_dict())
        shown = [f"{dim.slug}={ev.mean_f1:.3f}"
                 for dim, ev in result.per_dimension.items() if ev.mean_f1 is not None]
        print(f"evaluate {name}: " + (" ".join(shown) if shown else "all skipped"))


def stage_correlate(cfg):
    for name, _, _ in cfg.corpora:
        records = _load_records(cfg, name)
        matrix = stats_mod.correlation_matrix(records)
        _write_json(_corpus_dir(cfg, name) / "correlations.json", matrix.as_dict())
        print(f"correlate {name}: n={matrix.n}")


def stage_report(cfg):
    correlations, f1_reports, counts = {}, {}, {}
    date_start, date_end = None, None
    for name, _, _ in cfg.corpora:
        cdir = _corpus_dir(cfg, name)
        corr_path = _require(cdir / "correlations.json", "correlate")
        eval_path = _require(cdir / "eval.json", "evaluate")
        meta_path = _require(cdir / "ingest_meta.json", "ingest")
        correlations[name] = stats_mod.correlation_matrix_from_dict(
            json.loads(corr_path.read_text(encoding="utf-8")))
        f1_reports[name] = eval_report_from_dict(
            json.loads(eval_path.read_text(encoding="utf-8")))
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        counts[name] = {"lines": meta["lines"], "kept": meta["kept"],
                        "skipped": meta["skipped"], "drops": meta["drops"]}
        for bound in (meta.get("date_start"), meta.get("date_end")):
            if bound is None:
                continue
            date_start = bound if date_start is None else min(date_start, bound)
            date_end = bound if date_end is None else max(date_end, bound)
    bundle = report_mod.ReportBundle(
        correlations=correlations,
        f1_reports=f1_reports,
        run_meta={
            "config_hash": cfg.config_hash,
            "corpora": counts,
            "date_start": date_start,
            "date_end": date_end,
        },
    )
    paths = bundle.write(cfg.out_dir / "report", plain=cfg.plain_tables)
    print(f"report: wrote {len(paths)} files under {cfg.out_dir / 'report'}")


def stage_run_all(cfg):
    stage_lexicon(cfg, write_merged=True)
    stage_ingest(cfg)
    stage_featurize(cfg)
    stage_train(cfg)
    stage_evaluate(cfg)
    stage_correlate(cfg)
    stage_report(cfg)


# ------------------------------------------------------------------ main --

def build_parser():
    parser = argparse.ArgumentParser(
        prog="moraltext",
        description="moral-foundation scoring, classification, and correlation "
                    "for text corpora")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="TOML or JSON run config")
        p.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE",
                       help="override one config value; repeatable")
        p.add_argument("--out", help="override the output directory")
        p.add_argument("--workers", type=int, help="worker pool size")

    p = sub.add_parser("lexicon", help="parse and merge the moral lexicons")
    common(p)
    p.add_argument("--merge", action="store_true",
                   help="write the canonical merged CSV artifact")

    for cmd, help_text in [
        ("ingest", "read, normalize, and filter each corpus"),
        ("featurize", "score documents and build the feature table"),
        ("train", "fit one linear SVM per dimension"),
        ("evaluate", "k-fold cross-validation per dimension"),
        ("correlate", "correlation of moral scores with emotion features"),
    ]:
        common(sub.add_parser(cmd, help=help_text))

    p = sub.add_parser("report", help="render the table artifacts")
    common(p)
    p.add_argument("--plain", action="store_true",
                   help="omit significance stars from the tables")

    p = sub.add_parser("run-all", help="run the whole pipeline in order")
    common(p)
    p.add_argument("--plain", action="store_true",
                   help="omit significance stars from the tables")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        sets = list(args.set or [])
        if args.out:
            sets.append(f"output.dir={args.out}")
        if args.workers:
            sets.append(f"run.workers={args.workers}")
        if getattr(args, "plain", False):
            sets.append("output.plain_tables=true")
        cfg = load_run_config(args.config, sets=sets)
        if args.command == "lexicon":
            stage_lexicon(cfg, write_merged=args.merge)
        elif args.command == "ingest":
            stage_ingest(cfg)
        elif args.command == "featurize":
            stage_featurize(cfg)
        elif args.command == "train":
            stage_train(cfg)
        elif args.command == "evaluate":
            stage_evaluate(cfg)
        elif args.command == "correlate":
            stage_correlate(cfg)
        elif args.command == "report":
            stage_report(cfg)
        else:
            stage_run_all(cfg)
    except MoralTextError as exc:
        payload = {"error": type(exc).__name__,
                   "module": _owning_module(exc),
                   "message": str(exc)}
        print(json.dumps(payload), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
