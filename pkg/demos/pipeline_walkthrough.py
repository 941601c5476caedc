"""Run the full pipeline on a generated corpus, one stage at a time.

Writes everything into a temp directory and prints the rendered tables.
Run with: python3 demos/pipeline_walkthrough.py [--docs N]
"""

import argparse
import tempfile
from pathlib import Path

from moraltext import synth
from moraltext.cli import main

parser = argparse.ArgumentParser()
parser.add_argument("--docs", type=int, default=600)
args = parser.parse_args()

root = Path(tempfile.mkdtemp(prefix="moraltext-demo-"))
print(f"generating a {args.docs}-document corpus bundle under {root}")
synth.generate(root, n_docs=args.docs)
config = str(root / "config.toml")

for stage in ("lexicon", "ingest", "featurize", "train", "evaluate",
              "correlate", "report"):
    argv = [stage, "--config", config]
    if stage == "lexicon":
        argv.append("--merge")
    print(f"$ moraltext {' '.join(argv)}")
    rc = main(argv)
    assert rc == 0, f"stage {stage} failed"

report = root / "out" / "report"
print("\n" + (report / "correlations_synth.md").read_text())
print((report / "f1.md").read_text())
print(f"artifacts left under {root / 'out'} for inspection")
