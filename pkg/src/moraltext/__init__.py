"""Batch text analytics for moral-foundation signals in social-media corpora.

The pipeline scores documents against a merged moral lexicon, derives
zero-shot features over the lexicon's words as labels, trains one linear
SVM per moral dimension, and correlates moral word scores with emotion
word categories. See the README for the pipeline walkthrough and the
`moraltext` command line.
"""

from .dimensions import DIMENSIONS, Dimension, Foundation, Polarity
from .errors import MoralTextError

__version__ = "0.1.0"

__all__ = [
    "DIMENSIONS",
    "Dimension",
    "Foundation",
    "Polarity",
    "MoralTextError",
    "__version__",
]
