"""Exception types raised across the toolkit, grouped by subsystem."""


class MoralTextError(Exception):
    """Base class for every error this package raises on purpose."""


# -- lexicon ----------------------------------------------------------------

class LexiconError(MoralTextError):
    pass


class MalformedHeader(LexiconError):
    """A .dic file is missing its %-delimited category header."""


class UnknownCategoryId(LexiconError):
    """A word line references a category id that the header never declared."""


class EmptyLexicon(LexiconError):
    """A lexicon file parsed to zero word entries."""


class BadValence(LexiconError):
    """A moral-valence value is non-numeric or outside [1, 9]."""


class UnknownFoundation(LexiconError):
    """A foundation column value names none of the five foundations."""


# -- corpus -----------------------------------------------------------------

class CorpusError(MoralTextError):
    pass


class FileUnreadable(CorpusError):
    pass


class UnknownFormat(CorpusError):
    pass


class AllRecordsMalformed(CorpusError):
    """Every line of a non-empty input failed to parse as a record."""


# -- zero-shot scoring ------------------------------------------------------

class ZscError(MoralTextError):
    pass


class NoTokenCoverage(ZscError):
    """No document token is present in the embedding vocabulary."""


class ZeroVector(ZscError):
    """The document or a label vector has zero norm; cosine is undefined."""


class ServiceUnreachable(ZscError):
    pass


class ProtocolViolation(ZscError):
    """The scoring service replied outside the wire contract."""


class Timeout(ZscError):
    pass


class MissingDimension(ZscError):
    """Fewer than the full ten dimensions were supplied."""


# -- learning ---------------------------------------------------------------

class LearnError(MoralTextError):
    pass


class TooFewSamples(LearnError):
    pass


class DegenerateLabels(LearnError):
    """Training labels contain only one class."""


class DimensionMismatch(LearnError):
    pass


class LengthMismatch(LearnError):
    pass


# -- statistics -------------------------------------------------------------

class StatsError(MoralTextError):
    pass


class ZeroVariance(StatsError):
    """A series is constant, so the correlation is undefined."""


# -- reporting / orchestration ----------------------------------------------

class ReportError(MoralTextError):
    pass


class IncompleteMatrix(ReportError):
    pass


class CliError(MoralTextError):
    pass


class ConfigInvalid(CliError):
    pass


class MissingUpstreamArtifact(CliError):
    """A subcommand needs an artifact that an earlier stage has not written."""
