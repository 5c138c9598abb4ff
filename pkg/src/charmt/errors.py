"""Exception types shared across the toolkit."""


class CharmtError(Exception):
    """Base class for all toolkit errors."""


class AlignmentMismatch(CharmtError):
    """Parallel files have different line counts."""


class EncodingError(CharmtError):
    """A corpus file is not valid UTF-8."""


class PairMismatch(CharmtError):
    """Corpora with different language pairs were combined."""


class LengthMismatch(CharmtError):
    """Hypothesis and reference sequences have different lengths."""


class EmptySet(CharmtError):
    """An aggregate was requested over an empty selection."""


class EmptyCorpus(CharmtError):
    """A vocabulary was requested from corpora with no pairs."""


class MissingTag(CharmtError):
    """A required language tag is not in the vocabulary."""


class InvalidId(CharmtError):
    """A token id is outside the vocabulary."""


class ShapeMismatch(CharmtError):
    """Batch tensors are inconsistent with each other or the model."""


class NonFiniteLoss(CharmtError):
    """Training produced a NaN or infinite loss."""


class IncompatibleVocab(CharmtError):
    """A checkpoint and a vocabulary do not agree."""


class EmptyManifest(CharmtError):
    """A sampling distribution was requested from an empty manifest."""


class ZeroSize(CharmtError):
    """A language pair with zero examples cannot be sampled."""


class MissingCorpus(CharmtError):
    """A sampled language pair has no corpus to draw from."""


class IncompatibleMembers(CharmtError):
    """Ensemble members do not share a vocabulary."""
