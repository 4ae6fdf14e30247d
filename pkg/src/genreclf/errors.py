"""Exception hierarchy for the genre-classification toolkit.

Every error raised by the library derives from GenreClfError so CLI code
can catch one base class and report the concrete class name.
"""


class GenreClfError(Exception):
    pass


# corpus
class MissingDirectory(GenreClfError):
    pass


class InsufficientReviews(GenreClfError):
    pass


class EmptyFile(GenreClfError):
    pass


class MalformedLine(GenreClfError):
    pass


class MissingLabel(GenreClfError):
    pass


class UnknownReview(GenreClfError):
    pass


class EmptyGenreList(GenreClfError):
    pass


class AllGenresRemoved(GenreClfError):
    pass


# vectorize
class EmptyCorpus(GenreClfError):
    pass


class EmptyDocument(GenreClfError):
    pass


class UnknownTerm(GenreClfError):
    pass


# models
class ShapeMismatch(GenreClfError):
    pass


class NonFiniteLoss(GenreClfError):
    pass


class CorruptModelFile(GenreClfError):
    pass


class VersionMismatch(GenreClfError):
    pass


# metrics
class EmptyMatrix(GenreClfError):
    pass
