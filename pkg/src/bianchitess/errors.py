"""Exception hierarchy shared by all modules."""


class TessError(Exception):
    """Base class for every error raised by this package."""


class NotSquareFree(TessError, ValueError):
    pass


class NotNegative(TessError, ValueError):
    pass


class ZeroIdeal(TessError, ValueError):
    pass


class ZeroVector(TessError, ValueError):
    pass


class NotUnimodular(TessError, ValueError):
    pass


class NotPositiveDefinite(TessError, ValueError):
    pass


class DegenerateCandidate(TessError, ValueError):
    """The candidate vector imposes no condition on the imaginary part of beta."""


class SearchExhausted(TessError, RuntimeError):
    pass


class DegenerateCone(TessError, RuntimeError):
    """Cone generators span fewer than four dimensions."""


class NotAFacet(TessError, ValueError):
    pass


class NonterminatingStep(TessError, RuntimeError):
    pass
