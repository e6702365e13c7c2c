"""Exception hierarchy shared by all modules."""


class TranslabError(Exception):
    pass


class StripViolation(TranslabError, ValueError):
    """A point or weight lies outside the admissible strip."""


class GridOverflow(TranslabError):
    pass


class GridTooShort(TranslabError, ValueError):
    pass


class ParameterOrder(TranslabError, ValueError):
    pass


class DimensionMismatch(TranslabError, ValueError):
    pass


class NearSpectrum(TranslabError, ValueError):
    pass


class GrowthMismatch(TranslabError, ValueError):
    """The measure's exponential decay does not dominate the group growth."""


class NotElementary(TranslabError, ValueError):
    pass


class StripOrder(TranslabError, ValueError):
    pass


class NoConvergence(TranslabError):
    pass


class MissingDerivative(TranslabError, ValueError):
    pass


class SolverDiverged(TranslabError):
    pass


class SupportViolation(TranslabError, ValueError):
    pass


class CheckFailed(TranslabError):
    def __init__(self, message, probe=None):
        super().__init__(message)
        self.probe = probe


class ConfigError(TranslabError, ValueError):
    pass
