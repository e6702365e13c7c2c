"""Numerical transference and strip functional calculus experiments."""

from .errors import ConfigError, TranslabError

__version__ = "0.1.0"

__all__ = ["ConfigError", "TranslabError", "__version__"]
