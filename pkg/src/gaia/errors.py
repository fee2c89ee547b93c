"""Exception hierarchy shared by every gaia module.

All library errors derive from GaiaError so callers can catch one base
class at the CLI boundary and map it to a nonzero exit code.
"""

from __future__ import annotations


class GaiaError(Exception):
    """Base class for every error raised by this package."""


class DomainError(GaiaError):
    """A value lies outside its documented domain (bad coordinate, key, range)."""


class EmptyIntersectionError(GaiaError):
    """A query shape does not intersect the configured world rectangle."""


class BuildError(GaiaError):
    """A store cannot be built from the given entities (e.g. duplicate ids)."""


class IncompleteDataError(GaiaError):
    """An analysis input is missing rows or columns it needs."""


class ConfigError(GaiaError):
    """A grid configuration is invalid or inconsistent with its consumer."""
