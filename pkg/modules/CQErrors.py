"""
Exception hierarchy shared by the colour quantisation tasks.

Each task module declares its own specific exceptions and derives them from
one of the three families below; the driver maps the families onto exit
codes (InputError -> 2, UsageError -> 1, InvariantError -> 3).
"""

__all__ = ['Error', 'InputError', 'UsageError', 'InvariantError']


class Error(Exception):
    """Base class of all colour quantisation errors."""

    pass


class InputError(Error):
    """An input file or its contents could not be used."""

    pass


class UsageError(Error):
    """A parameter is outside its documented range."""

    pass


class InvariantError(Error):
    """An internal invariant was violated (checked in debug mode)."""

    pass
