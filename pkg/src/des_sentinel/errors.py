import os
import warnings


class DesError(Exception):
    """Base class for all errors raised by this package."""


class AlphabetError(DesError):
    pass


class PreconditionError(DesError):
    pass


class GuardError(DesError):
    """An instance exceeded a configured size guard."""


def guards_enabled():
    mode = os.environ.get("DES_SENTINEL_GUARDS", "strict").lower()
    if mode == "off":
        warnings.warn("DES_SENTINEL_GUARDS=off: size guards disabled", RuntimeWarning)
        return False
    return True


def check_guard(what, size, limit):
    if limit is not None and size > limit and guards_enabled():
        raise GuardError(f"{what} = {size} exceeds guard {limit}")
