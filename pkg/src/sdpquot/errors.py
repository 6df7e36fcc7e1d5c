"""Exception hierarchy shared by the library and the command line."""


class SdpError(Exception):
    """Base class for every error raised on purpose by this package."""

    exit_code = 2


class InputError(SdpError, ValueError):
    """Malformed or inconsistent input data (elements, descriptors, configs)."""

    exit_code = 2


class FormatError(InputError):
    """A serialized document is structurally unusable or has the wrong version."""


class LimitError(SdpError):
    """A configured size cap would be exceeded."""

    exit_code = 3

    def __init__(self, what, value, cap):
        self.what = what
        self.value = value
        self.cap = cap
        super().__init__(f"{what} = {value} exceeds cap {cap}")


class VerificationError(SdpError):
    """A mathematical check failed (not a parse problem)."""

    exit_code = 1
