"""Exception hierarchy shared by all modules.

Errors derived from :class:`InputError` describe bad user input (the CLI
exits with status 2); :class:`InternalInconsistency` and
:class:`PrecisionExhausted` indicate a bug and map to exit status 3.
"""


class QuadtorsError(Exception):
    pass


class InputError(QuadtorsError, ValueError):
    pass


class FieldMismatch(InputError):
    pass


class ZeroPolynomial(InputError):
    pass


class SingularCurve(InputError):
    pass


class PointNotOnCurve(InputError):
    pass


class OrderTooSmall(InputError):
    pass


class BadReduction(InputError):
    pass


class UnsupportedCase(InputError):
    pass


class InternalInconsistency(QuadtorsError, RuntimeError):
    pass


class PrecisionExhausted(InternalInconsistency):
    pass
