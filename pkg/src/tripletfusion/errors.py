"""Exception hierarchy shared by every module of the package."""


class FusionError(Exception):
    """Base class of all errors raised by :mod:`tripletfusion`."""


class ParamError(FusionError, ValueError):
    pass


class NotCoprime(ParamError):
    pass


class OrderViolation(ParamError):
    pass


class RangeViolation(ParamError):
    pass


class LabelError(FusionError, ValueError):
    pass


class LabelSyntaxError(LabelError):
    """The text does not match the label grammar at all."""


class InadmissibleLabel(LabelError):
    """Well-formed text whose indices are out of range for the parameters."""


class NotInPBasis(LabelError):
    """The label is valid but does not name an element of the ring P."""


class NegativeIndex(FusionError, ValueError):
    pass


class DimensionMismatch(FusionError, ValueError):
    pass


class InternalTableGap(FusionError, RuntimeError):
    """A basis element has no applicable fusion rule. Indicates a bug."""


class CacheCorruption(FusionError):
    pass
