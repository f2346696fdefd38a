"""Exception types raised by `liesym`.

Every error derives from `LieSymError` and from the closest builtin, so
``except ValueError`` keeps working for callers that do not import this
module.
"""




class LieSymError(Exception):
    """Base class for all `liesym` errors."""




# [ algebra ]

class SingularBasisChange(LieSymError, ValueError):
    pass


class NotALieAlgebra(LieSymError, ValueError):
    pass


class DegenerateMetric(LieSymError, ValueError):
    pass


class InputError(LieSymError, ValueError):
    """Malformed algebra record or command-line input."""




# [ frames & curvature ]

class NotOrthonormal(LieSymError, ValueError):
    pass


class FrameError(LieSymError, ArithmeticError):
    """A computed Milnor frame does not reach its canonical bracket form."""


class DivisionByZero(LieSymError, ZeroDivisionError):
    pass




# [ classification ]

class NotASolution(LieSymError, ValueError):
    pass


class ParamOutOfRange(LieSymError, ValueError):
    pass




# [ geodesics ]

class InvalidStep(LieSymError, ValueError):
    pass


class DomainExceeded(LieSymError, ValueError):
    pass
