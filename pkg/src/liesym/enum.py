from enum import *  # type: ignore
import enum
from .typing import Any




class EnumType(enum.EnumMeta):
    """`enum.EnumMeta` whose membership test also accepts member values
    (Python 3.12 behavior) and can be customized per class through
    `__class_contains__`."""
    def __contains__(self, value: Any) -> bool:
        return self.__class_contains__(self, value)

    @staticmethod
    def __class_contains__(inst, value: Any, /):  # pyright: ignore[reportSelfClsParameterName]
        try:
            if value in inst._value2member_map_ or isinstance(value, inst):
                return True
        except TypeError:  # unhashable
            pass
        return False

EnumMeta = EnumType




class StrEnum(str, enum.Enum, metaclass=EnumType):
    """Emulates `enum.StrEnum` behavior in Python 3.11+."""
    def __str__(self):
        return self._value_




class CaseInsensitiveStrEnum(StrEnum):
    """A `StrEnum` whose lookups and membership tests ignore case.

    Member values keep their spelling (they are what reports print); only
    the comparison against user input is casefolded, e.g.
    `HaLeeGroup('su2') is HaLeeGroup.SU2`.
    """
    def __class_contains__(cls: EnumType, value: Any) -> bool:  # type: ignore
        if isinstance(value, str) and not isinstance(value, cls):
            return cls._missing_(value) is not None  # type: ignore
        return EnumType.__class_contains__(cls, value)

    @classmethod
    def _missing_(cls, value: Any):
        if not isinstance(value, str):
            return None
        value = value.casefold()
        for member in cls:
            if member._value_.casefold() == value:
                return member
        return None




# [ Groups & algebras ]

class HaLeeGroup(CaseInsensitiveStrEnum):
    """Simply connected 3-dimensional groups with a normal-form metric."""
    R3       = "R3"
    E0TILDE2 = "E0tilde2"
    SU2      = "SU2"
    GI       = "GI"
    G0       = "G0"
    GD       = "GD"


class G0Form(CaseInsensitiveStrEnum):
    A1 = "A1"  # diag(1, μ, ν)
    A2 = "A2"  # [[1, ½, 0], [½, 1, 0], [0, 0, ν]]


class FrameKind(CaseInsensitiveStrEnum):
    UNIMODULAR     = "Unimodular"
    NON_UNIMODULAR = "NonUnimodular"


class AlgebraFamily(CaseInsensitiveStrEnum):
    ABELIAN          = "Abelian"
    E0TILDE2         = "E0tilde2"
    SU2              = "SU2"
    OTHER_UNIMODULAR = "OtherUnimodular"
    GI               = "GI"
    GD               = "GD"
    DEGENERATE       = "Degenerate"


class UnimodularKind(CaseInsensitiveStrEnum):
    """Milnor's sign patterns of (a, b, c) after normalization."""
    ABELIAN    = "abelian"     # (0, 0, 0)
    HEISENBERG = "heisenberg"  # (+, 0, 0)
    E2         = "e(2)"        # (+, +, 0)
    E11        = "e(1,1)"      # (+, -, 0)
    SU2        = "su(2)"       # (+, +, +)
    SL2        = "sl(2)"       # (+, +, -)


class FamilyTag(CaseInsensitiveStrEnum):
    """Solution families of the local-symmetry residual systems."""
    FLAT      = "Flat"       # (0,b,b), (a,a,0), (a,0,a)
    ROUND_SU2 = "RoundSU2"   # (a,a,a)
    GI        = "GIfamily"   # (a,0,0,a)
    GD        = "GDfamily"   # (a,b,-b,a)
    G0        = "G0family"   # (a,0,0,0)




# [ Reports ]

class OutputFormat(CaseInsensitiveStrEnum):
    JSON = "json"
    CSV  = "csv"


class CheckStatus(StrEnum):
    PASS = "pass"
    FAIL = "fail"


class CheckGroup(CaseInsensitiveStrEnum):
    ALGEBRA        = "algebra"
    MILNOR         = "milnor"
    CURVATURE      = "curvature"
    CLASSIFICATION = "classification"
    GEODESICS      = "geodesics"
