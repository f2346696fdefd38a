from typing_extensions import *
from typing import *
import pathlib
import numpy as np




# [ General TypeVars ]

T = TypeVar("T")
T_contra = TypeVar("T_contra", contravariant=True)







# [ Structural Types ]

class SupportsWrite(Protocol[T_contra]):
    __slots__ = ()
    def write(self, obj: T_contra, /) -> Any: ...







# [ Aliases ]

StrPath = str | pathlib.Path

# NOTE: shapes are documentation only; numpy does not check them.
Vector3 = TypeAliasType('Vector3', np.ndarray[tuple[int], np.dtype[np.float64]])
Matrix3 = TypeAliasType('Matrix3', np.ndarray[tuple[int, int], np.dtype[np.float64]])
Tensor3 = TypeAliasType('Tensor3', np.ndarray[tuple[int, int, int], np.dtype[np.float64]])
Tensor4 = TypeAliasType('Tensor4', np.ndarray[tuple[int, int, int, int], np.dtype[np.float64]])
Tensor5 = TypeAliasType('Tensor5', np.ndarray[tuple[int, int, int, int, int], np.dtype[np.float64]])
VectorLike = TypeAliasType('VectorLike', Sequence[float] | np.ndarray)
MatrixLike = TypeAliasType('MatrixLike', Sequence[Sequence[float]] | np.ndarray)
