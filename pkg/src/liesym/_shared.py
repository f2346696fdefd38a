import dataclasses
import numpy as np
from .typing import Any, Callable, TypeVar, dataclass_transform, overload


T = TypeVar('T')



# [ Tolerances ]

TOL_ALG       = 1e-12  # Jacobi residual, unimodularity traces
TOL_PD        = 1e-12  # leading principal minors, |det P|
TOL_FRAME     = 1e-10  # Milnor frame orthonormality & canonical brackets
TOL_GEO       = 1e-12  # connection & curvature identities
TOL_SYMMETRIC = 1e-9   # ∇R residual for local symmetry
TOL_CONSIST   = 1e-9   # agreement of symmetry images over lifts




# [ Records ]

@overload
def record(cls: type[T], /) -> type[T]: ...
@overload
def record(*, eq: bool = True, repr: bool = True) -> Callable[[type[T]], type[T]]: ...
@dataclass_transform(frozen_default=True)
def record(cls: Any = None, /, *, eq: bool = True, repr: bool = True) -> Any:
    """Frozen, slotted dataclass.

    Every value type in this package is immutable after construction, so
    instances can be shared between threads freely.
    """
    def wrap(cls):
        return dataclasses.dataclass(cls, frozen=True, slots=True, eq=eq, repr=repr)

    if cls is None:
        return wrap
    return wrap(cls)


def setattr_frozen(inst: Any, name: str, value: Any):
    """Assign to a field of a frozen record (`__post_init__` normalization only)."""
    object.__setattr__(inst, name, value)




# [ Arrays ]

def readonly(arr: Any, shape: tuple[int, ...] | None = None) -> np.ndarray:
    """Return a float64 copy of *arr* with the write flag cleared.

    Args:
        * arr: Any array-like.

        * shape: When given, the required shape of the result.
    """
    out = np.array(arr, dtype=np.float64, copy=True)
    if shape is not None and out.shape != shape:
        raise ValueError(f"expected an array of shape {shape}, got {out.shape}")
    out.flags.writeable = False
    return out


def max_abs(arr: Any) -> float:
    arr = np.asarray(arr, dtype=np.float64)
    if not arr.size:
        return 0.0
    return float(np.max(np.abs(arr)))
