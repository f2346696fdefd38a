import os
import dataclasses
import logging
from . import _shared
from .enum import OutputFormat
from .errors import InputError
from .typing import Any, Mapping, StrPath


logger = logging.getLogger(__name__)


DEFAULT_SEED = 42
SEED_ENV_VAR = "LIESYM_SEED"




@_shared.record
class Tolerances:
    """Numerical tolerances shared by the library.

    Args:
        * alg: Jacobi residual and ad-trace bound.

        * pd: Bound on leading principal minors and on |det P|.

        * frame: Orthonormality and canonical-form bound of Milnor frames.

        * geo: Connection and curvature identities.

        * symmetric: Largest ∇R max-norm still called locally symmetric.

        * consistency: Agreement of symmetry images over different lifts.
    """
    alg        : float = _shared.TOL_ALG
    pd         : float = _shared.TOL_PD
    frame      : float = _shared.TOL_FRAME
    geo        : float = _shared.TOL_GEO
    symmetric  : float = _shared.TOL_SYMMETRIC
    consistency: float = _shared.TOL_CONSIST

    def __post_init__(self):
        for field in dataclasses.fields(self):
            name, value = field.name, getattr(self, field.name)
            if not value > 0:
                raise ValueError(f"tolerance {name!r} must be positive, got {value!r}")
            if value < 1e-15:
                logger.warning("tolerance %s=%g is below double-precision round-off", name, value)

    def with_overrides(self, **kwargs: float) -> 'Tolerances':
        fields = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        unknown = set(kwargs) - set(fields)
        if unknown:
            raise TypeError(f"unknown tolerance(s): {', '.join(sorted(unknown))}")
        fields.update(kwargs)
        return type(self)(**fields)


DEFAULT_TOLERANCES = Tolerances()




def resolve_seed(seed: int | None = None, environ: Mapping[str, str] | None = None) -> int:
    """Return *seed*, else the `LIESYM_SEED` environment variable, else 42."""
    if seed is not None:
        return int(seed)
    environ = os.environ if environ is None else environ
    raw = environ.get(SEED_ENV_VAR)
    if raw is None or not raw.strip():
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None




@_shared.record
class RunConfig:
    """A parsed command-line invocation."""
    command      : str
    params       : Mapping[str, Any]
    json_path    : StrPath | None = None
    tolerance    : float | None = None
    seed         : int = DEFAULT_SEED
    only         : tuple[str, ...] = ()
    output_path  : StrPath | None = None
    output_format: OutputFormat = OutputFormat.JSON

    def __post_init__(self):
        if self.tolerance is not None and not self.tolerance > 0:
            raise InputError(f"tolerance must be positive, got {self.tolerance!r}")
