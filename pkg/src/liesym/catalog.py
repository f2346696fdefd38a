"""Named algebras in their canonical bases (X1, X2, X3) and the Ha–Lee
normal-form metrics on the simply connected groups."""
import math
import numpy as np
from .algebra import MetricLieAlgebra, MetricMatrix, StructureTensor
from .enum import G0Form, HaLeeGroup
from .errors import InputError, LieSymError, ParamOutOfRange
from .typing import Any, Mapping




# [ Algebras ]

def abelian() -> StructureTensor:
    return StructureTensor.zeros()


def e0tilde2() -> StructureTensor:
    """ẽ₀(2): [X1,X2] = 0, [X3,X1] = -X2, [X3,X2] = X1."""
    return StructureTensor.from_brackets({
        (2, 0): (0.0, -1.0, 0.0),
        (2, 1): (1.0, 0.0, 0.0),
    })


def su2() -> StructureTensor:
    """su(2): [X1,X2] = X3, [X3,X1] = X2, [X3,X2] = -X1."""
    return StructureTensor.from_brackets({
        (0, 1): (0.0, 0.0, 1.0),
        (2, 0): (0.0, 1.0, 0.0),
        (2, 1): (-1.0, 0.0, 0.0),
    })


def g_i() -> StructureTensor:
    """𝔤_I: [X1,X2] = 0, [X3,X1] = X1, [X3,X2] = X2."""
    return StructureTensor.from_brackets({
        (2, 0): (1.0, 0.0, 0.0),
        (2, 1): (0.0, 1.0, 0.0),
    })


def g_d(D: float) -> StructureTensor:
    """𝔤_D: [X1,X2] = 0, [X3,X1] = X2, [X3,X2] = -D X1 + 2 X2.

    D is the determinant of ad_{X3} on span(X1, X2); D = 0 gives 𝔤_0.
    """
    return StructureTensor.from_brackets({
        (2, 0): (0.0, 1.0, 0.0),
        (2, 1): (-float(D), 2.0, 0.0),
    })


ALGEBRAS = {
    HaLeeGroup.R3      : lambda D=None: abelian(),
    HaLeeGroup.E0TILDE2: lambda D=None: e0tilde2(),
    HaLeeGroup.SU2     : lambda D=None: su2(),
    HaLeeGroup.GI      : lambda D=None: g_i(),
    HaLeeGroup.G0      : lambda D=None: g_d(0.0),
    HaLeeGroup.GD      : lambda D=None: g_d(_require(D, 'D', HaLeeGroup.GD)),
}


def algebra_for(group: HaLeeGroup | str, D: float | None = None) -> StructureTensor:
    return ALGEBRAS[HaLeeGroup(group)](D)




# [ Ha–Lee normal forms ]

def _require(value: float | None, name: str, group: HaLeeGroup) -> float:
    if value is None:
        raise ParamOutOfRange(f"{group} normal form needs {name}")
    value = float(value)
    if not math.isfinite(value):
        raise ParamOutOfRange(f"{name} must be finite, got {value!r}")
    return value


def halee_matrix(
    group : HaLeeGroup | str,
    *,
    mu    : float | None = None,
    nu    : float | None = None,
    lam   : float | None = None,
    D     : float | None = None,
    form  : G0Form | str = G0Form.A1,
) -> np.ndarray:
    """Normal-form metric matrix, with the parameter ranges checked.

    - R3: identity.
    - E0tilde2: diag(1, μ, ν), 0 < μ ≤ 1, ν > 0.
    - SU2: diag(λ, μ, ν), λ ≥ μ ≥ ν > 0.
    - GI: diag(1, 1, ν), ν > 0.
    - G0: A1 = diag(1, μ, ν), μ, ν > 0; or A2 = [[1, ½, 0], [½, 1, 0], [0, 0, ν]], ν > 0.
    - GD: [[1, 1, 0], [1, μ, 0], [0, 0, ν]], D > 1, 1 < μ ≤ D, ν > 0.
    """
    if group not in HaLeeGroup:
        raise ParamOutOfRange(f"unknown group {group!r}")
    if form not in G0Form:
        raise ParamOutOfRange(f"unknown G0 form {form!r}; expected A1 or A2")
    group = HaLeeGroup(group)
    if group is HaLeeGroup.R3:
        return np.eye(3)

    nu = _require(nu, 'nu', group)
    if not nu > 0:
        raise ParamOutOfRange(f"{group}: nu must be > 0, got {nu}")

    if group is HaLeeGroup.E0TILDE2:
        mu = _require(mu, 'mu', group)
        if not 0 < mu <= 1:
            raise ParamOutOfRange(f"{group}: need 0 < mu <= 1, got {mu}")
        return np.diag([1.0, mu, nu])

    if group is HaLeeGroup.SU2:
        lam, mu = _require(lam, 'lambda', group), _require(mu, 'mu', group)
        if not lam >= mu >= nu:
            raise ParamOutOfRange(f"{group}: need lambda >= mu >= nu > 0, got ({lam}, {mu}, {nu})")
        return np.diag([lam, mu, nu])

    if group is HaLeeGroup.GI:
        return np.diag([1.0, 1.0, nu])

    if group is HaLeeGroup.G0:
        if G0Form(form) is G0Form.A2:
            return np.array([[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, nu]])
        mu = _require(mu, 'mu', group)
        if not mu > 0:
            raise ParamOutOfRange(f"{group}: mu must be > 0, got {mu}")
        return np.diag([1.0, mu, nu])

    D, mu = _require(D, 'D', group), _require(mu, 'mu', group)
    if not D > 1:
        raise ParamOutOfRange(f"{group}: the normal form covers D > 1, got D = {D}")
    if not 1 < mu <= D:
        raise ParamOutOfRange(f"{group}: need 1 < mu <= D, got mu = {mu}, D = {D}")
    return np.array([[1.0, 1.0, 0.0], [1.0, mu, 0.0], [0.0, 0.0, nu]])


def halee_algebra(group: HaLeeGroup | str, **params: Any) -> MetricLieAlgebra:
    """Catalog algebra of *group* with its normal-form metric."""
    group = HaLeeGroup(group)
    g = halee_matrix(group, **params)
    return MetricLieAlgebra(algebra_for(group, params.get('D')), MetricMatrix(g))




# [ JSON records ]

_PARAM_KEYS = {'mu': 'mu', 'nu': 'nu', 'lambda': 'lam', 'lam': 'lam', 'D': 'D', 'form': 'form'}


def load_algebra(record: Mapping[str, Any]) -> MetricLieAlgebra:
    """Parse an algebra record.

    Two shapes are accepted:

    - `{"constants": [[i, j, k, value], ...], "metric": [[...], [...], [...]]}`;
    `metric` defaults to the identity.
    - `{"group": "SU2" | "E0tilde2" | "GI" | "G0" | "GD" | "R3", "D": ...}`; with
    an explicit `metric`, or normal-form parameters (`mu`, `nu`, `lambda`,
    `form`), or neither (identity metric).
    """
    if not isinstance(record, Mapping):
        raise InputError(f"algebra record must be a JSON object, got {type(record).__name__}")

    metric = None
    if 'metric' in record:
        try:
            metric = MetricMatrix(np.asarray(record['metric'], dtype=np.float64))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, LieSymError):
                raise
            raise InputError(f"metric must be a 3x3 numeric matrix: {exc}") from None

    if 'constants' in record:
        if 'group' in record:
            raise InputError("give either 'constants' or 'group', not both")
        st = StructureTensor.from_records(record['constants'])
        return MetricLieAlgebra(st, metric or MetricMatrix.identity())

    if 'group' not in record:
        raise InputError("algebra record needs 'constants' or 'group'")
    if record['group'] not in HaLeeGroup:
        raise InputError(f"unknown group {record['group']!r}; expected one of {', '.join(map(str, HaLeeGroup))}")
    group  = HaLeeGroup(record['group'])
    params = {_PARAM_KEYS[k]: v for k, v in record.items() if k in _PARAM_KEYS}
    if metric is not None:
        return MetricLieAlgebra(algebra_for(group, params.get('D')), metric)
    if set(params) & {'mu', 'nu', 'lam'}:
        return halee_algebra(group, **params)
    return MetricLieAlgebra(algebra_for(group, params.get('D')), MetricMatrix.identity())
