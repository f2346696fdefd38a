"""Three-dimensional metric Lie algebras.

A `StructureTensor` holds the constants c[i][j][k] (the coefficient of e_k
in [e_i, e_j]) only for i < j; the full antisymmetric tensor is derived on
construction, so antisymmetry holds exactly. Indices are 0-based in code and
1-based in JSON records.
"""
import dataclasses
import logging
import numpy as np
from . import _shared
from .errors import DegenerateMetric, InputError, NotALieAlgebra, SingularBasisChange
from .typing import (
    Any,
    Iterable,
    Mapping,
    Matrix3,
    MatrixLike,
    Self,
    Tensor3,
    Vector3,
    VectorLike,
)


logger = logging.getLogger(__name__)


PAIRS: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (1, 2))




# [ Structure constants ]

@_shared.record
class StructureTensor:
    """Structure constants of a 3-dimensional (candidate) Lie algebra.

    Args:
        * upper: 3x3 array; row p holds the components of [e_i, e_j] for
        `(i, j) = PAIRS[p]`.

    The Jacobi identity is *not* enforced here (see `jacobi_residual`), so
    that broken constant sets can still be represented and measured.
    """
    upper: np.ndarray
    full : np.ndarray = dataclasses.field(init=False, repr=False, compare=False)

    def __post_init__(self):
        upper = _shared.readonly(self.upper, (3, 3))
        if not np.all(np.isfinite(upper)):
            raise InputError("structure constants must be finite")
        full = np.zeros((3, 3, 3))
        for p, (i, j) in enumerate(PAIRS):
            full[i, j] = upper[p]
            full[j, i] = -upper[p]
        full.flags.writeable = False
        _shared.setattr_frozen(self, 'upper', upper)
        _shared.setattr_frozen(self, 'full', full)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, StructureTensor):
            return NotImplemented
        return bool(np.array_equal(self.upper, other.upper))

    @property
    def c(self) -> Tensor3:
        return self.full

    @classmethod
    def zeros(cls) -> Self:
        return cls(np.zeros((3, 3)))

    @classmethod
    def from_tensor(cls, c: Any) -> Self:
        """Build from a full (3, 3, 3) array. Only the i < j entries are read."""
        c = np.asarray(c, dtype=np.float64)
        if c.shape != (3, 3, 3):
            raise InputError(f"expected a (3, 3, 3) array, got shape {c.shape}")
        return cls(np.array([c[i, j] for i, j in PAIRS]))

    @classmethod
    def from_brackets(cls, brackets: Mapping[tuple[int, int], VectorLike]) -> Self:
        """Build from `{(i, j): [e_i, e_j]}` with 0-based indices.

        Pairs with i > j are stored as the antisymmetric counterpart.
        """
        upper = np.zeros((3, 3))
        seen  = {}
        for (i, j), value in brackets.items():
            if i == j:
                raise InputError(f"[e_{i + 1}, e_{j + 1}] is identically zero and cannot be assigned")
            sign = 1.0
            if i > j:
                i, j, sign = j, i, -1.0
            value = sign * np.asarray(value, dtype=np.float64)
            if value.shape != (3,):
                raise InputError(f"bracket value for ({i}, {j}) must have 3 components")
            if (i, j) in seen and not np.array_equal(seen[i, j], value):
                raise InputError(f"conflicting values for [e_{i + 1}, e_{j + 1}]")
            seen[i, j] = value
            upper[PAIRS.index((i, j))] = value
        return cls(upper)

    @classmethod
    def from_records(cls, rows: Iterable[Iterable[Any]]) -> Self:
        """Build from JSON rows `[i, j, k, value]` with 1-based indices."""
        entries: dict[tuple[int, int], np.ndarray] = {}
        filled : dict[tuple[int, int, int], float] = {}
        for row in rows:
            try:
                i, j, k, value = row
                i, j, k, value = int(i) - 1, int(j) - 1, int(k) - 1, float(value)
            except (TypeError, ValueError):
                raise InputError(f"constant rows must be [i, j, k, value], got {row!r}") from None
            if not all(0 <= n < 3 for n in (i, j, k)):
                raise InputError(f"indices must be in 1..3, got {row!r}")
            if i == j:
                raise InputError(f"c[{i + 1}][{j + 1}][{k + 1}] must be zero (i = j)")
            if i > j:
                i, j, value = j, i, -value
            if (i, j, k) in filled and filled[i, j, k] != value:
                raise InputError(f"conflicting values for c[{i + 1}][{j + 1}][{k + 1}]")
            filled[i, j, k] = value
            entries.setdefault((i, j), np.zeros(3))[k] = value
        return cls.from_brackets(entries)

    def to_records(self) -> list[list[Any]]:
        """Non-zero constants as 1-based `[i, j, k, value]` rows (i < j)."""
        return [
            [i + 1, j + 1, k + 1, float(self.upper[p, k])]
            for p, (i, j) in enumerate(PAIRS)
            for k in range(3)
            if self.upper[p, k] != 0.0
        ]

    def scale(self) -> float:
        """Largest constant magnitude (at least 1)."""
        return max(1.0, _shared.max_abs(self.upper))




def bracket(st: StructureTensor, u: VectorLike, v: VectorLike) -> Vector3:
    """[u, v] = Σ u_i v_j c[i][j][k] e_k."""
    return np.einsum('i,j,ijk->k', np.asarray(u, dtype=np.float64), np.asarray(v, dtype=np.float64), st.full)


def ad(st: StructureTensor, x: VectorLike) -> Matrix3:
    """Matrix of ad_x; column j is [x, e_j]."""
    return np.einsum('i,ijk->kj', np.asarray(x, dtype=np.float64), st.full)


def jacobi_tensor(st: StructureTensor) -> np.ndarray:
    c = st.full
    return (
        np.einsum('ijl,lkm->ijkm', c, c)
        + np.einsum('jkl,lim->ijkm', c, c)
        + np.einsum('kil,ljm->ijkm', c, c)
    )


def jacobi_residual(st: StructureTensor) -> float:
    """Max-norm of the Jacobi sum over all (i, j, k, m); 0 for Lie algebras."""
    return _shared.max_abs(jacobi_tensor(st))


def ad_traces(st: StructureTensor) -> Vector3:
    """traces[i] = tr ad_{e_i} = Σ_k c[i][k][k]."""
    return np.einsum('ikk->i', st.full)


def unimodularity(st: StructureTensor, tol: float = _shared.TOL_ALG) -> tuple[bool, Vector3]:
    traces = ad_traces(st)
    return _shared.max_abs(traces) <= tol * st.scale(), traces


def require_lie_algebra(st: StructureTensor, tol: float = _shared.TOL_ALG):
    """Raise `NotALieAlgebra` unless the Jacobi identity holds.

    The bound is relative to the square of the largest constant, since the
    Jacobi sum is quadratic in the constants.
    """
    residual = jacobi_residual(st)
    if residual > tol * st.scale() ** 2:
        raise NotALieAlgebra(f"Jacobi identity fails (residual {residual:.3e} > {tol:.1e})")




# [ Metrics ]

@_shared.record
class MetricMatrix:
    """Symmetric positive-definite Gram matrix g[i][j] = <X_i, X_j>."""
    g: np.ndarray

    def __post_init__(self):
        g = _shared.readonly(self.g, (3, 3))
        if not np.array_equal(g, g.T):
            raise DegenerateMetric("metric matrix must be symmetric")
        minors = [np.linalg.det(g[:n, :n]) for n in (1, 2, 3)]
        if not all(m > _shared.TOL_PD for m in minors):
            raise DegenerateMetric(
                f"metric matrix is not positive definite (leading minors {', '.join(f'{m:.3g}' for m in minors)})"
            )
        _shared.setattr_frozen(self, 'g', g)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, MetricMatrix):
            return NotImplemented
        return bool(np.array_equal(self.g, other.g))

    @classmethod
    def identity(cls) -> Self:
        return cls(np.eye(3))

    @classmethod
    def symmetrized(cls, g: MatrixLike) -> Self:
        """Build from a matrix that is symmetric up to round-off."""
        g = np.asarray(g, dtype=np.float64)
        return cls(0.5 * (g + g.T))




@_shared.record
class BasisChange:
    """Columns of `p` are the new basis vectors in old coordinates."""
    p: np.ndarray

    def __post_init__(self):
        p = _shared.readonly(self.p, (3, 3))
        det = np.linalg.det(p)
        if not abs(det) > _shared.TOL_PD:
            raise SingularBasisChange(f"basis change is singular (det {det:.3e})")
        _shared.setattr_frozen(self, 'p', p)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, BasisChange):
            return NotImplemented
        return bool(np.array_equal(self.p, other.p))

    @classmethod
    def identity(cls) -> Self:
        return cls(np.eye(3))

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.p))

    def inverse(self) -> 'BasisChange':
        return BasisChange(np.linalg.inv(self.p))

    def then(self, other: 'BasisChange') -> 'BasisChange':
        """Apply *self* first, then *other* (expressed in the new basis)."""
        return BasisChange(self.p @ other.p)




@_shared.record
class MetricLieAlgebra:
    """The pair (structure constants, inner product) in one basis."""
    st    : StructureTensor
    metric: MetricMatrix

    @classmethod
    def orthonormal(cls, st: StructureTensor) -> Self:
        """*st* read in an orthonormal basis."""
        return cls(st, MetricMatrix.identity())

    @property
    def g(self) -> Matrix3:
        return self.metric.g

    def is_orthonormal(self, tol: float = _shared.TOL_FRAME) -> bool:
        return _shared.max_abs(self.g - np.eye(3)) <= tol

    def orthonormalizer(self) -> BasisChange:
        """Basis change P with Pᵀ g P = I and det P > 0 (inverse transpose of
        the Cholesky factor)."""
        lower = np.linalg.cholesky(self.g)
        return BasisChange(np.linalg.inv(lower.T))

    def orthonormalize(self) -> tuple['MetricLieAlgebra', BasisChange]:
        p = self.orthonormalizer()
        return change_basis(self, p, exact_metric=True), p




def _as_basis_change(p: BasisChange | MatrixLike) -> BasisChange:
    return p if isinstance(p, BasisChange) else BasisChange(np.asarray(p, dtype=np.float64))


def transform_constants(st: StructureTensor, p: BasisChange | MatrixLike) -> StructureTensor:
    """Constants c' with [Pe_i, Pe_j] = Σ_k c'[i][j][k] Pe_k."""
    p    = _as_basis_change(p).p
    pinv = np.linalg.inv(p)
    return StructureTensor.from_tensor(np.einsum('ai,bj,abm,km->ijk', p, p, st.full, pinv))


def change_basis(
    mla: MetricLieAlgebra,
    p: BasisChange | MatrixLike,
    *,
    exact_metric: bool = False,
) -> MetricLieAlgebra:
    """Express *mla* in the basis given by the columns of *p*.

    Args:
        * mla: The metric Lie algebra.

        * p: Basis change (or a 3x3 array); g' = Pᵀ g P.

        * exact_metric: Snap g' to the identity when it is orthonormal within
        round-off. Used for frames that are orthonormal by construction.
    """
    p = _as_basis_change(p)
    g = p.p.T @ mla.g @ p.p
    if exact_metric:
        deviation = _shared.max_abs(g - np.eye(3))
        if deviation > _shared.TOL_FRAME:
            logger.warning("frame is not orthonormal (deviation %.3e); keeping computed metric", deviation)
        else:
            g = np.eye(3)
    return MetricLieAlgebra(transform_constants(mla.st, p), MetricMatrix.symmetrized(g))
