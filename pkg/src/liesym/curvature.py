"""Levi-Civita connection, curvature and ∇R of left-invariant metrics.

All tensors are components in an orthonormal frame of left-invariant
fields, so they are constant and ∇R is an algebraic expression in the
connection and the curvature.

The curvature operator follows the convention

    R(x, y) = ∇_{[x,y]} - ∇_x ∇_y + ∇_y ∇_x

which is the *negative* of the more common one: the round su(2) frame
(a = b = c = 1) has ⟨R(e1,e2)e2, e1⟩ = -1/4 and hyperbolic frames have
positive values. Symmetries, the Bianchi identity and the vanishing of ∇R
do not depend on the choice.
"""
import logging
import numpy as np
from . import _shared
from .algebra import MetricLieAlgebra, StructureTensor
from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import NotOrthonormal
from .milnor import MilnorFrame, milnor_frame
from .typing import Tensor3, Tensor4, Tensor5


logger = logging.getLogger(__name__)




# [ Tensors ]

@_shared.record(eq=False)
class ConnectionCoefficients:
    """gamma[i][j][k]: coefficient of e_k in ∇_{e_i} e_j."""
    gamma: Tensor3

    def __post_init__(self):
        _shared.setattr_frozen(self, 'gamma', _shared.readonly(self.gamma, (3, 3, 3)))


@_shared.record(eq=False)
class CurvatureTensor:
    """r[i][j][k][l] = ⟨R(e_i, e_j) e_k, e_l⟩."""
    r: Tensor4

    def __post_init__(self):
        _shared.setattr_frozen(self, 'r', _shared.readonly(self.r, (3, 3, 3, 3)))


@_shared.record(eq=False)
class NablaR:
    """dr[m][i][j][k][l] = ⟨(∇_{e_m} R)(e_i, e_j) e_k, e_l⟩."""
    dr: Tensor5

    def __post_init__(self):
        _shared.setattr_frozen(self, 'dr', _shared.readonly(self.dr, (3, 3, 3, 3, 3)))

    def residual(self) -> float:
        return _shared.max_abs(self.dr)




# [ Koszul pipeline ]

def connection(mla: MetricLieAlgebra | StructureTensor, tol: float = _shared.TOL_FRAME) -> ConnectionCoefficients:
    """Koszul formula in an orthonormal frame.

    A bare `StructureTensor` is read as orthonormal.

    Raises:
        * NotOrthonormal: The metric of *mla* is not the identity within *tol*.
    """
    if isinstance(mla, MetricLieAlgebra):
        if not mla.is_orthonormal(tol):
            raise NotOrthonormal("the connection formula needs an orthonormal frame; frame the algebra first")
        mla = mla.st
    c = mla.full
    # 2<∇_i e_j, e_k> = c_ijk - c_jki + c_kij
    return ConnectionCoefficients(0.5 * (c - np.einsum('jki->ijk', c) + np.einsum('kij->ijk', c)))


def curvature(conn: ConnectionCoefficients, st: StructureTensor) -> CurvatureTensor:
    g, c = conn.gamma, st.full
    return CurvatureTensor(
        np.einsum('ijp,pkl->ijkl', c, g)
        - np.einsum('jkp,ipl->ijkl', g, g)
        + np.einsum('ikp,jpl->ijkl', g, g)
    )


def nabla_R(conn: ConnectionCoefficients, curv: CurvatureTensor) -> NablaR:
    """(∇_w R)(x, y)z = ∇_w(R(x, y)z) - R(∇_w x, y)z - R(x, ∇_w y)z - R(x, y)∇_w z."""
    g, r = conn.gamma, curv.r
    return NablaR(
        np.einsum('ijkl,mlq->mijkq', r, g)
        - np.einsum('mip,pjkq->mijkq', g, r)
        - np.einsum('mjp,ipkq->mijkq', g, r)
        - np.einsum('mkp,ijpq->mijkq', g, r)
    )


def frame_tensors(frame: MilnorFrame) -> tuple[ConnectionCoefficients, CurvatureTensor, NablaR]:
    conn = connection(frame.st)
    curv = curvature(conn, frame.st)
    return conn, curv, nabla_R(conn, curv)


def is_locally_symmetric(
    mla: MetricLieAlgebra,
    tol: float = _shared.TOL_SYMMETRIC,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> tuple[bool, float]:
    """Decide ∇R = 0.

    Returns:
        `(symmetric, residual)`, where *residual* is the max-norm of ∇R in a
        Milnor frame of *mla*.
    """
    frame = milnor_frame(mla, tolerances)
    residual = frame_tensors(frame)[2].residual()
    logger.debug("∇R residual %.3e for %s constants %s", residual, frame.kind, frame.constants)
    return residual <= tol, residual




# [ Closed forms ]

def _from_sectional(k12: float, k13: float, k23: float) -> CurvatureTensor:
    r = np.zeros((3, 3, 3, 3))
    for (i, j), k in (((0, 1), k12), ((0, 2), k13), ((1, 2), k23)):
        r[i, j, j, i] = r[j, i, i, j] = k
        r[i, j, i, j] = r[j, i, j, i] = -k
    return CurvatureTensor(r)


def closed_form_R_unimodular(a: float, b: float, c: float) -> CurvatureTensor:
    """Curvature of the unimodular Milnor frame with constants (a, b, c)."""
    return _from_sectional(
        (2 * a * (a - b - c) + (a - b + c) * (a + b - c)) / 4,
        -(2 * b * (a - b + c) + (a - b - c) * (a + b - c)) / 4,
        -(2 * c * (a + b - c) + (a - b + c) * (a - b - c)) / 4,
    )


def closed_form_R_nonunimodular(a: float, b: float, c: float, d: float) -> CurvatureTensor:
    """Curvature of the non-unimodular Milnor frame with constants (a, b, c, d).

    Only valid on the constraint surface ac + bd = 0.
    """
    if abs(a * c + b * d) > _shared.TOL_FRAME * max(1.0, a * a, b * b, c * c, d * d):
        logger.warning("closed form used off the surface ac + bd = 0 (ac + bd = %.3e)", a * c + b * d)
    return _from_sectional(
        a * a + 0.75 * b * b - 0.25 * c * c + 0.5 * b * c,
        d * d - 0.25 * b * b + 0.75 * c * c + 0.5 * b * c,
        a * d - 0.25 * (b + c) ** 2,
    )


def sectional_curvatures(curv: CurvatureTensor) -> tuple[float, float, float]:
    """⟨R(e_i,e_j)e_j, e_i⟩ for (i, j) = (1,2), (1,3), (2,3).

    With the sign convention of this module these are the negated
    sectional curvatures.
    """
    r = curv.r
    return float(r[0, 1, 1, 0]), float(r[0, 2, 2, 0]), float(r[1, 2, 2, 1])




# [ Structural checks ]

@_shared.record
class ConnectionDefects:
    metric : float  # max |gamma_ijk + gamma_ikj|
    torsion: float  # max |gamma_ijk - gamma_jik - c_ijk|

    def worst(self) -> float:
        return max(self.metric, self.torsion)


@_shared.record
class CurvatureDefects:
    antisymmetry: float
    pair        : float
    bianchi     : float

    def worst(self) -> float:
        return max(self.antisymmetry, self.pair, self.bianchi)


def connection_residuals(conn: ConnectionCoefficients, st: StructureTensor) -> ConnectionDefects:
    g = conn.gamma
    return ConnectionDefects(
        metric =_shared.max_abs(g + np.einsum('ijk->ikj', g)),
        torsion=_shared.max_abs(g - np.einsum('ijk->jik', g) - st.full),
    )


def curvature_residuals(curv: CurvatureTensor) -> CurvatureDefects:
    r = curv.r
    return CurvatureDefects(
        antisymmetry=max(
            _shared.max_abs(r + np.einsum('ijkl->jikl', r)),
            _shared.max_abs(r + np.einsum('ijkl->ijlk', r)),
        ),
        pair   =_shared.max_abs(r - np.einsum('ijkl->klij', r)),
        bianchi=_shared.max_abs(r + np.einsum('ijkl->jkil', r) + np.einsum('ijkl->kijl', r)),
    )
