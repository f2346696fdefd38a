"""Milnor frames.

A Milnor frame is an orthonormal basis in which the brackets take one of
two canonical shapes:

- unimodular: `[e1,e2] = a e3`, `[e2,e3] = c e1`, `[e3,e1] = b e2`;
- non-unimodular: `[e1,e2] = a e2 + b e3`, `[e1,e3] = c e2 + d e3`,
  `[e2,e3] = 0`, with `a + d > 0`, `ac + bd = 0`, `a >= d` and `b >= c`.

Unimodular frames are sign-adjusted so that at most one constant is
negative; the constants are then sorted so that a >= b >= c.
"""
import dataclasses
import logging
import math
import numpy as np
from . import _shared
from .algebra import (
    BasisChange,
    MetricLieAlgebra,
    StructureTensor,
    ad,
    change_basis,
    require_lie_algebra,
    unimodularity,
)
from .config import DEFAULT_TOLERANCES, Tolerances
from .enum import AlgebraFamily, FrameKind, UnimodularKind
from .errors import DivisionByZero, FrameError, InputError
from .typing import Any, Sequence


logger = logging.getLogger(__name__)




@_shared.record
class MilnorFrame:
    """An orthonormal Milnor basis of a metric Lie algebra.

    Args:
        * P: Basis change from the input basis to the frame.

        * kind: Which canonical bracket shape the frame reaches.

        * constants: `(a, b, c)` or `(a, b, c, d)`.

        * algebra: The input algebra expressed in the frame (g = I).
    """
    P        : BasisChange
    kind     : FrameKind
    constants: tuple[float, ...]
    algebra  : MetricLieAlgebra = dataclasses.field(repr=False, compare=False)

    @property
    def st(self) -> StructureTensor:
        return self.algebra.st




def milnor_algebra(constants: Sequence[float]) -> StructureTensor:
    """Canonical structure constants for `(a, b, c)` or `(a, b, c, d)`."""
    values = tuple(float(v) for v in constants)
    if len(values) == 3:
        a, b, c = values
        return StructureTensor.from_brackets({
            (0, 1): (0.0, 0.0, a),
            (1, 2): (c, 0.0, 0.0),
            (2, 0): (0.0, b, 0.0),
        })
    if len(values) == 4:
        a, b, c, d = values
        return StructureTensor.from_brackets({
            (0, 1): (0.0, a, b),
            (0, 2): (0.0, c, d),
        })
    raise InputError(f"Milnor constants have 3 or 4 entries, got {len(values)}")


def read_constants(st: StructureTensor, kind: FrameKind) -> tuple[float, ...]:
    c = st.full
    if kind is FrameKind.UNIMODULAR:
        return float(c[0, 1, 2]), float(c[2, 0, 1]), float(c[1, 2, 0])
    return float(c[0, 1, 1]), float(c[0, 1, 2]), float(c[0, 2, 1]), float(c[0, 2, 2])




# [ Frame construction ]

def _sign_fixed(v: np.ndarray) -> np.ndarray:
    """*v* with its largest-magnitude component made positive."""
    return v if v[np.argmax(np.abs(v))] >= 0 else -v


def _sym2_eigenbasis(s: np.ndarray) -> np.ndarray:
    """Rotation whose columns are an orthonormal eigenbasis of the symmetric
    2x2 matrix *s*."""
    p, q, r = s[0, 0], 0.5 * (s[0, 1] + s[1, 0]), s[1, 1]
    theta = 0.5 * math.atan2(2.0 * q, p - r)
    cos, sin = math.cos(theta), math.sin(theta)
    return np.array([[cos, -sin], [sin, cos]])


def _unimodular_basis(st: StructureTensor, tol: Tolerances) -> np.ndarray:
    c = st.full
    # [u, v] = L(u x v) for the orthonormal cross product
    L = np.column_stack([c[1, 2], c[2, 0], c[0, 1]])
    L = 0.5 * (L + L.T)
    values, vectors = np.linalg.eigh(L)

    zero  = tol.frame * max(1.0, _shared.max_abs(values))
    sigma = -1.0 if np.sum(values > zero) < np.sum(values < -zero) else 1.0
    values  = sigma * values
    vectors = np.column_stack([_sign_fixed(vectors[:, i]) for i in range(3)])

    snapped = np.round(values / zero)
    order   = sorted(range(3), key=lambda i: (-snapped[i], tuple(-vectors[:, i])))
    a, b, c_ = order
    frame = np.column_stack([vectors[:, c_], vectors[:, b], vectors[:, a]])
    if np.sign(np.linalg.det(frame)) != sigma:
        frame[:, 0] = -frame[:, 0]
    logger.debug("unimodular eigenvalues %s (sign %+d)", values[order], int(sigma))
    return frame


def _nonunimodular_basis(st: StructureTensor, traces: np.ndarray) -> np.ndarray:
    e1 = traces / np.linalg.norm(traces)
    q, _ = np.linalg.qr(np.column_stack([e1, np.eye(3)]))
    w = q[:, 1:3]

    # ad_{e1} on the unimodular kernel, column j = [e1, w_j]
    m = w.T @ ad(st, e1) @ w
    r = _sym2_eigenbasis(m.T @ m)
    w = w @ r
    m = r.T @ m @ r

    a, b, c, d = m[0, 0], m[1, 0], m[0, 1], m[1, 1]
    if a < d:
        w = w[:, ::-1]
        a, b, c, d = d, c, b, a
    if b < c:
        w[:, 1] = -w[:, 1]
    return np.column_stack([e1, w])


def milnor_frame(mla: MetricLieAlgebra, tol: Tolerances = DEFAULT_TOLERANCES) -> MilnorFrame:
    """Construct a Milnor frame of *mla*.

    Raises:
        * NotALieAlgebra: The Jacobi identity fails.

        * FrameError: The constructed frame misses the canonical form (only
        on numerically pathological input).
    """
    require_lie_algebra(mla.st, tol.alg)
    ortho, q = mla.orthonormalize()
    unimodular, traces = unimodularity(ortho.st, tol.alg)
    if unimodular:
        kind  = FrameKind.UNIMODULAR
        frame = _unimodular_basis(ortho.st, tol)
    else:
        kind  = FrameKind.NON_UNIMODULAR
        frame = _nonunimodular_basis(ortho.st, traces)

    p = BasisChange(q.p @ frame)
    deviation = _shared.max_abs(p.p.T @ mla.g @ p.p - np.eye(3))
    if deviation > tol.frame:
        raise FrameError(f"Milnor frame is not orthonormal (deviation {deviation:.3e})")
    framed    = change_basis(mla, p, exact_metric=True)
    constants = read_constants(framed.st, kind)
    _validate(framed.st, kind, constants, tol)
    logger.debug("%s Milnor constants %s", kind, constants)
    return MilnorFrame(p, kind, constants, framed)


def _validate(st: StructureTensor, kind: FrameKind, constants: tuple[float, ...], tol: Tolerances):
    bound = tol.frame * st.scale()
    off   = _shared.max_abs(st.full - milnor_algebra(constants).full)
    if off > bound:
        raise FrameError(f"{kind} frame misses the canonical bracket form by {off:.3e}")
    if kind is FrameKind.NON_UNIMODULAR:
        a, b, c, d = constants
        if not a + d > 0:
            raise FrameError(f"non-unimodular frame has a + d = {a + d:.3e} <= 0")
        if abs(a * c + b * d) > bound * st.scale():
            raise FrameError(f"non-unimodular frame has ac + bd = {a * c + b * d:.3e}")
        if a < d - bound or b < c - bound:
            raise FrameError(f"non-unimodular constants {constants} are not normalized")




# [ Invariants ]

def milnor_D(a: float, b: float, c: float, d: float, tol: float = _shared.TOL_ALG) -> float:
    """The isomorphism invariant D = 4(ad - bc) / (a + d)²."""
    if abs(a + d) <= tol:
        raise DivisionByZero(f"D is undefined for a + d = {a + d!r}")
    return 4.0 * (a * d - b * c) / (a + d) ** 2


def milnor_signature(constants: Sequence[float], tol: float = _shared.TOL_FRAME) -> UnimodularKind:
    """Sign pattern of unimodular constants, up to an overall sign and order."""
    values = np.asarray(constants, dtype=np.float64)
    if values.shape != (3,):
        raise InputError(f"unimodular constants have 3 entries, got {values.shape}")
    zero = tol * max(1.0, _shared.max_abs(values))
    pos, neg = int(np.sum(values > zero)), int(np.sum(values < -zero))
    if neg > pos:
        pos, neg = neg, pos
    return _SIGNATURES[pos, neg]


_SIGNATURES = {
    (0, 0): UnimodularKind.ABELIAN,
    (1, 0): UnimodularKind.HEISENBERG,
    (2, 0): UnimodularKind.E2,
    (1, 1): UnimodularKind.E11,
    (3, 0): UnimodularKind.SU2,
    (2, 1): UnimodularKind.SL2,
}

_UNIMODULAR_FAMILIES = {
    UnimodularKind.ABELIAN: AlgebraFamily.ABELIAN,
    UnimodularKind.E2     : AlgebraFamily.E0TILDE2,
    UnimodularKind.SU2    : AlgebraFamily.SU2,
}




@_shared.record
class Identification:
    """Isomorphism class of a framed algebra.

    `D` is set for the GD family, `unimodular_kind` for unimodular frames.
    """
    family         : AlgebraFamily
    D              : float | None = None
    unimodular_kind: UnimodularKind | None = None

    def __str__(self):
        if self.family is AlgebraFamily.GD:
            return f"{self.family}({self.D:g})"
        return str(self.family)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {'family': str(self.family)}
        if self.D is not None:
            out['D'] = self.D
        if self.unimodular_kind is not None:
            out['unimodular_kind'] = str(self.unimodular_kind)
        return out


def identify_family(
    frame: MilnorFrame | Sequence[float],
    tol  : float = _shared.TOL_FRAME,
) -> Identification:
    """Classify a Milnor frame (or bare Milnor constants) up to isomorphism."""
    constants = frame.constants if isinstance(frame, MilnorFrame) else tuple(map(float, frame))
    if len(constants) == 3:
        kind = milnor_signature(constants, tol)
        return Identification(_UNIMODULAR_FAMILIES.get(kind, AlgebraFamily.OTHER_UNIMODULAR), unimodular_kind=kind)
    if len(constants) != 4:
        raise InputError(f"Milnor constants have 3 or 4 entries, got {len(constants)}")

    a, b, c, d = constants
    zero = tol * max(1.0, _shared.max_abs(constants))
    try:
        D = milnor_D(a, b, c, d, zero)
    except DivisionByZero:
        logger.debug("constants %s have a + d = 0", constants)
        return Identification(AlgebraFamily.DEGENERATE)
    # ad_{e1} acts as a multiple of the identity on the kernel
    if abs(a - d) <= zero and abs(b) <= zero and abs(c) <= zero:
        return Identification(AlgebraFamily.GI, D=D)
    return Identification(AlgebraFamily.GD, D=D)
