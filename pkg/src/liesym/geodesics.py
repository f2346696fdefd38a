"""Geodesics and geodesic symmetries of the universal cover of E₀(2).

Points of the cover are `([x; y], s)` with the product

    ([x; y], s) · ([x'; y'], s') = ([x; y] + R(s)[x'; y'], s + s')

and R(s) = [[cos s, sin s], [-sin s, cos s]]. The covering map to E₀(2)
reduces s modulo 2π into (-π, π].

The metric is diag(1, 1, ν) on (X1, X2, X3); algebra vectors are read in
the orthonormal frame (X1, X2, X3/√ν). Geodesics follow the Euler–Arnold
equation in the frame together with the reconstruction
`γ' = (R(γ3)(α1, α2), α3)`. The closed forms below (geodesics, exp, log and
the geodesic symmetry) are exact solutions of that system; in complex
notation z = x + iy and with ω = (1 - 1/√ν)v3, a geodesic through the
identity is

    z(t) = (v1 + i v2)(1 - e^{-iωt}) / (iω),    s(t) = v3 t.

NOTE: the reconstruction reads α3 as ds/dt, while the left-invariant field
X3 of the product is ∂s and e3 = X3/√ν, which would give ds/dt = α3/√ν.
The two agree only for ν = 1. Everything in this module follows α3 = ds/dt.
As a result `symmetry_cover` is isometric only on the s axis and to first
order at the identity; `isometry_defect_closed` gives the exact defect.
"""
import logging
import math
import numpy as np
from . import _shared
from .algebra import StructureTensor
from .errors import DomainExceeded, InvalidStep, ParamOutOfRange
from .typing import Callable, Iterable, SupportsWrite, StrPath, Self, Sequence


logger = logging.getLogger(__name__)


TWO_PI = 2.0 * math.pi




# [ Points & vectors ]

@_shared.record
class AlgebraVector:
    v1: float
    v2: float
    v3: float

    def __post_init__(self):
        for name in ('v1', 'v2', 'v3'):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ParamOutOfRange(f"{name} must be finite, got {value!r}")
            _shared.setattr_frozen(self, name, value)

    @classmethod
    def from_array(cls, arr: Sequence[float]) -> Self:
        v1, v2, v3 = (float(x) for x in arr)
        return cls(v1, v2, v3)

    def as_array(self) -> np.ndarray:
        return np.array([self.v1, self.v2, self.v3])

    def norm2(self) -> float:
        return self.v1 ** 2 + self.v2 ** 2 + self.v3 ** 2


@_shared.record
class CoverPoint:
    """A point of the universal cover; the angle `s` is unbounded."""
    x: float
    y: float
    s: float

    @classmethod
    def identity(cls) -> Self:
        return cls(0.0, 0.0, 0.0)

    @classmethod
    def from_array(cls, arr: Sequence[float]) -> Self:
        x, y, s = (float(v) for v in arr)
        return cls(x, y, s)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.s])

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


@_shared.record
class GroupPoint:
    """A point of E₀(2): translation plus the angle of R(s), s ∈ (-π, π]."""
    x: float
    y: float
    s: float

    def __post_init__(self):
        if not -math.pi < self.s <= math.pi:
            raise ParamOutOfRange(f"group angle must lie in (-pi, pi], got {self.s!r}")




def rotation(s: float) -> np.ndarray:
    cos, sin = math.cos(s), math.sin(s)
    return np.array([[cos, sin], [-sin, cos]])


def _point(z: complex, s: float) -> CoverPoint:
    return CoverPoint(z.real, z.imag, s)


def _turn(s: float) -> complex:
    """R(s) acting on z = x + iy is multiplication by e^{-is}."""
    return complex(math.cos(s), -math.sin(s))


def group_mul(p: CoverPoint, q: CoverPoint) -> CoverPoint:
    return _point(p.z + _turn(p.s) * q.z, p.s + q.s)


def group_inv(p: CoverPoint) -> CoverPoint:
    return _point(-_turn(-p.s) * p.z, -p.s)


def wrap_angle(s: float) -> float:
    """Reduce *s* into (-π, π]; odd multiples of π map to +π."""
    out = math.pi - (math.pi - s) % TWO_PI
    # the remainder can round up to 2π for tiny negative arguments
    return math.pi if out <= -math.pi else out


def project(p: CoverPoint) -> GroupPoint:
    return GroupPoint(p.x, p.y, wrap_angle(p.s))


def lifts(q: GroupPoint, k_range: Iterable[int] = range(-1, 2)) -> list[CoverPoint]:
    return [CoverPoint(q.x, q.y, q.s + TWO_PI * k) for k in k_range]


def group_distance(p: GroupPoint, q: GroupPoint) -> float:
    """Max-norm distance with the angle compared on the circle."""
    return max(abs(p.x - q.x), abs(p.y - q.y), abs(wrap_angle(p.s - q.s)))




# [ Euler–Arnold ]

def _require_nu(nu: float) -> float:
    nu = float(nu)
    if not (math.isfinite(nu) and nu > 0):
        raise ParamOutOfRange(f"nu must be a positive real, got {nu!r}")
    return nu


def frame_constants(nu: float) -> StructureTensor:
    """Brackets of the orthonormal frame (X1, X2, X3/√ν)."""
    r = 1.0 / math.sqrt(_require_nu(nu))
    return StructureTensor.from_brackets({
        (2, 0): (0.0, -r, 0.0),
        (2, 1): (r, 0.0, 0.0),
    })


def euler_arnold_rhs_generic(st: StructureTensor, alpha: Sequence[float]) -> np.ndarray:
    """α' = Σ_k ⟨α, [α, e_k]⟩ e_k for orthonormal-frame constants *st*."""
    alpha = np.asarray(alpha, dtype=np.float64)
    return np.einsum('i,l,ikl->k', alpha, alpha, st.full)


def euler_arnold_rhs(nu: float, alpha: AlgebraVector) -> AlgebraVector:
    r = 1.0 / math.sqrt(_require_nu(nu))
    return AlgebraVector(-r * alpha.v2 * alpha.v3, r * alpha.v1 * alpha.v3, 0.0)


def geodesic_rhs(nu: float) -> Callable[[float, np.ndarray], np.ndarray]:
    """Right-hand side of the joint system for the state (α1, α2, α3, x, y, s)."""
    r = 1.0 / math.sqrt(_require_nu(nu))

    def rhs(t: float, state: np.ndarray) -> np.ndarray:
        a1, a2, a3, _, _, s = state
        cos, sin = math.cos(s), math.sin(s)
        return np.array([
            -r * a2 * a3,
            r * a1 * a3,
            0.0,
            cos * a1 + sin * a2,
            -sin * a1 + cos * a2,
            a3,
        ])

    return rhs




# [ Integration ]

# classical fourth-order Butcher tableau
RK4_A = np.array([
    [0.0, 0.0, 0.0, 0.0],
    [0.5, 0.0, 0.0, 0.0],
    [0.0, 0.5, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
])
RK4_B = np.array([1 / 6, 1 / 3, 1 / 3, 1 / 6])
RK4_C = np.array([0.0, 0.5, 0.5, 1.0])


def explicit_rk_step(
    f: Callable[[float, np.ndarray], np.ndarray],
    t: float,
    y: np.ndarray,
    h: float,
    A: np.ndarray = RK4_A,
    b: np.ndarray = RK4_B,
    c: np.ndarray = RK4_C,
) -> np.ndarray:
    """One step of the explicit Runge–Kutta method with tableau (A, b, c)."""
    k = np.zeros((len(b), len(y)))
    for i in range(len(b)):
        k[i] = f(t + c[i] * h, y + h * (A[i, :i] @ k[:i]))
    return y + h * (b @ k)


@_shared.record(eq=False)
class GeodesicPath:
    """Samples of a geodesic.

    Args:
        * t: Strictly increasing sample times, shape (n,).

        * gamma: Cover coordinates (x, y, s) per sample, shape (n, 3).

        * alpha: Body velocity (α1, α2, α3) per sample, shape (n, 3).
    """
    t    : np.ndarray
    gamma: np.ndarray
    alpha: np.ndarray

    def __post_init__(self):
        t = _shared.readonly(self.t)
        n = len(t)
        _shared.setattr_frozen(self, 't', t)
        _shared.setattr_frozen(self, 'gamma', _shared.readonly(self.gamma, (n, 3)))
        _shared.setattr_frozen(self, 'alpha', _shared.readonly(self.alpha, (n, 3)))
        if n > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("sample times must be strictly increasing")

    def __len__(self):
        return len(self.t)

    def samples(self) -> list[tuple[float, CoverPoint, AlgebraVector]]:
        return [
            (float(t), CoverPoint.from_array(g), AlgebraVector.from_array(a))
            for t, g, a in zip(self.t, self.gamma, self.alpha)
        ]

    def end(self) -> CoverPoint:
        return CoverPoint.from_array(self.gamma[-1])

    def energy_drift(self) -> float:
        energy = np.einsum('ij,ij->i', self.alpha, self.alpha)
        return _shared.max_abs(energy - energy[0])

    def max_deviation(self, other: 'GeodesicPath') -> float:
        """Largest coordinate difference of the positions at shared times."""
        if self.t.shape != other.t.shape or not np.allclose(self.t, other.t, rtol=0.0, atol=1e-12):
            raise ValueError("paths are sampled at different times")
        return _shared.max_abs(self.gamma - other.gamma)


def _sample_times(t_end: float, step: float) -> np.ndarray:
    if not (math.isfinite(step) and step > 0):
        raise InvalidStep(f"step must be a positive real, got {step!r}")
    if not (math.isfinite(t_end) and t_end >= 0):
        raise InvalidStep(f"t_end must be a non-negative real, got {t_end!r}")
    n = max(1, math.ceil(t_end / step - 1e-9))
    return np.linspace(0.0, t_end, n + 1) if t_end > 0 else np.zeros(1)


def integrate_geodesic(nu: float, v: AlgebraVector, t_end: float, step: float) -> GeodesicPath:
    """Fixed-step RK4 integration of the geodesic through the identity with
    initial body velocity *v*.

    The step is shortened (never lengthened) so that an integer number of
    steps lands exactly on *t_end*.

    Raises:
        * InvalidStep: *step* is not positive, or *t_end* is negative.
    """
    t = _sample_times(t_end, step)
    f = geodesic_rhs(nu)
    states = np.zeros((len(t), 6))
    states[0, :3] = v.as_array()
    for i in range(1, len(t)):
        states[i] = explicit_rk_step(f, t[i - 1], states[i - 1], t[i] - t[i - 1])
    logger.debug("integrated nu=%g v=%s over %d steps", nu, v, len(t) - 1)
    return GeodesicPath(t, states[:, 3:], states[:, :3])




# [ Closed forms ]

def _phase_factor(theta: np.ndarray) -> np.ndarray:
    """(1 - e^{-iθ}) / (iθ) = sin θ/θ - i (1 - cos θ)/θ, continuous at 0."""
    theta = np.asarray(theta, dtype=np.float64)
    return np.sinc(theta / np.pi) - 1j * (theta / 2) * np.sinc(theta / TWO_PI) ** 2


def _omega(nu: float, v3: float) -> float:
    return (1.0 - 1.0 / math.sqrt(_require_nu(nu))) * v3


def closed_geodesic_path(nu: float, v: AlgebraVector, t: Iterable[float] | np.ndarray) -> GeodesicPath:
    t = np.asarray(t, dtype=np.float64)
    V = complex(v.v1, v.v2)
    z = V * t * _phase_factor(_omega(nu, v.v3) * t)
    body = V * np.exp(1j * (v.v3 / math.sqrt(nu)) * t)
    gamma = np.column_stack([z.real, z.imag, v.v3 * t])
    alpha = np.column_stack([body.real, body.imag, np.full_like(t, v.v3)])
    return GeodesicPath(t, gamma, alpha)


def closed_geodesic(nu: float, v: AlgebraVector, t: float) -> CoverPoint:
    """γ(t) for the geodesic through the identity with initial velocity *v*.

    Reduces to (v1 t, v2 t, v3 t) for ν = 1 and to (v1 t, v2 t, 0) for v3 = 0.
    """
    omega = _omega(nu, v.v3)
    z = complex(v.v1, v.v2) * t * complex(_phase_factor(omega * t))
    return _point(z, v.v3 * t)


def _check_domain(w: float, what: str):
    if abs(w) >= TWO_PI:
        raise DomainExceeded(f"{what}: (1 - 1/sqrt(nu)) s = {w:.6g} is outside (-2pi, 2pi)")


def exp_e(nu: float, v: AlgebraVector) -> CoverPoint:
    """Riemannian exponential at the identity.

    Raises:
        * DomainExceeded: |(1 - 1/√ν) v3| ≥ 2π, where exp stops being injective.
    """
    _check_domain(_omega(nu, v.v3), "exp_e")
    return closed_geodesic(nu, v, 1.0)


def log_e(nu: float, p: CoverPoint) -> AlgebraVector:
    """Inverse of `exp_e` on its injectivity domain."""
    w = _omega(nu, p.s)
    _check_domain(w, "log_e")
    V = p.z / complex(_phase_factor(w))
    return AlgebraVector(V.real, V.imag, p.s)




# [ Geodesic symmetries ]

def symmetry_cover(nu: float, p: CoverPoint) -> CoverPoint:
    """Geodesic symmetry at the identity: exp(v) ↦ exp(-v).

    ([x; y], s) ↦ (R(-ws)[-x; -y], -s), w = 1 - 1/√ν.
    """
    w = 1.0 - 1.0 / math.sqrt(_require_nu(nu))
    return _point(-p.z * _turn(-w * p.s), -p.s)


def symmetry_based(nu: float, base: CoverPoint, p: CoverPoint) -> CoverPoint:
    """Geodesic symmetry at *base*, i.e. L_base ∘ S_e ∘ L_base⁻¹.

    ([x; y], s) ↦ ([a; b] + R(w(c - s))[a - x; b - y], 2c - s) for
    base = ([a; b], c).
    """
    w = 1.0 - 1.0 / math.sqrt(_require_nu(nu))
    return _point(base.z + (base.z - p.z) * _turn(-w * (p.s - base.s)), 2 * base.s - p.s)


def symmetry_welldefined(
    nu     : float,
    q      : GroupPoint,
    k_range: Iterable[int] = range(-3, 4),
    tol    : float = _shared.TOL_CONSIST,
) -> tuple[bool, list[GroupPoint]]:
    """Push the symmetry at the identity down to E₀(2) through each lift of *q*.

    Returns:
        `(consistent, images)`; consistent when every lift gives the same
        image within *tol*.
    """
    images = [project(symmetry_cover(nu, lift)) for lift in lifts(q, k_range)]
    spread = max((group_distance(images[0], im) for im in images[1:]), default=0.0)
    logger.debug("symmetry images of %s at nu=%g spread %.3e", q, nu, spread)
    return spread <= tol, images


def is_symmetric_space_E02(nu: float, tol: float = _shared.TOL_CONSIST) -> bool:
    """Whether the symmetry at the identity descends to E₀(2): 1/√ν ∈ ℕ₊."""
    r = 1.0 / math.sqrt(_require_nu(nu))
    n = round(r)
    return n >= 1 and abs(r - n) <= tol




# [ Diagnostics ]

def symmetry_differential(nu: float, p: CoverPoint | None = None, h: float = 1e-5) -> np.ndarray:
    """Central finite-difference Jacobian of `symmetry_cover` at *p*."""
    base = (p or CoverPoint.identity()).as_array()
    jac  = np.zeros((3, 3))
    for j in range(3):
        step = np.zeros(3)
        step[j] = h
        plus  = symmetry_cover(nu, CoverPoint.from_array(base + step)).as_array()
        minus = symmetry_cover(nu, CoverPoint.from_array(base - step)).as_array()
        jac[:, j] = (plus - minus) / (2 * h)
    return jac


def left_invariant_metric(nu: float, p: CoverPoint) -> np.ndarray:
    """Gram matrix at *p* of the metric diag(1, 1, ν), in the coordinate
    basis (∂x, ∂y, ∂s), transported by left translation."""
    g0 = np.diag([1.0, 1.0, _require_nu(nu)])
    dl = np.eye(3)
    dl[:2, :2] = rotation(p.s)
    inv = np.linalg.inv(dl)
    return inv.T @ g0 @ inv


def isometry_defect(nu: float, p: CoverPoint, h: float = 1e-5) -> float:
    """max |Jᵀ g(S(p)) J - g(p)| for J the Jacobian of `symmetry_cover` at *p*."""
    jac = symmetry_differential(nu, p, h)
    image = symmetry_cover(nu, p)
    return _shared.max_abs(jac.T @ left_invariant_metric(nu, image) @ jac - left_invariant_metric(nu, p))


def isometry_defect_closed(nu: float, p: CoverPoint) -> float:
    """Exact value of `isometry_defect`.

    The pulled-back metric differs from diag(1, 1, ν) by ∓w(y, -x) in the
    (xy, s) block and by w²(x² + y²) in the (s, s) entry, w = 1 - 1/√ν. The
    defect is independent of s and vanishes only on the s axis or at ν = 1.
    """
    w = abs(1.0 - 1.0 / math.sqrt(_require_nu(nu)))
    return max(w * abs(p.x), w * abs(p.y), w * w * (p.x * p.x + p.y * p.y))




# [ Export ]

CSV_HEADER = "t,x,y,s,alpha1,alpha2,alpha3"


def write_csv(target: StrPath | SupportsWrite[str], path: GeodesicPath):
    """Write samples as CSV with twelve decimals."""
    data = np.column_stack([path.t, path.gamma, path.alpha])
    np.savetxt(target, data, fmt='%.12f', delimiter=',', header=CSV_HEADER, comments='')  # type: ignore
