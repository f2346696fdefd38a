"""Local-symmetry polynomial systems and the classification of Ha–Lee
normal-form metrics.

The decision path is generic: frame the algebra, evaluate the residual
system on the frame constants and compute ∇R. For symmetric metrics a
closed-form witness frame is emitted as a certificate and checked by
substitution.
"""
import concurrent.futures
import dataclasses
import itertools
import logging
import math
import numpy as np
from . import _shared
from .algebra import BasisChange, MetricLieAlgebra, MetricMatrix, change_basis
from .catalog import algebra_for, halee_matrix
from .config import DEFAULT_TOLERANCES, Tolerances
from .curvature import frame_tensors, is_locally_symmetric
from .enum import FamilyTag, FrameKind, G0Form, HaLeeGroup
from .errors import NotASolution, ParamOutOfRange
from .milnor import Identification, identify_family, milnor_algebra, milnor_frame, read_constants
from .typing import Any, Iterable, Sequence


logger = logging.getLogger(__name__)




# [ Residual systems ]

@_shared.record
class SymmetryResiduals:
    """Exact evaluations of a local-symmetry residual system.

    `constraint_ok` is the side condition a + d ≠ 0 (always true for
    unimodular systems).
    """
    values       : tuple[float, ...]
    constraint_ok: bool = True

    def max_abs(self) -> float:
        return _shared.max_abs(self.values)

    def vanishes(self, tol: float = _shared.TOL_SYMMETRIC) -> bool:
        return self.constraint_ok and self.max_abs() <= tol


def unimodular_residuals(a: float, b: float, c: float) -> SymmetryResiduals:
    return SymmetryResiduals((
        (a - b) * (a + b - c) ** 2,
        (c - a) * (a - b + c) ** 2,
        (c - b) * (a - b - c) ** 2,
    ))


def nonunimodular_residuals(a: float, b: float, c: float, d: float) -> SymmetryResiduals:
    """The five polynomials, then ac + bd."""
    return SymmetryResiduals(
        (
            (b - c) * (a * a + b * b - c * c - d * d),
            (b + c) * (a * a + b * b - a * d + b * c),
            d * (a * a + b * b - a * d + b * c) ** 2,
            a * (c * c + d * d - a * d + c * b),
            (b + c) * (c * c + d * d - a * d + b * c),
            a * c + b * d,
        ),
        constraint_ok=(a + d) != 0,
    )


def residuals(constants: Sequence[float]) -> SymmetryResiduals:
    if len(constants) == 3:
        return unimodular_residuals(*constants)
    return nonunimodular_residuals(*constants)


def solution_family(constants: Sequence[float], tol: float = _shared.TOL_SYMMETRIC) -> FamilyTag:
    """Name the solution family of Milnor constants that solve their system.

    Raises:
        * NotASolution: The residuals do not vanish within *tol*.
    """
    constants = tuple(float(v) for v in constants)
    res = residuals(constants)
    if not res.vanishes(tol):
        raise NotASolution(
            f"{constants} is not a solution (max residual {res.max_abs():.3e}, constraint ok: {res.constraint_ok})"
        )
    zero = tol * max(1.0, _shared.max_abs(constants))
    if len(constants) == 3:
        a, b, c = constants
        if abs(a) > zero and abs(a - b) <= zero and abs(b - c) <= zero:
            return FamilyTag.ROUND_SU2
        return FamilyTag.FLAT
    a, b, c, d = constants
    if abs(b) <= zero and abs(c) <= zero:
        if abs(a - d) <= zero:
            return FamilyTag.GI
        return FamilyTag.G0
    return FamilyTag.GD




# [ Normal forms ]

@_shared.record
class HaLeeMetric:
    """A normal-form metric on one of the simply connected groups.

    The parameter ranges are checked on construction (`ParamOutOfRange`).
    """
    group: HaLeeGroup
    mu   : float | None = None
    nu   : float | None = None
    lam  : float | None = None
    D    : float | None = None
    form : G0Form = G0Form.A1

    def __post_init__(self):
        if self.group not in HaLeeGroup:
            raise ParamOutOfRange(f"unknown group {self.group!r}")
        if self.form not in G0Form:
            raise ParamOutOfRange(f"unknown G0 form {self.form!r}; expected A1 or A2")
        _shared.setattr_frozen(self, 'group', HaLeeGroup(self.group))
        _shared.setattr_frozen(self, 'form', G0Form(self.form))
        for name in ('mu', 'nu', 'lam', 'D'):
            value = getattr(self, name)
            if value is None:
                continue
            try:
                _shared.setattr_frozen(self, name, float(value))
            except (TypeError, ValueError):
                raise ParamOutOfRange(f"{name} must be a real number, got {value!r}") from None
        self.matrix()

    def matrix(self) -> np.ndarray:
        return halee_matrix(self.group, mu=self.mu, nu=self.nu, lam=self.lam, D=self.D, form=self.form)

    def algebra(self) -> MetricLieAlgebra:
        return MetricLieAlgebra(algebra_for(self.group, self.D), MetricMatrix(self.matrix()))

    def params(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for key, value in (('mu', self.mu), ('nu', self.nu), ('lambda', self.lam), ('D', self.D)):
            if value is not None:
                out[key] = float(value)
        if self.group is HaLeeGroup.G0:
            out['form'] = str(self.form)
        return out

    def __str__(self):
        params = ', '.join(f"{k}={v}" for k, v in self.params().items())
        return f"{self.group}({params})"




# [ Witness frames ]

def witness(metric: HaLeeMetric) -> tuple[BasisChange, FamilyTag] | None:
    """Closed-form Milnor frame of a locally symmetric normal form, with the
    solution family it reaches. None when the normal form is not symmetric."""
    g = metric.group
    if g is HaLeeGroup.R3:
        return BasisChange.identity(), FamilyTag.FLAT

    s = 1.0 / math.sqrt(metric.nu)  # type: ignore
    if g is HaLeeGroup.E0TILDE2 and metric.mu == 1:
        return BasisChange(np.array([[0, 0, 1], [0, 1, 0], [s, 0, 0]], dtype=np.float64)), FamilyTag.FLAT
    if g is HaLeeGroup.SU2 and metric.lam == metric.mu == metric.nu:
        r = 1.0 / math.sqrt(metric.lam)  # type: ignore
        return BasisChange(np.diag([r, -r, -r])), FamilyTag.ROUND_SU2
    if g is HaLeeGroup.GI:
        return BasisChange(np.array([[0, 1, 0], [0, 0, 1], [s, 0, 0]], dtype=np.float64)), FamilyTag.GI
    if g is HaLeeGroup.G0 and metric.form is G0Form.A2:
        r = 1.0 / math.sqrt(3.0)
        return BasisChange(np.array([[0, 0, -2 * r], [0, 1, r], [s, 0, 0]])), FamilyTag.G0
    if g is HaLeeGroup.GD and metric.mu == metric.D:
        r = 1.0 / math.sqrt(metric.D - 1.0)  # type: ignore
        return BasisChange(np.array([[0, 1, -r], [0, 0, r], [s, 0, 0]])), FamilyTag.GD
    return None


_FAMILY_KIND = {
    FamilyTag.FLAT     : FrameKind.UNIMODULAR,
    FamilyTag.ROUND_SU2: FrameKind.UNIMODULAR,
    FamilyTag.GI       : FrameKind.NON_UNIMODULAR,
    FamilyTag.GD       : FrameKind.NON_UNIMODULAR,
    FamilyTag.G0       : FrameKind.NON_UNIMODULAR,
}


@_shared.record
class WitnessCheck:
    """Result of substituting a witness frame.

    Args:
        * orthonormality: max |Pᵀ g P - I|.

        * canonical: Largest bracket component outside the canonical shape.

        * constants: The frame constants read from the brackets.

        * family: Solution family of the constants, when they solve the system.
    """
    ok            : bool
    orthonormality: float
    canonical     : float
    constants     : tuple[float, ...]
    family        : FamilyTag | None


def check_witness(
    mla   : MetricLieAlgebra,
    P     : BasisChange | Any,
    family: FamilyTag,
    tol   : Tolerances = DEFAULT_TOLERANCES,
) -> WitnessCheck:
    """Certify that *P* is an orthonormal frame reaching the canonical
    bracket form of *family*."""
    p = P if isinstance(P, BasisChange) else BasisChange(np.asarray(P, dtype=np.float64))
    ortho  = _shared.max_abs(p.p.T @ mla.g @ p.p - np.eye(3))
    framed = change_basis(mla, p)
    kind   = _FAMILY_KIND[family]
    constants = read_constants(framed.st, kind)
    canonical = _shared.max_abs(framed.st.full - milnor_algebra(constants).full)
    try:
        reached = solution_family(constants, tol.symmetric)
    except NotASolution:
        reached = None
    ok = ortho <= tol.frame and canonical <= tol.frame * framed.st.scale() and reached is family
    return WitnessCheck(ok, ortho, canonical, constants, reached)




# [ Verdicts ]

@_shared.record
class ClassificationVerdict:
    locally_symmetric: bool
    milnor_constants : tuple[float, ...]
    nabla_r_residual : float
    family           : Identification
    residuals        : SymmetryResiduals
    solution         : FamilyTag | None = None
    witness_P        : BasisChange | None = None
    metric           : HaLeeMetric | None = None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            'locally_symmetric': self.locally_symmetric,
            'milnor_constants' : list(self.milnor_constants),
            'residual'         : self.nabla_r_residual,
            'family'           : str(self.family),
            'system_residual'  : self.residuals.max_abs(),
        }
        if self.metric is not None:
            out['group']  = str(self.metric.group)
            out['params'] = self.metric.params()
        if self.solution is not None:
            out['solution_family'] = str(self.solution)
        if self.witness_P is not None:
            out['witness_P'] = self.witness_P.p.tolist()
        return out


def classify(mla: MetricLieAlgebra, tol: Tolerances = DEFAULT_TOLERANCES) -> ClassificationVerdict:
    """Decide local symmetry of an arbitrary metric Lie algebra."""
    frame = milnor_frame(mla, tol)
    res   = residuals(frame.constants)
    nabla = frame_tensors(frame)[2].residual()
    symmetric = nabla <= tol.symmetric
    if symmetric != res.vanishes(tol.symmetric):
        logger.warning(
            "residual system and ∇R disagree at %s (system %.3e, ∇R %.3e)",
            frame.constants, res.max_abs(), nabla,
        )
    solution = solution_family(frame.constants, tol.symmetric) if res.vanishes(tol.symmetric) else None
    return ClassificationVerdict(
        locally_symmetric=symmetric,
        milnor_constants =frame.constants,
        nabla_r_residual =nabla,
        family           =identify_family(frame, tol.frame),
        residuals        =res,
        solution         =solution,
    )


def classify_halee(metric: HaLeeMetric, tol: Tolerances = DEFAULT_TOLERANCES) -> ClassificationVerdict:
    """Classify a normal-form metric and attach a certified witness frame
    when it is locally symmetric."""
    mla = metric.algebra()
    verdict = classify(mla, tol)
    verdict = dataclasses.replace(verdict, metric=metric)
    if not verdict.locally_symmetric:
        return verdict

    found = witness(metric)
    if found is None:
        logger.warning("%s is locally symmetric but has no closed-form witness", metric)
        return verdict
    P, family = found
    check = check_witness(mla, P, family, tol)
    if not check.ok:
        logger.warning(
            "witness for %s fails substitution (orthonormality %.3e, canonical %.3e, family %s)",
            metric, check.orthonormality, check.canonical, check.family,
        )
        return verdict
    return dataclasses.replace(verdict, witness_P=P)




# [ Grids ]

def unimodular_grid(step: float = 0.5, top: float = 3.0) -> list[tuple[float, float, float]]:
    """All (a, b, c) with entries in {0, step, ..., top}."""
    values = [float(v) for v in np.arange(0.0, top + step / 2, step)]
    return list(itertools.product(values, repeat=3))


def admissible_grid(
    r1s   : Sequence[float] = (0.5, 1.0, 1.5, 2.0),
    r2s   : Sequence[float] = (-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0),
    angles: Sequence[float] = tuple(k * math.pi / 12 for k in range(-5, 6)),
) -> list[tuple[float, float, float, float]]:
    """Non-unimodular tuples on the surface ac + bd = 0 with a + d > 0.

    (a, b) = r1 (cos θ, sin θ) and (c, d) = r2 (-sin θ, cos θ), so the two
    columns of ad_{e1} are orthogonal by construction.
    """
    grid = []
    for r1, r2, theta in itertools.product(r1s, r2s, angles):
        cos, sin = math.cos(theta), math.sin(theta)
        if (r1 + r2) * cos <= 0:
            continue
        grid.append((r1 * cos, r1 * sin, -r2 * sin, r2 * cos))
    return grid


@_shared.record
class GridPoint:
    constants: tuple[float, ...]
    system   : float
    nabla_r  : float
    vanishes : bool
    symmetric: bool

    @property
    def consistent(self) -> bool:
        return self.vanishes == self.symmetric


@_shared.record
class GridReport:
    kind  : FrameKind
    points: tuple[GridPoint, ...]

    @property
    def counterexamples(self) -> list[GridPoint]:
        return [p for p in self.points if not p.consistent]

    @property
    def solutions(self) -> list[GridPoint]:
        return [p for p in self.points if p.vanishes]

    def max_on_residual(self) -> float:
        return max((p.nabla_r for p in self.points if p.vanishes), default=0.0)

    def min_off_residual(self) -> float:
        return min((p.nabla_r for p in self.points if not p.vanishes), default=math.inf)


def _grid_point(constants: tuple[float, ...], tol: Tolerances) -> GridPoint:
    res = residuals(constants)
    symmetric, nabla = is_locally_symmetric(
        MetricLieAlgebra.orthonormal(milnor_algebra(constants)), tol.symmetric, tol,
    )
    point = GridPoint(constants, res.max_abs(), nabla, res.vanishes(tol.symmetric), symmetric)
    logger.debug("grid point %s: system %.3e, ∇R %.3e", constants, point.system, nabla)
    return point


def grid_verify(
    kind   : FrameKind | str,
    grid   : Iterable[Sequence[float]] | None = None,
    tol    : Tolerances = DEFAULT_TOLERANCES,
    workers: int | None = None,
) -> GridReport:
    """Compare residual vanishing with the ∇R decision at every grid point.

    Args:
        * kind: Which residual system the grid points belong to.

        * grid: Milnor constants; defaults to `unimodular_grid()` or
        `admissible_grid()`.

        * workers: Evaluate points on a thread pool of this size. Points are
        reported in grid order either way.
    """
    kind = FrameKind(kind)
    if grid is None:
        grid = unimodular_grid() if kind is FrameKind.UNIMODULAR else admissible_grid()
    width  = 3 if kind is FrameKind.UNIMODULAR else 4
    points = [tuple(float(v) for v in p) for p in grid]
    for p in points:
        if len(p) != width:
            raise ValueError(f"{kind} grid points have {width} entries, got {p}")

    if workers and workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_grid_point, p, tol) for p in points]
            results = [f.result() for f in futures]
    else:
        results = [_grid_point(p, tol) for p in points]

    report = GridReport(kind, tuple(results))
    logger.info(
        "%s grid: %d points, %d solutions, %d counterexamples",
        kind, len(results), len(report.solutions), len(report.counterexamples),
    )
    return report




def halee_sweep() -> list[tuple[HaLeeMetric, bool]]:
    """Normal forms paired with whether they are locally symmetric."""
    sweep: list[tuple[HaLeeMetric, bool]] = [(HaLeeMetric(HaLeeGroup.R3), True)]
    for mu, nu in itertools.product((0.25, 0.5, 0.75, 1.0), (0.5, 1.0, 2.0)):
        sweep.append((HaLeeMetric(HaLeeGroup.E0TILDE2, mu=mu, nu=nu), mu == 1.0))
    for lam, mu, nu in ((1.0, 1.0, 1.0), (2.0, 2.0, 2.0), (2.0, 1.0, 1.0), (2.0, 2.0, 1.0)):
        sweep.append((HaLeeMetric(HaLeeGroup.SU2, mu=mu, nu=nu, lam=lam), lam == mu == nu))
    for nu in (0.3, 1.0, 4.0):
        sweep.append((HaLeeMetric(HaLeeGroup.GI, nu=nu), True))
    for nu in (0.5, 1.0, 2.0):
        sweep.append((HaLeeMetric(HaLeeGroup.G0, nu=nu, form=G0Form.A2), True))
    for mu, nu in ((1.0, 1.0), (0.5, 2.0), (2.0, 0.5)):
        sweep.append((HaLeeMetric(HaLeeGroup.G0, mu=mu, nu=nu, form=G0Form.A1), False))
    for D, nu in itertools.product((2.0, 3.0, 5.0), (1.0, 3.0)):
        for mu in ((1.0 + D) / 2, D):
            sweep.append((HaLeeMetric(HaLeeGroup.GD, mu=mu, nu=nu, D=D), mu == D))
    return sweep
