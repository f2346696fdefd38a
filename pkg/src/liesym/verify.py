"""End-to-end verification checks.

Each check reproduces one claim of the classification (solution sets,
normal-form sweep, curvature formulas, geodesics and symmetries) and
reports a measured value against a bound. Randomized checks draw from a
generator seeded by `(seed, check ordinal)`, so a check's result does not
depend on which other checks run.
"""
import concurrent.futures
import json
import logging
import math
import numpy as np
from . import _shared
from .algebra import MetricLieAlgebra, MetricMatrix, change_basis
from .catalog import e0tilde2, g_d, g_i, su2
from .classification import HaLeeMetric, admissible_grid, classify_halee, grid_verify, halee_sweep, unimodular_grid
from .config import DEFAULT_SEED, DEFAULT_TOLERANCES, Tolerances
from .curvature import (
    closed_form_R_nonunimodular,
    closed_form_R_unimodular,
    connection,
    connection_residuals,
    curvature,
    curvature_residuals,
    is_locally_symmetric,
)
from .enum import CheckGroup, CheckStatus, FrameKind, G0Form, HaLeeGroup
from .errors import InputError
from .geodesics import (
    AlgebraVector,
    CoverPoint,
    GroupPoint,
    closed_geodesic_path,
    exp_e,
    integrate_geodesic,
    is_symmetric_space_E02,
    isometry_defect,
    isometry_defect_closed,
    log_e,
    symmetry_cover,
    symmetry_differential,
    symmetry_welldefined,
)
from .milnor import milnor_D, milnor_algebra, milnor_frame
from .typing import Any, Callable, Iterable, Sequence


logger = logging.getLogger(__name__)




# [ Records ]

@_shared.record
class Check:
    """Outcome of one verification check.

    `measured` is compared against `tolerance`; `expected` states the claim
    in words.
    """
    check_id : str
    claim    : str
    group    : CheckGroup
    status   : CheckStatus
    measured : float
    expected : str
    tolerance: float
    seed     : int
    detail   : str = ""

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASS

    def to_json(self) -> dict[str, Any]:
        return {
            'check_id' : self.check_id,
            'claim'    : self.claim,
            'group'    : str(self.group),
            'status'   : str(self.status),
            'measured' : _finite(self.measured),
            'expected' : self.expected,
            'tolerance': self.tolerance,
            'seed'     : self.seed,
            'detail'   : self.detail,
        }


@_shared.record
class VerificationReport:
    seed     : int
    tolerance: Tolerances
    checks   : tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict[str, Any]:
        return {
            'seed'     : self.seed,
            'tolerance': {name: getattr(self.tolerance, name) for name in self.tolerance.__dataclass_fields__},
            'checks'   : [c.to_json() for c in self.checks],
            'passed'   : self.passed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _finite(value: float) -> float | None:
    return float(value) if math.isfinite(value) else None




# [ Random inputs ]

def random_orthogonal(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    return q * np.sign(np.diag(r))


def random_spd(rng: np.random.Generator, low: float = 0.5, high: float = 2.0) -> np.ndarray:
    q = random_orthogonal(rng)
    g = q @ np.diag(rng.uniform(low, high, 3)) @ q.T
    return 0.5 * (g + g.T)


def random_basis_change(rng: np.random.Generator, max_stretch: float = 10.0) -> np.ndarray:
    """Invertible matrix with condition number at most *max_stretch*."""
    return random_orthogonal(rng) @ np.diag(rng.uniform(1.0, max_stretch, 3)) @ random_orthogonal(rng)


def random_admissible(rng: np.random.Generator, r_high: float = 2.0) -> tuple[float, float, float, float]:
    """Random non-unimodular Milnor tuple with ac + bd = 0 and a + d > 0."""
    while True:
        theta = rng.uniform(-math.pi, math.pi)
        r1, r2 = rng.uniform(-r_high, r_high, 2)
        cos, sin = math.cos(theta), math.sin(theta)
        if (r1 + r2) * cos > 0.05:
            return r1 * cos, r1 * sin, -r2 * sin, r2 * cos




# [ Registry ]

class _Context:
    __slots__ = ('rng', 'seed', 'tol', 'override')

    def __init__(self, rng: np.random.Generator, seed: int, tol: Tolerances, override: float | None):
        self.rng      = rng
        self.seed     = seed
        self.tol      = tol
        self.override = override

    def bound(self, default: float) -> float:
        return default if self.override is None else self.override


@_shared.record
class _CheckSpec:
    check_id: str
    group   : CheckGroup
    claim   : str
    run     : Callable[[_Context], tuple[float, float, str, str]]


CHECKS: dict[str, _CheckSpec] = {}


def check(check_id: str, group: CheckGroup, claim: str):
    """Register a check. The function returns `(measured, bound, expected, detail)`;
    the check passes when measured <= bound."""
    def register(fn):
        CHECKS[check_id] = _CheckSpec(check_id, group, claim, fn)
        return fn
    return register




# [ Classification checks ]

def _in_unimodular_families(a: float, b: float, c: float) -> bool:
    return (a == 0 and b == c) or (a == b and c == 0) or (b == 0 and a == c) or (a == b == c)


def _normalized(a: float, b: float, c: float, d: float) -> tuple[float, float, float, float]:
    if a < d:
        a, b, c, d = d, c, b, a
    if b < c:
        b, c = -b, -c
    return a, b, c, d


def _in_nonunimodular_families(constants: Sequence[float], tol: float) -> bool:
    a, b, c, d = _normalized(*constants)
    return (abs(a - d) <= tol and abs(b + c) <= tol) or (abs(b) <= tol and abs(c) <= tol and abs(d) <= tol)


@check('unimodular-solution-set', CheckGroup.CLASSIFICATION,
       "unimodular residual system vanishes exactly on (0,b,b), (a,a,0), (a,0,a), (a,a,a)")
def _unimodular_solution_set(ctx: _Context):
    report = grid_verify(FrameKind.UNIMODULAR, unimodular_grid(), ctx.tol)
    wrong_family = [p for p in report.points if p.vanishes != _in_unimodular_families(*p.constants)]
    min_off = report.min_off_residual()
    mismatches = len(report.counterexamples) + len(wrong_family) + (min_off < 1e-3)
    detail = (
        f"{len(report.points)} points, {len(report.solutions)} solutions, "
        f"max on-set ∇R {report.max_on_residual():.3e}, min off-set ∇R {min_off:.3e}"
    )
    return float(mismatches), 0.0, "0 mismatches between residuals, families and ∇R", detail


@check('nonunimodular-solution-set', CheckGroup.CLASSIFICATION,
       "non-unimodular residual system vanishes exactly on (a,b,-b,a) and (a,0,0,0)")
def _nonunimodular_solution_set(ctx: _Context):
    sampled: list[tuple[float, ...]] = []
    for i in range(200):
        theta = ctx.rng.uniform(-1.3, 1.3)
        r1    = ctx.rng.uniform(0.2, 2.0)
        pick  = i % 4
        if pick == 0:
            r2 = r1
        elif pick == 1:
            r2, theta = 0.0, 0.0
        else:
            r2 = ctx.rng.uniform(-0.15, 2.0)
        sampled.append((r1 * math.cos(theta), r1 * math.sin(theta), -r2 * math.sin(theta), r2 * math.cos(theta)))
    grid   = admissible_grid() + sampled
    report = grid_verify(FrameKind.NON_UNIMODULAR, grid, ctx.tol)
    bound  = ctx.bound(ctx.tol.symmetric)
    wrong_family = [p for p in report.points if p.vanishes != _in_nonunimodular_families(p.constants, bound)]
    mismatches = len(report.counterexamples) + len(wrong_family)
    detail = f"{len(report.points)} admissible tuples, {len(report.solutions)} solutions"
    return float(mismatches), 0.0, "0 mismatches between residuals, families and ∇R", detail


@check('halee-sweep', CheckGroup.CLASSIFICATION,
       "normal forms: E0tilde2 iff mu=1, SU2 iff round, GI and G0-A2 always, G0-A1 never, GD iff mu=D")
def _halee_sweep(ctx: _Context):
    mismatches = []
    sweep = halee_sweep()
    for metric, expected in sweep:
        verdict = classify_halee(metric, ctx.tol)
        if verdict.locally_symmetric != expected or (expected and verdict.witness_P is None):
            mismatches.append(str(metric))
    detail = f"{len(sweep)} normal forms" + (f"; mismatches: {', '.join(mismatches)}" if mismatches else "")
    return float(len(mismatches)), 0.0, "0 mismatches", detail




# [ Curvature checks ]

@check('curvature-closed-form', CheckGroup.CURVATURE,
       "Koszul curvature equals the closed-form components; round su(2) gives -a²/4")
def _curvature_closed_form(ctx: _Context):
    worst = 0.0
    for i in range(500):
        if i % 2:
            constants = tuple(ctx.rng.uniform(-3.0, 3.0, 3))
            expected  = closed_form_R_unimodular(*constants).r
        else:
            constants = random_admissible(ctx.rng, 3.0)
            expected  = closed_form_R_nonunimodular(*constants).r
        st = milnor_algebra(constants)
        worst = max(worst, _shared.max_abs(curvature(connection(st), st).r - expected))

    round_defect = 0.0
    for a in (0.5, 1.0, 2.0):
        st = milnor_algebra((a, a, a))
        round_defect = max(round_defect, abs(curvature(connection(st), st).r[0, 1, 1, 0] + a * a / 4))
    measured = max(worst, round_defect)
    detail = f"max closed-form deviation {worst:.3e}; round su(2) deviation from -a²/4 {round_defect:.3e}"
    return measured, ctx.bound(1e-10), "componentwise agreement on 500 tuples", detail


@check('structural-invariants', CheckGroup.CURVATURE,
       "connection axioms, curvature symmetries and basis-change invariance of local symmetry")
def _structural_invariants(ctx: _Context):
    algebras = [e0tilde2(), su2(), g_i(), g_d(2.0), g_d(0.5)]
    conn_worst = curv_worst = 0.0
    for st in algebras:
        for _ in range(10):
            frame = milnor_frame(MetricLieAlgebra(st, MetricMatrix(random_spd(ctx.rng))), ctx.tol)
            conn  = connection(frame.st)
            conn_worst = max(conn_worst, connection_residuals(conn, frame.st).worst())
            curv_worst = max(curv_worst, curvature_residuals(curvature(conn, frame.st)).worst())

    cases = [
        HaLeeMetric(HaLeeGroup.E0TILDE2, mu=1.0, nu=2.0),
        HaLeeMetric(HaLeeGroup.E0TILDE2, mu=0.5, nu=1.0),
        HaLeeMetric(HaLeeGroup.SU2, lam=2.0, mu=1.0, nu=1.0),
        HaLeeMetric(HaLeeGroup.GI, nu=0.3),
        HaLeeMetric(HaLeeGroup.GD, D=2.0, mu=2.0, nu=3.0),
        HaLeeMetric(HaLeeGroup.G0, mu=1.0, nu=1.0, form=G0Form.A1),
    ]
    flips = 0
    for metric in cases:
        mla = metric.algebra()
        reference, _ = is_locally_symmetric(mla, ctx.tol.symmetric, ctx.tol)
        for _ in range(50):
            moved = change_basis(mla, random_basis_change(ctx.rng))
            flips += is_locally_symmetric(moved, ctx.tol.symmetric, ctx.tol)[0] != reference

    conn_ok = conn_worst <= ctx.bound(1e-12)
    curv_ok = curv_worst <= ctx.bound(1e-10)
    measured = float(flips + (not conn_ok) + (not curv_ok))
    detail = f"connection defect {conn_worst:.3e}, curvature defect {curv_worst:.3e}, verdict flips {flips}"
    return measured, 0.0, "all structural identities hold", detail




# [ Milnor checks ]

@check('invariant-d', CheckGroup.MILNOR,
       "D = 1 + (b/a)² on (a,b,-b,a), D = 0 on (a,0,0,0), and D is frame independent")
def _invariant_d(ctx: _Context):
    worst = 0.0
    for _ in range(50):
        a, b = ctx.rng.uniform(0.1, 3.0, 2)
        worst = max(worst, abs(milnor_D(a, b, -b, a) - (1 + (b / a) ** 2)) / (1 + (b / a) ** 2))
        worst = max(worst, abs(milnor_D(a, 0.0, 0.0, 0.0)))
    frame_worst = 0.0
    for _ in range(20):
        D0  = ctx.rng.uniform(1.0, 5.0)
        mla = MetricLieAlgebra(g_d(D0), MetricMatrix(random_spd(ctx.rng)))
        moved = change_basis(mla, random_basis_change(ctx.rng))
        frame = milnor_frame(moved, ctx.tol)
        frame_worst = max(frame_worst, abs(milnor_D(*frame.constants) - D0))
    ok = worst <= ctx.bound(1e-12) and frame_worst <= ctx.bound(1e-8)
    detail = f"closed-form relative error {worst:.3e}; frame recomputation error {frame_worst:.3e}"
    return float(not ok), 0.0, "relative error 1e-12 on 50 pairs, 1e-8 on 20 framed algebras", detail




# [ Geodesic checks ]

def _random_velocity(rng: np.random.Generator, radius: float) -> AlgebraVector:
    direction = rng.standard_normal(3)
    direction /= np.linalg.norm(direction)
    return AlgebraVector.from_array(direction * rng.uniform(0.0, radius))


@check('geodesic-oracle', CheckGroup.GEODESICS,
       "closed-form geodesics agree with RK4 integration and energy is conserved")
def _geodesic_oracle(ctx: _Context):
    worst = drift = 0.0
    for _ in range(50):
        nu = ctx.rng.uniform(0.2, 5.0)
        v  = _random_velocity(ctx.rng, 2.0)
        path   = integrate_geodesic(nu, v, 10.0, 1e-3)
        closed = closed_geodesic_path(nu, v, path.t)
        worst  = max(worst, path.max_deviation(closed))
        drift  = max(drift, path.energy_drift())
    ok = worst <= ctx.bound(1e-8) and drift <= ctx.bound(1e-9)
    detail = f"max deviation {worst:.3e}, max energy drift {drift:.3e}"
    return float(not ok), 0.0, "deviation <= 1e-8 and drift <= 1e-9 over t in [0, 10]", detail


@check('exp-log-roundtrip', CheckGroup.GEODESICS, "log_e inverts exp_e on its injectivity domain")
def _exp_log_roundtrip(ctx: _Context):
    worst = 0.0
    nus = (1 / 9, 1 / 4, 1.0, 2.0, 4.0)
    for i in range(100):
        nu = nus[i % len(nus)]
        w  = abs(1.0 - 1.0 / math.sqrt(nu))
        limit = 3.0 if w == 0 else min(3.0, 0.9 * 2 * math.pi / w)
        v1, v2 = ctx.rng.uniform(-2.0, 2.0, 2)
        v  = AlgebraVector(v1, v2, ctx.rng.uniform(-limit, limit))
        back = log_e(nu, exp_e(nu, v))
        worst = max(worst, _shared.max_abs(back.as_array() - v.as_array()))
    return worst, ctx.bound(1e-9), "round-trip error <= 1e-9 on 100 samples", f"max error {worst:.3e}"


NEAR_IDENTITY = 1e-3


@check('symmetry-properties', CheckGroup.GEODESICS,
       "the symmetry at the identity is an involution fixing e with differential -I; "
       "its isometry defect near e is first order in |p| and matches the closed form")
def _symmetry_properties(ctx: _Context):
    """Sampled points near e vary in all three coordinates. For ν ≠ 1 the
    measured isometry defect is nonzero off the s axis; the check asserts the
    exact defect and the first-order bound rather than a flat 1e-5."""
    involution = differential = mismatch = ratio = 0.0
    largest = 0.0
    fixed = True
    for nu in (0.25, 1.0, 2.0):
        w = abs(1.0 - 1.0 / math.sqrt(nu))
        fixed &= symmetry_cover(nu, CoverPoint.identity()) == CoverPoint.identity()
        differential = max(differential, _shared.max_abs(symmetry_differential(nu) + np.eye(3)))
        for _ in range(100):
            x, y = ctx.rng.uniform(-2.0, 2.0, 2)
            p = CoverPoint(x, y, ctx.rng.uniform(-3.0, 3.0))
            involution = max(involution, _shared.max_abs(
                symmetry_cover(nu, symmetry_cover(nu, p)).as_array() - p.as_array()
            ))
            near = CoverPoint.from_array(ctx.rng.uniform(-NEAR_IDENTITY, NEAR_IDENTITY, 3))
            defect = isometry_defect(nu, near)
            largest  = max(largest, defect)
            mismatch = max(mismatch, abs(defect - isometry_defect_closed(nu, near)))
            # defect / |p| <= w + 2 w² |p| for |p| the max-norm
            size  = _shared.max_abs(near.as_array())
            ratio = max(ratio, defect / size - (w + 2 * w * w * size))

    ok = (
        fixed
        and involution <= ctx.bound(1e-12)
        and differential <= ctx.bound(1e-6)
        and mismatch <= ctx.bound(1e-8)
        and ratio <= ctx.bound(1e-6)
    )
    detail = (
        f"involution {involution:.3e}, differential {differential:.3e}, "
        f"isometry defect up to {largest:.3e} within |p| <= {NEAR_IDENTITY:g} "
        f"(closed form mismatch {mismatch:.3e}, first-order excess {max(ratio, 0.0):.3e}), "
        f"identity fixed {fixed}"
    )
    expected = "involution 1e-12, differential 1e-6, defect = closed form within 1e-8, defect/|p| <= w + 2w²|p|"
    return float(not ok), 0.0, expected, detail


@check('symmetric-space-criterion', CheckGroup.GEODESICS,
       "the symmetry descends to E0(2) through every lift iff 1/sqrt(nu) is a positive integer")
def _symmetric_space_criterion(ctx: _Context):
    wrong = []
    for nu in (1.0, 1 / 4, 1 / 9, 0.5, 2.0, 3.0):
        consistent = True
        for _ in range(20):
            x, y = ctx.rng.uniform(-2.0, 2.0, 2)
            q = GroupPoint(x, y, ctx.rng.uniform(-math.pi, math.pi))
            consistent &= symmetry_welldefined(nu, q, range(-3, 4), ctx.bound(ctx.tol.consistency))[0]
        if consistent != is_symmetric_space_E02(nu):
            wrong.append(f"{nu:g}")
    detail = "criterion matches" if not wrong else f"mismatch at nu = {', '.join(wrong)}"
    return float(len(wrong)), 0.0, "consistency over lifts matches the criterion on all six nu", detail




# [ Runner ]

def select(only: Iterable[str] = ()) -> list[str]:
    """Check ids matching *only* (ids or group names); all when empty."""
    only = [o for o in only if o]
    if not only:
        return list(CHECKS)
    chosen = []
    for name in only:
        if name in CHECKS:
            chosen.append(name)
        elif name in CheckGroup:
            group = CheckGroup(name)
            chosen.extend(i for i, entry in CHECKS.items() if entry.group is group)
        else:
            raise InputError(f"unknown check or group {name!r}")
    return sorted(set(chosen))


def run_check(check_id: str, tol: Tolerances, seed: int, override: float | None = None) -> Check:
    entry = CHECKS[check_id]
    ordinal = list(CHECKS).index(check_id)
    ctx = _Context(np.random.default_rng([seed, ordinal]), seed, tol, override)
    logger.info("running %s", check_id)
    measured, bound, expected, detail = entry.run(ctx)
    status = CheckStatus.PASS if measured <= bound else CheckStatus.FAIL
    logger.info("%s: %s (%s)", check_id, status, detail)
    return Check(check_id, entry.claim, entry.group, status, float(measured), expected, float(bound), seed, detail)


def run_checks(
    tol     : float | Tolerances | None = None,
    seed    : int = DEFAULT_SEED,
    only    : Iterable[str] = (),
    workers : int | None = None,
) -> VerificationReport:
    """Run the selected checks; the report is ordered by check id.

    Args:
        * tol: A `Tolerances` set, or one number that overrides every check
        bound together with the symmetric and consistency tolerances.
    """
    override = None
    if isinstance(tol, Tolerances):
        tolerances = tol
    elif tol is None:
        tolerances = DEFAULT_TOLERANCES
    else:
        override   = float(tol)
        tolerances = DEFAULT_TOLERANCES.with_overrides(symmetric=override, consistency=override)

    ids = sorted(select(only))
    if workers and workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_check, i, tolerances, seed, override) for i in ids]
            checks  = [f.result() for f in futures]
    else:
        checks = [run_check(i, tolerances, seed, override) for i in ids]
    return VerificationReport(seed, tolerances, tuple(checks))
