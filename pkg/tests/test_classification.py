import math
import numpy as np
import pytest
from numpy.testing import assert_allclose
from liesym import catalog, classification
from liesym.algebra import BasisChange, MetricLieAlgebra, MetricMatrix, change_basis
from liesym.classification import HaLeeMetric
from liesym.enum import AlgebraFamily, FamilyTag, FrameKind, G0Form, HaLeeGroup
from liesym.errors import NotASolution, ParamOutOfRange
from liesym.verify import random_basis_change




class TestResiduals:
    @pytest.mark.parametrize('constants, expected', [
        ((2.0, 2.0, 0.0), (0.0, 0.0, 0.0)),
        ((1.0, 2.0, 3.0), (0.0, 8.0, 16.0)),
        ((0.0, 0.0, 0.0), (0.0, 0.0, 0.0)),
    ])
    def test_unimodular(self, constants, expected):
        assert classification.unimodular_residuals(*constants).values == expected

    @pytest.mark.parametrize('constants', [(1.0, 2.0, -2.0, 1.0), (1.0, 0.0, 0.0, 0.0), (3.0, 0.0, 0.0, 3.0)])
    def test_nonunimodular_solutions(self, constants):
        res = classification.nonunimodular_residuals(*constants)
        assert res.constraint_ok
        assert res.max_abs() == 0.0
        assert res.vanishes()

    def test_constraint_value(self):
        res = classification.nonunimodular_residuals(1.0, 1.0, 1.0, 1.0)
        assert res.values[-1] == 2.0
        assert not res.vanishes()

    def test_trace_free_excluded(self):
        res = classification.nonunimodular_residuals(1.0, 0.0, 0.0, -1.0)
        assert not res.constraint_ok
        assert not res.vanishes()

    def test_dispatch_on_arity(self):
        assert len(classification.residuals((1.0, 2.0, 3.0)).values) == 3
        assert len(classification.residuals((1.0, 2.0, -2.0, 1.0)).values) == 6




class TestSolutionFamily:
    @pytest.mark.parametrize('constants, family', [
        ((1.0, 1.0, 1.0), FamilyTag.ROUND_SU2),
        ((0.0, 1.0, 1.0), FamilyTag.FLAT),
        ((2.0, 2.0, 0.0), FamilyTag.FLAT),
        ((2.0, 0.0, 2.0), FamilyTag.FLAT),
        ((0.0, 0.0, 0.0), FamilyTag.FLAT),
        ((2.0, 0.0, 0.0, 2.0), FamilyTag.GI),
        ((1.0, 2.0, -2.0, 1.0), FamilyTag.GD),
        ((1.0, 0.0, 0.0, 0.0), FamilyTag.G0),
    ])
    def test_families(self, constants, family):
        assert classification.solution_family(constants) is family

    @pytest.mark.parametrize('constants', [(1.0, 2.0, 3.0), (2.0, 0.0, 0.0, 1.0)])
    def test_not_a_solution(self, constants):
        with pytest.raises(NotASolution):
            classification.solution_family(constants)




class TestHaLeeMetric:
    @pytest.mark.parametrize('group, params', [
        ('E0tilde2', dict(mu=1.5, nu=1.0)),
        ('SU2', dict(lam=1.0, mu=2.0, nu=1.0)),
        ('GD', dict(mu=3.0, nu=1.0, D=2.0)),
        ('GD', dict(mu=1.0, nu=1.0, D=2.0)),
        ('GI', dict(nu=0.0)),
        ('GI', dict(nu='wide')),
        ('Sol', dict(nu=1.0)),
        ('G0', dict(nu=1.0, form='B')),
    ])
    def test_out_of_range(self, group, params):
        with pytest.raises(ParamOutOfRange):
            HaLeeMetric(group, **params)

    def test_normalizes_fields(self):
        metric = HaLeeMetric('gd', mu=2, nu=3, D=2)
        assert metric.group is HaLeeGroup.GD
        assert metric.mu == 2.0 and isinstance(metric.mu, float)
        assert str(metric) == "GD(mu=2.0, nu=3.0, D=2.0)"

    def test_params(self):
        assert HaLeeMetric('SU2', lam=3, mu=2, nu=1).params() == {'mu': 2.0, 'nu': 1.0, 'lambda': 3.0}
        assert HaLeeMetric('G0', nu=1, form='a2').params() == {'nu': 1.0, 'form': 'A2'}

    def test_algebra(self):
        mla = HaLeeMetric(HaLeeGroup.GD, mu=2.0, nu=3.0, D=2.0).algebra()
        assert mla.st == catalog.g_d(2.0)
        assert_allclose(mla.g, [[1.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 3.0]])




class TestWitness:
    @pytest.mark.parametrize('metric, expected', classification.halee_sweep(), ids=str)
    def test_witness_for_symmetric_forms(self, metric, expected):
        found = classification.witness(metric)
        assert (found is not None) is expected
        if found is not None:
            P, family = found
            check = classification.check_witness(metric.algebra(), P, family)
            assert check.ok, check
            assert check.family is family

    def test_e0tilde2_witness_constants(self):
        metric = HaLeeMetric(HaLeeGroup.E0TILDE2, mu=1.0, nu=4.0)
        P, family = classification.witness(metric)
        check = classification.check_witness(metric.algebra(), P, family)
        assert_allclose(check.constants, (0.5, 0.5, 0.0), rtol=0, atol=1e-15)

    def test_gd_witness_constants(self):
        metric = HaLeeMetric(HaLeeGroup.GD, mu=5.0, nu=1.0, D=5.0)
        P, family = classification.witness(metric)
        check = classification.check_witness(metric.algebra(), P, family)
        a, b, c, d = check.constants
        assert a == pytest.approx(d)
        assert b == pytest.approx(-c)
        assert 1 + (b / a) ** 2 == pytest.approx(5.0)

    def test_wrong_witness_rejected(self):
        metric = HaLeeMetric(HaLeeGroup.GI, nu=2.0)
        check = classification.check_witness(metric.algebra(), BasisChange.identity(), FamilyTag.GI)
        assert not check.ok
        assert check.orthonormality == pytest.approx(1.0)




class TestClassify:
    @pytest.mark.parametrize('metric, expected', [
        (HaLeeMetric(HaLeeGroup.E0TILDE2, mu=1.0, nu=2.0), True),
        (HaLeeMetric(HaLeeGroup.SU2, lam=2.0, mu=1.0, nu=1.0), False),
        (HaLeeMetric(HaLeeGroup.GD, D=2.0, mu=2.0, nu=3.0), True),
        (HaLeeMetric(HaLeeGroup.G0, mu=1.0, nu=1.0, form=G0Form.A1), False),
    ])
    def test_examples(self, metric, expected):
        verdict = classification.classify_halee(metric)
        assert verdict.locally_symmetric is expected
        assert (verdict.witness_P is not None) is expected

    @pytest.mark.parametrize('metric, expected', classification.halee_sweep(), ids=str)
    def test_sweep(self, metric, expected):
        verdict = classification.classify_halee(metric)
        assert verdict.locally_symmetric is expected
        assert verdict.residuals.vanishes() is expected
        assert (verdict.solution is not None) is expected

    def test_json(self):
        data = classification.classify_halee(HaLeeMetric(HaLeeGroup.GD, D=2.0, mu=2.0, nu=3.0)).to_json()
        assert data['locally_symmetric'] is True
        assert data['group'] == 'GD'
        assert data['params'] == {'mu': 2.0, 'nu': 3.0, 'D': 2.0}
        assert data['solution_family'] == 'GDfamily'
        assert data['family'] == 'GD(2)'
        assert np.asarray(data['witness_P']).shape == (3, 3)

    def test_json_non_symmetric(self):
        data = classification.classify_halee(HaLeeMetric(HaLeeGroup.SU2, lam=2.0, mu=1.0, nu=1.0)).to_json()
        assert data['locally_symmetric'] is False
        assert 'witness_P' not in data
        assert 'solution_family' not in data
        assert data['residual'] > 0

    def test_moved_round_sphere(self, rng):
        mla = MetricLieAlgebra(catalog.su2(), MetricMatrix(3.0 * np.eye(3)))
        for _ in range(10):
            verdict = classification.classify(change_basis(mla, BasisChange(random_basis_change(rng, 4.0))))
            assert verdict.locally_symmetric
            assert verdict.solution is FamilyTag.ROUND_SU2
            assert verdict.family.family is AlgebraFamily.SU2
            assert_allclose(verdict.milnor_constants, [1 / math.sqrt(3.0)] * 3, rtol=0, atol=1e-10)

    def test_abelian(self):
        verdict = classification.classify(MetricLieAlgebra.orthonormal(catalog.abelian()))
        assert verdict.locally_symmetric
        assert verdict.nabla_r_residual == 0.0
        assert verdict.family.family is AlgebraFamily.ABELIAN




class TestGrids:
    def test_unimodular_grid(self):
        grid = classification.unimodular_grid()
        assert len(grid) == 343
        assert (0.0, 0.0, 0.0) in grid and (3.0, 3.0, 3.0) in grid

    def test_admissible_grid(self):
        grid = classification.admissible_grid()
        assert len(grid) > 200
        for a, b, c, d in grid:
            assert a + d > 0
            assert abs(a * c + b * d) <= 1e-12

    def test_unimodular_verify(self):
        report = classification.grid_verify(FrameKind.UNIMODULAR)
        assert len(report.points) == 343
        assert report.counterexamples == []
        assert report.max_on_residual() <= 1e-9
        assert report.min_off_residual() > 1e-3

    def test_nonunimodular_verify(self):
        report = classification.grid_verify('NonUnimodular')
        assert report.counterexamples == []
        assert report.solutions

    def test_single_point(self):
        (point,) = classification.grid_verify(FrameKind.UNIMODULAR, [(1.0, 1.0, 1.0)]).points
        assert point.consistent
        assert point.symmetric

    def test_thread_pool_keeps_order(self):
        grid = classification.unimodular_grid(step=1.0)
        serial   = classification.grid_verify(FrameKind.UNIMODULAR, grid)
        threaded = classification.grid_verify(FrameKind.UNIMODULAR, grid, workers=4)
        assert [p.constants for p in threaded.points] == [p.constants for p in serial.points]
        assert [p.symmetric for p in threaded.points] == [p.symmetric for p in serial.points]

    def test_wrong_arity(self):
        with pytest.raises(ValueError):
            classification.grid_verify(FrameKind.UNIMODULAR, [(1.0, 2.0, 3.0, 4.0)])
