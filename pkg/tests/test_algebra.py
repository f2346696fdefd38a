import math
import numpy as np
import pytest
from hypothesis import given, seed, settings, strategies as st
from numpy.testing import assert_allclose, assert_array_equal
from liesym import algebra, catalog
from liesym.algebra import BasisChange, MetricLieAlgebra, MetricMatrix, StructureTensor
from liesym.errors import DegenerateMetric, InputError, NotALieAlgebra, SingularBasisChange
from liesym.milnor import milnor_algebra
from liesym.verify import random_basis_change, random_spd


finite = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)


def broken_tensor() -> StructureTensor:
    # [e1,e2] = e3, [e1,e3] = e3, [e2,e3] = e1
    return StructureTensor.from_brackets({
        (0, 1): (0.0, 0.0, 1.0),
        (0, 2): (0.0, 0.0, 1.0),
        (1, 2): (1.0, 0.0, 0.0),
    })




class TestStructureTensor:
    def test_full_is_antisymmetric(self):
        st_ = catalog.g_d(3.0)
        assert_array_equal(st_.full, -np.einsum('ijk->jik', st_.full))

    def test_arrays_are_readonly(self):
        st_ = catalog.su2()
        with pytest.raises(ValueError):
            st_.full[0, 1, 2] = 5.0

    def test_rejects_non_finite(self):
        with pytest.raises(InputError):
            StructureTensor(np.full((3, 3), np.nan))

    def test_from_brackets_lower_pair(self):
        st_ = StructureTensor.from_brackets({(2, 0): (0.0, -1.0, 0.0)})
        assert_array_equal(algebra.bracket(st_, [1, 0, 0], [0, 0, 1]), [0.0, 1.0, 0.0])

    def test_from_brackets_diagonal(self):
        with pytest.raises(InputError):
            StructureTensor.from_brackets({(1, 1): (1.0, 0.0, 0.0)})

    def test_from_brackets_conflict(self):
        with pytest.raises(InputError):
            StructureTensor.from_brackets({(0, 1): (0.0, 0.0, 1.0), (1, 0): (0.0, 0.0, 1.0)})

    def test_from_records(self):
        st_ = StructureTensor.from_records([[1, 2, 3, 1.0], [3, 1, 2, 1.0], [2, 3, 1, 1.0]])
        assert st_ == milnor_algebra((1.0, 1.0, 1.0))

    def test_from_records_antisymmetric_duplicate(self):
        st_ = StructureTensor.from_records([[1, 2, 3, 2.0], [2, 1, 3, -2.0]])
        assert st_.full[0, 1, 2] == 2.0

    @pytest.mark.parametrize('rows', [
        [[1, 2, 3, 1.0], [2, 1, 3, 1.0]],
        [[1, 1, 3, 1.0]],
        [[1, 4, 3, 1.0]],
        [[1, 2, 3]],
        [["a", 2, 3, 1.0]],
    ])
    def test_from_records_rejects(self, rows):
        with pytest.raises(InputError):
            StructureTensor.from_records(rows)

    def test_records_roundtrip(self):
        st_ = catalog.g_d(5.0)
        assert StructureTensor.from_records(st_.to_records()) == st_

    def test_from_tensor_shape(self):
        with pytest.raises(InputError):
            StructureTensor.from_tensor(np.zeros((3, 3)))




class TestBracket:
    def test_su2_milnor_frame(self):
        st_ = milnor_algebra((1.0, 1.0, 1.0))
        assert_array_equal(algebra.bracket(st_, [1, 0, 0], [0, 1, 0]), [0.0, 0.0, 1.0])

    def test_e0tilde2(self):
        assert_array_equal(algebra.bracket(catalog.e0tilde2(), [0, 0, 1], [1, 0, 0]), [0.0, -1.0, 0.0])

    @seed(1)
    @given(st.lists(finite, min_size=3, max_size=3))
    def test_self_bracket_vanishes(self, u):
        assert_array_equal(algebra.bracket(catalog.su2(), u, u), np.zeros(3))

    def test_ad_columns(self):
        st_ = catalog.g_d(2.0)
        x = np.array([0.3, -1.2, 0.7])
        for j in range(3):
            e = np.eye(3)[j]
            assert_allclose(algebra.ad(st_, x)[:, j], algebra.bracket(st_, x, e), rtol=0, atol=1e-15)




class TestJacobi:
    @pytest.mark.parametrize('st_', [
        catalog.abelian(),
        catalog.e0tilde2(),
        catalog.su2(),
        catalog.g_i(),
        catalog.g_d(0.0),
        catalog.g_d(0.5),
        catalog.g_d(2.0),
        catalog.g_d(5.0),
    ])
    def test_catalog_algebras(self, st_):
        assert algebra.jacobi_residual(st_) == 0.0
        algebra.require_lie_algebra(st_)

    @seed(2)
    @given(finite, finite, finite)
    def test_unimodular_milnor_brackets_for_any_constants(self, a, b, c):
        assert algebra.jacobi_residual(milnor_algebra((a, b, c))) <= 1e-12

    def test_perturbed_su2_stays_lie(self):
        st_ = StructureTensor.from_brackets({
            (0, 1): (0.0, 0.0, 1.1),
            (1, 2): (1.0, 0.0, 0.0),
            (2, 0): (0.0, 1.0, 0.0),
        })
        assert algebra.jacobi_residual(st_) == 0.0

    def test_broken_tensor(self):
        assert algebra.jacobi_residual(broken_tensor()) == pytest.approx(1.0)
        with pytest.raises(NotALieAlgebra):
            algebra.require_lie_algebra(broken_tensor())




class TestUnimodularity:
    def test_su2(self):
        ok, traces = algebra.unimodularity(catalog.su2())
        assert ok
        assert_array_equal(traces, np.zeros(3))

    def test_abelian(self):
        assert algebra.unimodularity(catalog.abelian())[0]

    def test_g_i(self):
        ok, traces = algebra.unimodularity(catalog.g_i())
        assert not ok
        assert_array_equal(traces, [0.0, 0.0, 2.0])

    @pytest.mark.parametrize('st_, expected', [
        (catalog.su2(), True),
        (catalog.e0tilde2(), True),
        (catalog.g_i(), False),
        (catalog.g_d(3.0), False),
    ])
    def test_basis_invariant(self, rng, st_, expected):
        for _ in range(20):
            p = random_basis_change(rng, 5.0)
            assert algebra.unimodularity(algebra.transform_constants(st_, p))[0] is expected




class TestMetricMatrix:
    def test_rejects_asymmetric(self):
        with pytest.raises(DegenerateMetric):
            MetricMatrix(np.array([[1.0, 0.1, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]))

    @pytest.mark.parametrize('g', [
        np.diag([1.0, -1.0, 1.0]),
        np.diag([1.0, 1.0, 0.0]),
        np.array([[1.0, 2.0, 0.0], [2.0, 1.0, 0.0], [0.0, 0.0, 1.0]]),
    ])
    def test_rejects_indefinite(self, g):
        with pytest.raises(DegenerateMetric):
            MetricMatrix(g)

    def test_orthonormalizer(self, rng):
        for _ in range(20):
            mla = MetricLieAlgebra(catalog.su2(), MetricMatrix.symmetrized(random_spd(rng)))
            p = mla.orthonormalizer()
            assert p.det > 0
            assert_allclose(p.p.T @ mla.g @ p.p, np.eye(3), rtol=0, atol=1e-12)

    def test_orthonormalize(self):
        mla = MetricLieAlgebra(catalog.e0tilde2(), MetricMatrix(np.diag([1.0, 4.0, 9.0])))
        ortho, p = mla.orthonormalize()
        assert ortho.is_orthonormal()
        assert_allclose(p.p, np.diag([1.0, 0.5, 1.0 / 3.0]), rtol=0, atol=1e-15)




class TestChangeBasis:
    def test_singular(self):
        with pytest.raises(SingularBasisChange):
            BasisChange(np.array([[1.0, 2.0, 0.0], [2.0, 4.0, 0.0], [0.0, 0.0, 1.0]]))

    def test_identity(self):
        mla = MetricLieAlgebra(catalog.g_d(2.0), MetricMatrix(np.diag([1.0, 2.0, 3.0])))
        out = algebra.change_basis(mla, BasisChange.identity())
        assert out == mla

    def test_roundtrip(self, rng):
        for st_ in (catalog.su2(), catalog.e0tilde2(), catalog.g_d(3.0)):
            mla = MetricLieAlgebra(st_, MetricMatrix.symmetrized(random_spd(rng)))
            p = BasisChange(random_basis_change(rng, 5.0))
            back = algebra.change_basis(algebra.change_basis(mla, p), p.inverse())
            assert_allclose(back.st.full, mla.st.full, rtol=0, atol=1e-12)
            assert_allclose(back.g, mla.g, rtol=0, atol=1e-12)

    @pytest.mark.parametrize('nu', [0.25, 1.0, 4.0])
    def test_e0tilde2_frame(self, nu):
        mla = MetricLieAlgebra(catalog.e0tilde2(), MetricMatrix(np.diag([1.0, 1.0, nu])))
        out = algebra.change_basis(mla, np.diag([1.0, 1.0, 1 / math.sqrt(nu)]))
        s = 1 / math.sqrt(nu)
        assert_allclose(out.g, np.eye(3), rtol=0, atol=1e-15)
        assert_allclose(algebra.bracket(out.st, [0, 1, 0], [0, 0, 1]), [-s, 0.0, 0.0], rtol=0, atol=1e-15)
        assert_allclose(algebra.bracket(out.st, [0, 0, 1], [1, 0, 0]), [0.0, -s, 0.0], rtol=0, atol=1e-15)

    def test_then_composes(self, rng):
        mla = MetricLieAlgebra(catalog.su2(), MetricMatrix.identity())
        p, q = BasisChange(random_basis_change(rng, 3.0)), BasisChange(random_basis_change(rng, 3.0))
        two_steps = algebra.change_basis(algebra.change_basis(mla, p), q)
        one_step  = algebra.change_basis(mla, p.then(q))
        assert_allclose(two_steps.st.full, one_step.st.full, rtol=0, atol=1e-10)
        assert_allclose(two_steps.g, one_step.g, rtol=0, atol=1e-10)

    @settings(deadline=None)
    @seed(3)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_jacobi_preserved(self, n):
        rng = np.random.default_rng(n)
        out = algebra.transform_constants(catalog.g_d(2.0), random_basis_change(rng, 5.0))
        algebra.require_lie_algebra(out)
