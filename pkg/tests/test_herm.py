import gc
import weakref

import pytest

from src.dagger import (
    dagger_violations,
    has_dagger_quasi_inverse,
    is_dagger_equivalence,
    is_indefinite,
    is_unitary,
    unitary_iso_classes,
)
from src.errors import NotIso
from src.fincat import FunctorData, NatTransData, identity_functor
from src.gens import generate, preset
from src.herm import (
    HermitianFixedPoint,
    adjoint_wrt,
    check_triangle_identities,
    counit_equivalence,
    counit_K,
    dual_fixed_point,
    enumerate_fixed_points,
    herm_completion,
    herm_functor,
    herm_is_functorial,
    herm_nat_trans,
    is_fixed_point,
    restrict_exists_fix,
    transfer,
    transfer_orbit,
    unit_U,
    unitary_classes_via_transfer,
)
from src.involutive import T_on_category, T_on_functor, T_on_nat_trans, involutive_functor_violations


def keys(points):
    return {p.key for p in points}


DAGGERS = ['one', 'b3', 'b4', 'bs3', 'walk', 'swap2', 'm1f4', 'product']

INVOLUTIONS = [('one', None), ('b3', None), ('b4', None), ('b4', 'B4eta1'), ('bs3', None), ('walk', None),
               ('swap2', None), ('chain', None), ('m1f4', None), ('product', None)]

INDEFINITE = {'one': True, 'b3': True, 'b4': False, 'bs3': False, 'walk': True, 'swap2': True,
              'm1f4': True, 'product': True, 'm2f4': True}


def involution_of(request, fixture, extra=None):
    bundle = request.getfixturevalue(fixture)
    return bundle.extra_involutions[extra] if extra else bundle.involution


class TestFixedPoints:
    def test_b4(self, b4):
        A = T_on_category(b4.dagger)
        assert keys(enumerate_fixed_points(A)) == {('x', 'id_x'), ('x', '2')}
        assert is_fixed_point(A, 'x', '2')
        assert not is_fixed_point(A, 'x', '1')

    def test_empty_cases(self, b4, swap2):
        assert enumerate_fixed_points(b4.extra_involutions['B4eta1']) == []
        assert enumerate_fixed_points(swap2.involution) == []

    def test_b3_walk_and_symmetric_group(self, b3, walk, bs3):
        assert keys(enumerate_fixed_points(T_on_category(b3.dagger))) == {('x', 'id_x')}
        assert keys(enumerate_fixed_points(T_on_category(walk.dagger))) == {('a', 'id_a'), ('b', 'id_b')}
        assert keys(enumerate_fixed_points(T_on_category(bs3.dagger))) == {
            ('x', 'id_x'), ('x', 'p021'), ('x', 'p102'), ('x', 'p210')}

    def test_chain_reversal(self, chain):
        assert keys(enumerate_fixed_points(chain.involution)) == {('b', 'id_b')}

    def test_small_matrices(self, m1f4):
        assert keys(enumerate_fixed_points(m1f4.involution)) == {('0', 'id_0'), ('1', 'id_1')}

    @pytest.mark.slow
    def test_hermitian_invertible_2x2(self, m2f4):
        points = enumerate_fixed_points(m2f4.involution)
        assert len(points) == 12
        assert sum(1 for p in points if p.object == '2') == 10


class TestCompletion:
    def test_b4_completion(self, b4):
        A = T_on_category(b4.dagger)
        H = herm_completion(A)
        assert H is herm_completion(A)
        assert len(H.objects) == 2
        assert H.num_morphisms() == 16
        assert dagger_violations(H.dagger) == []
        assert is_indefinite(H.dagger)

    def test_adjoint(self, b4):
        A = T_on_category(b4.dagger)
        assert adjoint_wrt(A, '2', '2', '1') == '3'
        assert adjoint_wrt(A, 'id_x', '2', '1') == '1'
        H = herm_completion(A)
        p, q = ('x', 'id_x'), ('x', '2')
        assert H.dagger.adjoint(('1', p, q)) == ('1', q, p)

    def test_composition_in_completion(self, b4):
        H = herm_completion(T_on_category(b4.dagger))
        p, q = ('x', 'id_x'), ('x', '2')
        assert H.compose(('1', q, p), ('1', p, q)) == ('2', p, p)
        assert H.identity(q) == ('id_x', q, q)

    def test_empty_completion(self, b4):
        H = herm_completion(b4.extra_involutions['B4eta1'])
        assert H.objects == ()
        assert dagger_violations(H.dagger) == []

    @pytest.mark.parametrize('fixture, extra', INVOLUTIONS)
    def test_completion_is_an_indefinite_dagger_category(self, fixture, extra, request):
        H = herm_completion(involution_of(request, fixture, extra))
        assert dagger_violations(H.dagger) == []
        assert is_indefinite(H.dagger)

    def test_completions_live_on_their_involution(self):
        bundle = generate(preset('cyclic', order=3))
        A = T_on_category(bundle.dagger)
        assert A is bundle.dagger.involution
        H = herm_completion(A)
        assert A.completions == {None: H}
        released = weakref.ref(A)
        del bundle, A, H
        gc.collect()
        assert released() is None


class TestTransfer:
    def test_transfer(self, b4):
        A = T_on_category(b4.dagger)
        assert transfer(A, 'x', '2', '1') == HermitianFixedPoint('x', '2')

    def test_transfer_needs_iso(self, m1f4):
        with pytest.raises(NotIso):
            transfer(m1f4.involution, '1', 'id_1', 'm1x1_0')

    def test_orbits(self, bs3):
        A = T_on_category(bs3.dagger)
        assert keys(transfer_orbit(A, 'x', 'p021')) == {('x', 'p021'), ('x', 'p102'), ('x', 'p210')}

    def test_classes(self, b4, walk, bs3):
        assert len(unitary_classes_via_transfer(T_on_category(b4.dagger))) == 2
        assert unitary_classes_via_transfer(T_on_category(walk.dagger)) == {
            ('a', 'id_a'): (('a', 'id_a'), ('b', 'id_b'))}
        sizes = sorted(len(m) for m in unitary_classes_via_transfer(T_on_category(bs3.dagger)).values())
        assert sizes == [1, 3]

    def test_classes_agree_with_unitaries(self, bs3):
        A = T_on_category(bs3.dagger)
        oracle = unitary_iso_classes(herm_completion(A).dagger)
        assert unitary_classes_via_transfer(A, cross_check=False) == oracle

    def test_dual(self, b4):
        A = T_on_category(b4.dagger)
        assert dual_fixed_point(A, 'x', '2') == HermitianFixedPoint('x', '2')

    @pytest.mark.slow
    def test_matrix_classes(self, m2f4):
        classes = unitary_classes_via_transfer(m2f4.involution)
        assert len(classes) == 3
        assert sorted(len(m) for m in classes.values()) == [1, 1, 10]

    @pytest.mark.slow
    def test_unitary_group_of_order_18(self, m2f4):
        H = herm_completion(m2f4.involution)
        p = ('2', 'id_2')
        assert sum(1 for u in H.hom(p, p) if is_unitary(H.dagger, u)) == 18


class TestFunctoriality:
    def neg(self, b4):
        C = b4.category
        return FunctorData(C, C, {'x': 'x'}, {'id_x': 'id_x', '1': '3', '2': '2', '3': '1'}, name='Neg')

    def test_herm_of_negation(self, b4):
        Ti = T_on_functor(b4.dagger, b4.dagger, self.neg(b4))
        HF = herm_functor(Ti)
        assert HF.obj(('x', '2')) == ('x', '2')
        assert HF.mor(('1', ('x', 'id_x'), ('x', '2'))) == ('3', ('x', 'id_x'), ('x', '2'))
        assert herm_is_functorial(Ti, Ti)

    def test_herm_nat_trans(self, b4):
        F = identity_functor(b4.category)
        ai = T_on_nat_trans(b4.dagger, b4.dagger, F, F, NatTransData(F, F, {'x': '2'}))
        alpha = herm_nat_trans(ai)
        assert {alpha.at(p)[0] for p in alpha.source.objects} == {'2'}


class TestUnitAndCounit:
    @pytest.mark.parametrize('fixture', DAGGERS + [pytest.param('m2f4', marks=pytest.mark.slow)])
    def test_unit_is_a_dagger_equivalence_exactly_when_indefinite(self, fixture, request):
        D = request.getfixturevalue(fixture).dagger
        U = unit_U(D)
        verdict = is_dagger_equivalence(D, U.target.dagger, U)
        assert verdict.fully_faithful
        assert verdict.holds == bool(is_indefinite(D)) == INDEFINITE[fixture]

    @pytest.mark.parametrize('fixture', ['one', 'b3', 'b4', 'walk', 'swap2', 'm1f4', 'product'])
    def test_quasi_inverse_search_agrees_with_the_direct_check(self, fixture, request):
        D = request.getfixturevalue(fixture).dagger
        U = unit_U(D)
        expected = is_dagger_equivalence(D, U.target.dagger, U).holds
        assert has_dagger_quasi_inverse(D, U.target.dagger, U) == expected == INDEFINITE[fixture]

    def test_unit_misses_a_class_for_b4(self, b4):
        U = unit_U(b4.dagger)
        verdict = is_dagger_equivalence(b4.dagger, U.target.dagger, U)
        assert verdict.fully_faithful
        assert not verdict.unitarily_surjective

    def test_counit_is_involutive(self, b4):
        Ki = counit_K(T_on_category(b4.dagger))
        assert involutive_functor_violations(Ki) == []
        assert Ki.at(('x', '2')) == '2'

    def test_restriction_to_objects_with_fixed_points(self, b4, chain, swap2):
        assert restrict_exists_fix(T_on_category(b4.dagger)).objects == ('x',)
        assert restrict_exists_fix(chain.involution).objects == ('b',)
        assert restrict_exists_fix(swap2.involution).objects == ()

    @pytest.mark.parametrize('fixture, extra', INVOLUTIONS)
    def test_counit_is_an_involutive_equivalence(self, fixture, extra, request):
        verdict = counit_equivalence(involution_of(request, fixture, extra))
        assert verdict.holds, verdict.witness

    @pytest.mark.parametrize('fixture', DAGGERS)
    def test_triangles_for_daggers(self, fixture, request):
        verdict = check_triangle_identities(request.getfixturevalue(fixture).dagger)
        assert verdict.checks == {'triangle_herm_k_after_u': True, 'triangle_k_after_t_u': True}
        assert verdict.failures == {}

    @pytest.mark.parametrize('fixture, extra', [('b4', 'B4eta1'), ('swap2', None), ('chain', None)])
    def test_triangle_for_an_involution(self, fixture, extra, request):
        verdict = check_triangle_identities(involution_of(request, fixture, extra))
        assert verdict.checks == {'triangle_herm_k_after_u': True}
