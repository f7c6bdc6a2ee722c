import pytest

from src.dagger import canonical_positivity
from src.errors import FincatError, ValidationError
from src.herm import enumerate_fixed_points
from src.involutive import T_on_category, identity_involutive_functor
from src.positivity import (
    check_Tp_biequivalence,
    classes_to_positivity,
    close_under_transfer,
    dagger_functors_vs_fixed_points,
    herm_P,
    positive_classes,
    positive_unit,
    preserves_positivity,
    transfer_witness,
    validate_positivity,
)


class TestAxioms:
    def test_canonical_notion_on_b4(self, b4):
        P = canonical_positivity(b4.dagger)
        assert P.involution is T_on_category(b4.dagger)
        assert [p.key for p in P.positive_fixed_points()] == [('x', 'id_x')]
        assert len(herm_P(P.involution, P).objects) == 1

    def test_not_hermitian(self, b4):
        with pytest.raises(ValidationError) as exc:
            validate_positivity(T_on_category(b4.dagger), {'x': {'1'}})
        assert exc.value.codes == ['NotHermitian']

    def test_empty_on_object(self, b4):
        with pytest.raises(ValidationError) as exc:
            validate_positivity(T_on_category(b4.dagger), {'x': set()})
        assert exc.value.codes == ['EmptyOnObject']

    def test_unknown_object(self, b4):
        with pytest.raises(ValidationError) as exc:
            validate_positivity(T_on_category(b4.dagger), {'y': {'id_x'}})
        assert exc.value.codes == ['UnknownObject']

    def test_not_transfer_closed(self, bs3):
        with pytest.raises(ValidationError) as exc:
            validate_positivity(T_on_category(bs3.dagger), {'x': {'p021'}})
        assert set(exc.value.codes) == {'NotTransferClosed'}

    @pytest.mark.parametrize('fixture, extra', [('b4', 'B4eta1'), ('swap2', None)])
    def test_no_notion_without_fixed_points(self, fixture, extra, request):
        bundle = request.getfixturevalue(fixture)
        A = bundle.extra_involutions[extra] if extra else bundle.involution
        assert enumerate_fixed_points(A) == []
        with pytest.raises(ValidationError) as exc:
            validate_positivity(A, {})
        assert set(exc.value.codes) == {'EmptyOnObject'}
        with pytest.raises(FincatError) as exc:
            classes_to_positivity(A, [])
        assert exc.value.code == 'NotSurjectiveOntoPi0'

    def test_every_object_needs_a_positive_point(self, walk):
        with pytest.raises(ValidationError) as exc:
            validate_positivity(T_on_category(walk.dagger), {'a': {'id_a'}})
        assert exc.value.codes == ['EmptyOnObject']


class TestConstruction:
    def test_close_under_transfer(self, bs3):
        P = close_under_transfer(T_on_category(bs3.dagger), {'x': {'p021'}})
        assert P.sets == {'x': frozenset({'p021', 'p102', 'p210'})}

    def test_classes_to_positivity(self, walk):
        P = classes_to_positivity(T_on_category(walk.dagger), [('a', 'id_a')])
        assert P.sets == {'a': frozenset({'id_a'}), 'b': frozenset({'id_b'})}

    def test_selection_must_cover_every_class_of_objects(self, b4):
        with pytest.raises(FincatError) as exc:
            classes_to_positivity(T_on_category(b4.dagger), [])
        assert exc.value.code == 'NotSurjectiveOntoPi0'

    def test_every_class_selection(self, b4):
        A = T_on_category(b4.dagger)
        P = classes_to_positivity(A, [p.key for p in enumerate_fixed_points(A)])
        assert P.sets == {'x': frozenset({'id_x', '2'})}
        assert len(positive_classes(A, P)) == 2


class TestPreservation:
    def test_identity(self, b4):
        A = T_on_category(b4.dagger)
        canonical = canonical_positivity(b4.dagger)
        everything = validate_positivity(A, {'x': {'id_x', '2'}})
        Id = identity_involutive_functor(A)
        assert preserves_positivity(Id, canonical, canonical)
        assert preserves_positivity(Id, canonical, everything)
        assert not preserves_positivity(Id, everything, canonical)


class TestBiequivalence:
    @pytest.mark.parametrize('fixture', ['one', 'b3', 'b4', 'bs3', 'walk', 'swap2', 'm1f4', 'product',
                                         pytest.param('m2f4', marks=pytest.mark.slow)])
    def test_holds(self, fixture, request):
        D = request.getfixturevalue(fixture).dagger
        verdict = check_Tp_biequivalence(D)
        assert verdict.unit_dagger_equivalence
        assert verdict.counit_pcat_equivalence
        assert verdict.failures == []

    def test_missing_factorisation_is_a_failed_verdict(self, b4, monkeypatch):
        monkeypatch.setattr('src.positivity.transfer_witness', lambda D, c, h: None)
        verdict = check_Tp_biequivalence(b4.dagger)
        assert not verdict.unit_dagger_equivalence
        assert verdict.counit_pcat_equivalence
        assert verdict.failures == ["tp_unit_dagger_equivalence: positive (x, id_x) is not a^dag . a "
                                    "for any isomorphism a"]
        assert verdict.witnesses['factorisations'] == {}

    def test_positive_unit(self, b4):
        P = canonical_positivity(b4.dagger)
        U = positive_unit(b4.dagger, P)
        assert U.obj('x') == ('x', 'id_x')

    def test_transfer_witness(self, b4, m1f4):
        assert transfer_witness(b4.dagger, 'x', 'id_x') == '1'
        assert transfer_witness(b4.dagger, 'x', '2') is None
        assert transfer_witness(m1f4.dagger, '1', 'id_1') == 'id_1'


class TestDaggerFunctorsAgainstFixedPoints:
    def test_point_into_b4(self, one, b4):
        report = dagger_functors_vs_fixed_points(one.dagger, b4.dagger)
        assert len(report.fixed_points) == 2
        assert len(report.dagger_functors) == 1
        assert len(report.essential_image) == 1
        assert report.essential_image == report.positivity_preserving
        assert report.embedding_fully_faithful
        assert report.holds

    def test_b3_endofunctors(self, b3):
        report = dagger_functors_vs_fixed_points(b3.dagger, b3.dagger)
        assert len(report.dagger_functors) == 3
        assert report.holds
