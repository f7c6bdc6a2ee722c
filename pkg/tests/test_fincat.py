import pytest

from src.errors import CompositionError, SearchSpaceExceeded, SourceTargetMismatch, UnknownMorphism, ValidationError
from src.fincat import (
    FunctorData,
    NatTransData,
    compose_functors,
    enumerate_functors,
    enumerate_nat_transformations,
    full_subcategory,
    identity_functor,
    identity_nat_trans,
    is_equivalence,
    iso_classes,
    opposite,
    promote_to_adjoint_equivalence,
    snake_violations,
    validate_category,
    validate_functor,
    validate_nat_trans,
    vertical_compose,
)


def arrow_data(**changes):
    data = {
        'name': 'Arrow',
        'objects': ['a', 'b'],
        'morphisms': [('id_a', 'a', 'a'), ('id_b', 'b', 'b'), ('f', 'a', 'b')],
        'composition': {('id_a', 'id_a'): 'id_a', ('id_b', 'id_b'): 'id_b',
                        ('id_b', 'f'): 'f', ('f', 'id_a'): 'f'},
    }
    data.update(changes)
    return data


def monoid_data(table):
    """One object x; table maps (g, f) of the non-identity elements to their product."""
    elements = sorted({g for g, _ in table})
    comp = dict(table)
    for m in elements + ['id_x']:
        comp[('id_x', m)] = m
        comp[(m, 'id_x')] = m
    return {'name': 'M', 'objects': ['x'],
            'morphisms': [(m, 'x', 'x') for m in ['id_x'] + elements], 'composition': comp}


class TestValidateCategory:
    def test_arrow_category(self):
        C = validate_category(arrow_data())
        assert C.hom('a', 'b') == ('f',)
        assert C.hom('b', 'a') == ()
        assert C.identity('a') == 'id_a'
        assert C.compose('f', 'id_a') == 'f'
        assert C.num_morphisms() == 3
        assert not C.is_iso('f')
        assert C.is_iso('id_b')

    def test_composition_accepts_triples(self):
        triples = [(g, f, h) for (g, f), h in arrow_data()['composition'].items()]
        assert validate_category(arrow_data(composition=triples)) == validate_category(arrow_data())

    def test_missing_composite(self):
        comp = dict(arrow_data()['composition'])
        del comp[('id_b', 'f')]
        with pytest.raises(ValidationError) as exc:
            validate_category(arrow_data(composition=comp))
        assert 'MissingComposite' in exc.value.codes

    def test_wrongly_typed_composite(self):
        comp = dict(arrow_data()['composition'])
        comp[('f', 'id_b')] = 'f'
        with pytest.raises(ValidationError) as exc:
            validate_category(arrow_data(composition=comp))
        assert 'TypeMismatch' in exc.value.codes

    def test_missing_identity(self):
        data = arrow_data(morphisms=[('id_a', 'a', 'a'), ('f', 'a', 'b')],
                          composition={('id_a', 'id_a'): 'id_a', ('f', 'id_a'): 'f'})
        with pytest.raises(ValidationError) as exc:
            validate_category(data)
        assert 'MissingIdentity' in exc.value.codes

    def test_identity_law_failure(self):
        comp = dict(arrow_data()['composition'])
        data = arrow_data(morphisms=arrow_data()['morphisms'] + [('g', 'a', 'b')])
        comp.update({('id_b', 'g'): 'f', ('g', 'id_a'): 'g'})
        data['composition'] = comp
        with pytest.raises(ValidationError) as exc:
            validate_category(data)
        assert exc.value.codes == ['IdentityLawFailure']

    def test_associativity_failure(self):
        table = {('a', 'a'): 'b', ('a', 'b'): 'a', ('b', 'a'): 'a', ('b', 'b'): 'a'}
        with pytest.raises(ValidationError) as exc:
            validate_category(monoid_data(table))
        assert set(exc.value.codes) == {'AssociativityFailure'}

    def test_z2_is_a_category(self):
        C = validate_category(monoid_data({('s', 's'): 'id_x'}))
        assert C.inverse('s') == 's'


class TestAccessors:
    def test_compose_errors(self, walk):
        C = walk.category
        with pytest.raises(CompositionError):
            C.compose('a_to_b', 'a_to_b')
        with pytest.raises(UnknownMorphism):
            C.compose('nope', 'a_to_b')

    def test_compose_many_reads_right_to_left(self, walk):
        C = walk.category
        assert C.compose_many('a_to_b', 'b_to_a', 'a_to_b') == 'a_to_b'

    def test_block_indices(self, b4):
        C = b4.category
        block = C.block('x', 'x', 'x')
        hom = C.hom('x', 'x')
        assert block.shape == (4, 4)
        for i, g in enumerate(hom):
            for j, f in enumerate(hom):
                assert hom[block[i, j]] == C.compose(g, f)

    def test_opposite(self, walk):
        C = walk.category
        op = opposite(C)
        assert opposite(op) is C
        assert op.hom('b', 'a') == C.hom('a', 'b')
        assert op.compose('a_to_b', 'b_to_a') == C.compose('b_to_a', 'a_to_b')

    def test_full_subcategory(self, walk):
        sub = full_subcategory(walk.category, ['a'])
        assert sub.objects == ('a',)
        assert list(sub.morphism_names()) == ['id_a']

    def test_iso_classes(self, walk, chain):
        assert iso_classes(walk.category) == {'a': ('a', 'b')}
        assert len(iso_classes(chain.category)) == 3


class TestFunctors:
    def test_endofunctors_of_cyclic_groups(self, b3, b4):
        assert len(enumerate_functors(b3.category, b3.category)) == 3
        assert len(enumerate_functors(b4.category, b4.category)) == 4

    def test_enumeration_is_sorted_and_valid(self, chain):
        functors = enumerate_functors(chain.category, chain.category)
        assert [F.sort_key() for F in functors] == sorted(F.sort_key() for F in functors)
        for F in functors:
            validate_functor(F)

    def test_cap(self, chain):
        with pytest.raises(SearchSpaceExceeded) as exc:
            enumerate_functors(chain.category, chain.category, cap=2)
        assert exc.value.bound == 27

    def test_bad_functor(self, b4):
        C = b4.category
        F = FunctorData(C, C, {'x': 'x'}, {'id_x': 'id_x', '1': '1', '2': '1', '3': '3'})
        with pytest.raises(ValidationError) as exc:
            validate_functor(F)
        assert set(exc.value.codes) == {'NotAFunctor'}

    def test_compose_with_identity(self, b4):
        F = enumerate_functors(b4.category, b4.category)[-1]
        assert compose_functors(identity_functor(b4.category), F) == F

    def test_compose_mismatch(self, b3, b4):
        with pytest.raises(SourceTargetMismatch):
            compose_functors(identity_functor(b3.category), identity_functor(b4.category))


class TestNaturalTransformations:
    def test_center_of_groups(self, b4, bs3):
        idb4 = identity_functor(b4.category)
        assert len(enumerate_nat_transformations(idb4, idb4)) == 4
        ids3 = identity_functor(bs3.category)
        assert [a.at('x') for a in enumerate_nat_transformations(ids3, ids3)] == ['id_x']

    def test_vertical_composite(self, b4):
        F = identity_functor(b4.category)
        one = NatTransData(F, F, {'x': '1'})
        three = NatTransData(F, F, {'x': '3'})
        validate_nat_trans(one)
        assert vertical_compose(three, one).at('x') == 'id_x'
        assert vertical_compose(one, identity_nat_trans(F)) == one

    def test_unnatural(self, bs3):
        F = identity_functor(bs3.category)
        with pytest.raises(ValidationError) as exc:
            validate_nat_trans(NatTransData(F, F, {'x': 'p102'}))
        assert 'NotNatural' in exc.value.codes


class TestEquivalences:
    def test_point_into_walk(self, one, walk):
        F = FunctorData(one.category, walk.category, {'x': 'a'}, {'id_x': 'id_a'}, name='pick')
        verdict = is_equivalence(F)
        assert verdict.holds
        adj = promote_to_adjoint_equivalence(F, verdict.quasi_inverse, verdict.alpha, verdict.beta)
        assert snake_violations(adj) == []

    def test_collapse_is_not_full_and_faithful(self, b4, one):
        C = b4.category
        F = FunctorData(C, one.category, {'x': 'x'}, {f: 'id_x' for f in C.morphism_names()})
        verdict = is_equivalence(F)
        assert not verdict.fully_faithful
        assert not verdict
        assert verdict.witness

    def test_missing_object(self, one, swap2):
        F = FunctorData(one.category, swap2.category, {'x': 'c0'}, {'id_x': 'id_c0'})
        verdict = is_equivalence(F)
        assert verdict.fully_faithful
        assert not verdict.essentially_surjective
        assert 'c1' in verdict.witness
