import os

import pytest

from src.dagger import canonical_positivity
from src.dsl import _DeclBuilder, document_from_structures, parse, parse_file, print_document
from src.errors import DslError, FincatError, InvalidSpec, ValidationError
from src.gens import bundle_to_document
from src.herm import enumerate_fixed_points
from src.involutive import T_on_category

B3_TEXT = """
category B3 {
  objects: x;
  morphisms: g : x -> x  h : x -> x;
  compose: g . g = h  g . h = id_x  h . g = id_x  h . h = g;
}
"""


def diagnostics(text):
    with pytest.raises(DslError) as exc:
        parse(text)
    return exc.value.diagnostics


class TestParsing:
    def test_b4_declarations(self, load_fixture, b4):
        doc = load_fixture('b4.fincat')
        assert sorted(doc.categories) == ['B4', 'One']
        assert sorted(doc.daggers) == ['D', 'DOne']
        assert sorted(doc.involutions) == ['B4eta1', 'TB4']
        assert list(doc.positivities) == ['P']
        assert sorted(doc.functors) == ['Collapse', 'Neg']

        C = doc.category('B4')
        assert list(C.morphism_names()) == ['id_x', '1', '2', '3']
        for g in ('1', '2', '3'):
            for f in ('1', '2', '3'):
                assert C.compose(g, f) == b4.category.compose(g, f)

    def test_identity_entries_are_implicit(self):
        spelled_out = parse(B3_TEXT.replace('h . h = g;', 'h . h = g  id_x . g = g;'))
        assert spelled_out == parse(B3_TEXT)

    def test_printing_is_canonical(self, fixtures_dir):
        for name in os.listdir(fixtures_dir):
            if name == 'broken.fincat':
                continue
            doc, _ = parse_file(os.path.join(fixtures_dir, name))
            text = print_document(doc)
            assert print_document(parse(text)) == text

    def test_lookup_of_missing_names(self, load_fixture):
        doc = load_fixture('b4.fincat')
        with pytest.raises(FincatError) as exc:
            doc.dagger('E')
        assert exc.value.code == 'UnresolvedReference'
        with pytest.raises(FincatError):
            doc.anti_involutive('Nope')


class TestDiagnostics:
    def test_lex_error(self):
        (d,) = diagnostics('category A { objects: $; morphisms: ; }')
        assert d.code == 'LexError'
        assert (d.line, d.column) == (1, 23)

    def test_parse_error(self):
        (d,) = diagnostics('category A {')
        assert d.code == 'ParseError'

    def test_duplicate_name(self):
        found = diagnostics('category A { objects: x; morphisms: ; }\ncategory A { objects: y; morphisms: ; }')
        assert [d.code for d in found] == ['DuplicateName']
        assert found[0].line == 2

    def test_unresolved_composite(self, fixtures_dir):
        with pytest.raises(DslError) as exc:
            parse_file(os.path.join(fixtures_dir, 'broken.fincat'))
        (d,) = exc.value.diagnostics
        assert d.code == 'UnresolvedReference'
        assert (d.line, d.column) == (9, 5)
        assert str(d).startswith('9:5: UnresolvedReference')

    def test_unknown_category(self):
        found = diagnostics('dagger D on Nowhere { }')
        assert [d.code for d in found] == ['UnresolvedReference']

    def test_builder_errors_point_at_the_declaration(self, monkeypatch):
        def refuse(self, items):
            raise InvalidSpec('dagger block refused')

        monkeypatch.setattr(_DeclBuilder, 'dagger', refuse)
        found = diagnostics(B3_TEXT + 'dagger D on B3 { g -> h  h -> g }\n')
        assert [d.code for d in found] == ['ParseError']
        assert found[0].line == 7
        assert found[0].column > 0
        assert 'dagger block refused' in found[0].message

    def test_failed_axioms_are_reported(self):
        found = diagnostics(B3_TEXT + 'dagger E on B3 { g -> h  h -> h }\n')
        assert found
        assert {d.code for d in found} == {'ValidationError'}

    def test_positivity_on_wrong_morphism(self):
        found = diagnostics(B3_TEXT + """
dagger D on B3 { g -> h  h -> g }
positivity P on D { x: { g } }
""")
        assert {d.code for d in found} == {'ValidationError'}
        assert any('NotHermitian' in d.message for d in found)


class TestStructures:
    def test_dagger_names_its_involution(self, load_fixture):
        doc = load_fixture('b4.fincat')
        assert doc.anti_involutive('D') is T_on_category(doc.dagger('D'))
        assert doc.anti_involutive('TB4') is doc.involutions['TB4']

    def test_involutive_functors(self, load_fixture):
        doc = load_fixture('b4.fincat')
        T = doc.anti_involutive('TB4')
        assert doc.involutive_functor('Neg', T, T).at('x') == 'id_x'
        assert doc.involutive_functor('Collapse', T, T).at('x') == 'id_x'

    def test_identity_phi_needs_matching_eta(self, load_fixture):
        doc = load_fixture('b4.fincat')
        with pytest.raises(ValidationError):
            doc.involutive_functor('Neg', doc.anti_involutive('B4eta1'), doc.anti_involutive('TB4'))

    def test_generated_bundles_reparse(self, b4, chain, m1f4):
        docs = {}
        for bundle in (b4, chain, m1f4):
            text = print_document(bundle_to_document(bundle))
            docs[bundle.name] = parse(text)
            assert print_document(docs[bundle.name]) == text
        assert len(enumerate_fixed_points(docs['Chain3'].anti_involutive('Chain3rev'))) == 1
        assert docs['B4'].anti_involutive('B4eta1').eta_at('x') == '1'

    def test_positivity_on_a_dagger(self, b4):
        doc = document_from_structures({'B4': b4.category}, daggers={'D': b4.dagger},
                                       positivities={'P': canonical_positivity(b4.dagger)})
        assert doc.positivity_decls['P'].involution == 'D'
        again = parse(print_document(doc))
        assert again.positivity('P').sets == {'x': frozenset({'id_x'})}
