from math import gcd

import pytest
from hypothesis import assume, given, settings, strategies as st

from src.dagger import dagger_violations
from src.errors import InvalidSpec, SizeExceeded
from src.gens import GeneratorSpec, generate, preset
from src.herm import enumerate_fixed_points, unitary_classes_via_transfer
from src.involutive import T_on_category


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 7))
def test_cyclic_fixed_points(n, t):
    assume((t * t) % n == 1 % n)
    bundle = generate(GeneratorSpec('delooping', {'group': 'cyclic', 'order': n, 'twist': t}))
    A = T_on_category(bundle.dagger)
    points = enumerate_fixed_points(A)
    assert len(points) == gcd(t + 1, n)
    classes = unitary_classes_via_transfer(A)
    assert sum(len(members) for members in classes.values()) == len(points)


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 6))
def test_chain_fixed_points(n):
    elements = [f"e{i}" for i in range(n)]
    bundle = generate(GeneratorSpec('poset-antitone', {
        'elements': elements,
        'relations': [f"e{i}<e{i + 1}" for i in range(n - 1)],
        'antitone': [f"e{i}:e{n - 1 - i}" for i in range(n)],
    }))
    assert bundle.dagger is None
    assert bundle.category.num_morphisms() == n * (n + 1) // 2
    assert len(enumerate_fixed_points(bundle.involution)) == n % 2


@st.composite
def involutions(draw):
    n = draw(st.integers(1, 6))
    order = draw(st.permutations(range(n)))
    swaps = draw(st.integers(0, n // 2))
    permutation = list(range(n))
    for i in range(swaps):
        a, b = order[2 * i], order[2 * i + 1]
        permutation[a], permutation[b] = b, a
    return permutation, n - 2 * swaps


@settings(max_examples=25, deadline=None)
@given(involutions())
def test_discrete_fixed_points(case):
    permutation, fixed = case
    bundle = generate(GeneratorSpec('discrete-involution', {'permutation': permutation}))
    points = enumerate_fixed_points(bundle.involution)
    assert len(points) == fixed
    assert all(permutation[int(p.object[1:])] == int(p.object[1:]) for p in points)


class TestPresets:
    def test_names(self, b4, bs3, walk, swap2, chain, m1f4):
        assert list(b4.category.morphism_names()) == ['id_x', '1', '2', '3']
        assert list(bs3.category.morphism_names()) == ['id_x', 'p021', 'p102', 'p120', 'p201', 'p210']
        assert list(walk.category.morphism_names()) == ['id_a', 'a_to_b', 'b_to_a', 'id_b']
        assert swap2.involution_name == 'Swap2swap'
        assert chain.involution_name == 'Chain3rev'
        assert m1f4.category.num_morphisms() == 7
        assert list(b4.extra_involutions) == ['B4eta1']

    def test_overrides(self):
        assert generate(preset('cyclic', order=5)).name == 'B5'
        assert generate(preset('one')).name == 'One'

    def test_discrete_with_a_transposition(self):
        bundle = generate(preset('discrete'))
        assert bundle.involution_name == 'Disc3swap'
        assert [p.key for p in enumerate_fixed_points(bundle.involution)] == [('c2', 'id_c2')]

    def test_daggers_are_valid(self, b4, bs3, walk, m1f4):
        for bundle in (b4, bs3, walk, m1f4):
            assert dagger_violations(bundle.dagger) == []

    def test_symmetric_group_with_twist(self):
        bundle = generate(preset('symmetric3', twist='p102'))
        assert len(enumerate_fixed_points(T_on_category(bundle.dagger))) > 0


class TestProducts:
    def test_daggers_combine(self):
        bundle = generate(preset('product'))
        assert bundle.name == 'B3xSwap2'
        assert bundle.category.num_morphisms() == 6
        assert dagger_violations(bundle.dagger) == []
        assert len(enumerate_fixed_points(bundle.involution)) == 2

    def test_involutions_combine(self):
        bundle = generate(GeneratorSpec('product', {'left': 'chain', 'right': 'swap2'}))
        assert bundle.dagger is None
        assert len(bundle.category.objects) == 6
        assert bundle.category.num_morphisms() == 12
        assert enumerate_fixed_points(bundle.involution) == []


class TestRejection:
    @pytest.mark.parametrize('spec', [
        GeneratorSpec('delooping', {'group': 'cyclic', 'order': 4, 'twist': 2}),
        GeneratorSpec('delooping', {'group': 'cyclic', 'order': 0}),
        GeneratorSpec('delooping', {'group': 'dihedral'}),
        GeneratorSpec('delooping', {'group': 'cyclic', 'order': 4, 'eta': 7}),
        GeneratorSpec('discrete-involution', {'permutation': [1, 2, 0]}),
        GeneratorSpec('poset-antitone', {'elements': ['a', 'b'], 'relations': ['a<b'],
                                         'antitone': ['a:a', 'b:b']}),
        GeneratorSpec('poset-antitone', {'elements': ['a', 'b'], 'relations': ['a<b', 'b<a'],
                                         'antitone': ['a:b', 'b:a']}),
        GeneratorSpec('matrix-finite-field', {'q': 5}),
        GeneratorSpec('hypercube', {}),
    ])
    def test_invalid(self, spec):
        with pytest.raises(InvalidSpec):
            generate(spec)

    def test_unknown_preset(self):
        with pytest.raises(InvalidSpec):
            preset('torus')

    def test_size_limit(self):
        with pytest.raises(SizeExceeded):
            generate(preset('matrix'), max_morphisms=100)

    def test_size_limit_from_environment(self, monkeypatch):
        monkeypatch.setenv('FINCAT_MAX_MORPHISMS', '3')
        with pytest.raises(SizeExceeded):
            generate(preset('cyclic'))
