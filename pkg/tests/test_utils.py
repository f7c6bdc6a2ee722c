from hypothesis import given, strategies as st

from src.utils import LazyMap, UnionFind, format_ident, is_valid_identifier, partition_of, sort_idents


def test_identifier_order():
    assert sort_idents(['id_x', 'p021', '2', 3, ('x', '2'), 1]) == [1, 3, '2', 'id_x', 'p021', ('x', '2')]
    assert format_ident(('x', ('y', 'id_y'))) == '(x, (y, id_y))'


def test_identifiers_that_can_be_printed():
    assert is_valid_identifier('a_le_b')
    assert is_valid_identifier("f'")
    assert not is_valid_identifier('a-b')
    assert not is_valid_identifier(('x', 'id_x'))


@given(st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11)), max_size=20))
def test_union_find_classes(pairs):
    uf = UnionFind(range(12))
    for a, b in pairs:
        uf.union(a, b)
    classes = uf.classes()
    assert sorted(x for members in classes.values() for x in members) == list(range(12))
    for rep, members in classes.items():
        assert rep == members[0] == min(members)
    for a, b in pairs:
        assert uf.same(a, b)
    assert len(partition_of(classes)) == len(classes)


def test_lazy_map_caches():
    calls = []

    def square(k):
        calls.append(k)
        return k * k

    m = LazyMap(lambda: range(4), square, lambda k: k in range(4))
    assert m[3] == 9
    assert m[3] == 9
    assert calls == [3]
    assert 5 not in m
    assert dict(m) == {0: 0, 1: 1, 2: 4, 3: 9}
    assert len(m) == 4
