import itertools

import pytest
from hypothesis import given, strategies as st

from src.errors import InvalidSpec
from src.finite_field import (
    GaloisField,
    QuadraticExtension,
    all_matrices,
    conjugate_transpose,
    identity_matrix,
    matrix_product,
)

# F4 written out by hand: 0, 1, w, w^2 = w + 1 encoded as 0, 1, 2, 3
F4_ADD = [[a ^ b for b in range(4)] for a in range(4)]
F4_MUL = [
    [0, 0, 0, 0],
    [0, 1, 2, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
]
F4_CONJ = [0, 1, 3, 2]

F16 = QuadraticExtension(4)


class TestTables:
    def test_f4_matches_hand_tables(self):
        F = QuadraticExtension(2)
        for a, b in itertools.product(range(4), repeat=2):
            assert F.add(a, b) == F4_ADD[a][b]
            assert F.mul(a, b) == F4_MUL[a][b]
        assert [F.conj(a) for a in range(4)] == F4_CONJ

    @pytest.mark.parametrize('q', [2, 3, 4])
    def test_conjugation_fixes_the_subfield(self, q):
        F = QuadraticExtension(q)
        fixed = [a for a in F.elements if F.conj(a) == a]
        assert len(fixed) == q
        assert all(F.conj(F.conj(a)) == a for a in F.elements)

    def test_inverses(self):
        F = GaloisField(9)
        for a in range(1, 9):
            assert F.mul(a, F.inv(a)) == 1
        with pytest.raises(ZeroDivisionError):
            F.inv(0)

    def test_unavailable_orders(self):
        with pytest.raises(InvalidSpec):
            GaloisField(8)
        with pytest.raises(InvalidSpec):
            QuadraticExtension(5)


@given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15))
def test_f16_distributes(a, b, c):
    assert F16.mul(a, F16.add(b, c)) == F16.add(F16.mul(a, b), F16.mul(a, c))
    assert F16.mul(F16.mul(a, b), c) == F16.mul(a, F16.mul(b, c))


@given(st.integers(0, 15), st.integers(0, 15))
def test_f16_conjugation_is_multiplicative(a, b):
    assert F16.conj(F16.mul(a, b)) == F16.mul(F16.conj(a), F16.conj(b))


class TestMatrices:
    def test_counts(self):
        F = QuadraticExtension(2)
        assert len(list(all_matrices(F, 2, 2))) == 256
        assert list(all_matrices(F, 0, 3)) == [()]

    def test_identity_is_neutral(self):
        F = QuadraticExtension(3)
        for A in itertools.islice(all_matrices(F, 2, 2), 0, 6561, 97):
            assert matrix_product(F, identity_matrix(2), A, 2, 2, 2) == A
            assert matrix_product(F, A, identity_matrix(2), 2, 2, 2) == A

    def test_conjugate_transpose(self):
        F = QuadraticExtension(2)
        assert conjugate_transpose(F, ((1, 2, 3),), 1, 3) == ((1,), (3,), (2,))


def _mul2(A, B):
    return tuple(tuple(F4_ADD[F4_MUL[A[i][0]][B[0][j]]][F4_MUL[A[i][1]][B[1][j]]] for j in range(2))
                 for i in range(2))


def _star(A):
    return tuple(tuple(F4_CONJ[A[j][i]] for j in range(2)) for i in range(2))


def _det(A):
    return F4_ADD[F4_MUL[A[0][0]][A[1][1]]][F4_MUL[A[0][1]][A[1][0]]]


ORACLE_MATRICES = [((a, b), (c, d)) for a, b, c, d in itertools.product(range(4), repeat=4)]
ORACLE_HERMITIAN = {A for A in ORACLE_MATRICES if _star(A) == A and _det(A) != 0}
ORACLE_UNITARY = {A for A in ORACLE_MATRICES if _mul2(_star(A), A) == ((1, 0), (0, 1))}


def test_oracle_counts():
    assert len(ORACLE_HERMITIAN) == 10
    assert len(ORACLE_UNITARY) == 18


@pytest.mark.slow
def test_fixed_points_on_dimension_two_match_oracle(m2f4):
    from src.herm import enumerate_fixed_points

    C = m2f4.category
    assert C.num_morphisms() == 297
    found = {p.h for p in enumerate_fixed_points(m2f4.involution) if p.object == '2'}
    expected = {'id_2' if A == ((1, 0), (0, 1)) else 'm2x2_' + ''.join(format(e, 'x') for row in A for e in row)
                for A in ORACLE_HERMITIAN}
    assert found == expected
