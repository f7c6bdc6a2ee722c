#!/usr/bin/env python3
"""
Small Galois fields from log/antilog tables, and matrices over them.

Elements of GF(p^k) are integers 0 .. p^k - 1 read as base-p digit vectors of
polynomial coefficients (lowest degree first). Only the fields F_{q^2} with
q in {2, 3, 4} are needed: they carry the conjugation x -> x^q.
"""

import itertools
from typing import Iterator, Sequence, Tuple

import numpy as np

from .errors import InvalidSpec

# order -> (characteristic, monic primitive polynomial coefficients, lowest degree first)
PRIMITIVE_POLYNOMIALS = {
    4: (2, (1, 1, 1)),          # x^2 + x + 1
    9: (3, (2, 1, 1)),          # x^2 + x + 2
    16: (2, (1, 1, 0, 0, 1)),   # x^4 + x + 1
}

Matrix = Tuple[Tuple[int, ...], ...]


def de2vec(x: int, base: int, n: int) -> np.ndarray:
    digits = np.zeros(n, dtype=int)
    for i in range(n):
        x, digits[i] = divmod(x, base)
    return digits


def vec2de(v: Sequence[int], base: int) -> int:
    return int(np.mod(np.asarray(v, dtype=int), base) @ (base ** np.arange(len(v), dtype=int)))


class GaloisField:
    """GF(order) with addition and multiplication tables."""

    def __init__(self, order: int):
        if order not in PRIMITIVE_POLYNOMIALS:
            raise InvalidSpec(f"no field of order {order} available (choose from {sorted(PRIMITIVE_POLYNOMIALS)})")
        p, poly = PRIMITIVE_POLYNOMIALS[order]
        k = len(poly) - 1
        self.order = order
        self.characteristic = p
        self.degree = k

        vectors = np.array([de2vec(x, p, k) for x in range(order)], dtype=int)
        weights = p ** np.arange(k, dtype=int)
        self.add_table = (np.mod(vectors[:, None, :] + vectors[None, :, :], p) @ weights).astype(int)
        self.neg_table = (np.mod(-vectors, p) @ weights).astype(int)

        self.exp = np.zeros(order - 1, dtype=int)
        self.log = np.full(order, -1, dtype=int)
        current = np.zeros(k, dtype=int)
        current[0] = 1
        for i in range(order - 1):
            value = vec2de(current, p)
            if self.log[value] >= 0:
                raise InvalidSpec(f"polynomial {poly} is not primitive over GF({p})")
            self.exp[i] = value
            self.log[value] = i
            carry = current[-1]
            current = np.concatenate(([0], current[:-1]))
            current = np.mod(current - carry * np.asarray(poly[:-1], dtype=int), p)

        self.mul_table = np.zeros((order, order), dtype=int)
        nonzero = np.arange(1, order)
        logs = self.log[nonzero]
        self.mul_table[1:, 1:] = self.exp[np.mod(logs[:, None] + logs[None, :], order - 1)]

    @property
    def elements(self) -> range:
        return range(self.order)

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.exp[(-self.log[a]) % (self.order - 1)])

    def power(self, a: int, n: int) -> int:
        if a == 0:
            return 0 if n > 0 else 1
        return int(self.exp[(self.log[a] * n) % (self.order - 1)])

    def __repr__(self):
        return f"GaloisField({self.order})"


class QuadraticExtension(GaloisField):
    """F_{q^2} with the involution x -> x^q."""

    def __init__(self, q: int):
        if q not in (2, 3, 4):
            raise InvalidSpec(f"q must be 2, 3 or 4, got {q}")
        super().__init__(q * q)
        self.q = q
        self.conj_table = np.array([self.power(a, q) for a in range(self.order)], dtype=int)

    def conj(self, a: int) -> int:
        return int(self.conj_table[a])


# -- matrices -------------------------------------------------------------------------


def all_matrices(F: GaloisField, rows: int, cols: int) -> Iterator[Matrix]:
    """Every rows x cols matrix, entries in lexicographic order read row by row."""
    for entries in itertools.product(range(F.order), repeat=rows * cols):
        yield tuple(tuple(entries[r * cols:(r + 1) * cols]) for r in range(rows))


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def matrix_product(F: GaloisField, A: Matrix, B: Matrix, rows: int, inner: int, cols: int) -> Matrix:
    """A . B for A of shape rows x inner and B of shape inner x cols."""
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = 0
            for k in range(inner):
                acc = F.add(acc, F.mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def conjugate_transpose(F: QuadraticExtension, A: Matrix, rows: int, cols: int) -> Matrix:
    return tuple(tuple(F.conj(A[i][j]) for i in range(rows)) for j in range(cols))
