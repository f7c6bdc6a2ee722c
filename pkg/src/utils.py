#!/usr/bin/env python3
"""
Utility functions for fincat-herm
Identifier ordering, partitions, digests and lazy maps shared by the engine modules.
"""

import hashlib
import re
from collections.abc import Mapping
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Tuple


# DSL identifier pattern - centralized
IDENT_PATTERN = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_']*$")


def ident_key(value) -> tuple:
    """
    Total order key for object and morphism identifiers.

    Identifiers are strings, integers, or (nested) tuples of those, e.g. the
    (object, h) pairs naming objects of a completion.

    Args:
        value: identifier to order

    Returns:
        Tuple usable as a sort key; strings sort after integers, tuples after both
    """
    if isinstance(value, tuple):
        return (2, tuple(ident_key(v) for v in value))
    if isinstance(value, int):
        return (0, value, '')
    return (1, 0, str(value))


def sort_idents(values: Iterable) -> List:
    return sorted(values, key=ident_key)


def least(values: Iterable):
    return min(values, key=ident_key)


def is_valid_identifier(name) -> bool:
    """
    Check that a name can be written into a .fincat file unchanged.

    Args:
        name: candidate identifier

    Returns:
        True if the name matches the DSL identifier pattern
    """
    return isinstance(name, str) and bool(IDENT_PATTERN.match(name))


def format_ident(value) -> str:
    """Render an identifier for reports: tuples as (a, b), strings as themselves."""
    if isinstance(value, tuple):
        return '(' + ', '.join(format_ident(v) for v in value) + ')'
    return str(value)


def get_content_hash(content: str) -> str:
    """
    Generate a content digest for report inputs.

    Args:
        content: file text

    Returns:
        SHA256 hash hex string
    """
    return hashlib.sha256(content.encode('utf-8')).hexdigest()


class UnionFind:
    """Disjoint sets with union by rank and path compression."""

    def __init__(self, items: Iterable[Hashable]):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in self.parent}

    def find(self, x):
        y = self.parent[x]
        if self.parent[y] != y:
            y = self.parent[x] = self.find(y)
        return y

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        del self.rank[y]

    def same(self, x, y) -> bool:
        return self.find(x) == self.find(y)

    def classes(self) -> Dict[Hashable, Tuple]:
        """
        Canonical partition of the items.

        Returns:
            Dict from least member (identifier order) to the sorted tuple of members,
            with keys in identifier order
        """
        groups: Dict[Hashable, List] = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        canonical = {}
        for members in groups.values():
            members = sort_idents(members)
            canonical[members[0]] = tuple(members)
        return {rep: canonical[rep] for rep in sort_idents(canonical)}


def partition_of(members: Dict[Hashable, Tuple]) -> frozenset:
    """Partition as a set of frozensets, for comparisons that ignore representatives."""
    return frozenset(frozenset(block) for block in members.values())


class LazyMap(Mapping):
    """
    Read-only mapping computed on demand and cached.

    Backs the functor and dagger maps of derived categories.
    """

    def __init__(self, keys: Callable[[], Iterable], compute: Callable, contains: Callable = None):
        self._keys = keys
        self._compute = compute
        self._contains = contains
        self._cache: Dict = {}

    def __getitem__(self, key):
        try:
            return self._cache[key]
        except KeyError:
            pass
        if self._contains is not None and not self._contains(key):
            raise KeyError(key)
        value = self._compute(key)
        self._cache[key] = value
        return value

    def __contains__(self, key):
        if key in self._cache:
            return True
        if self._contains is not None:
            return self._contains(key)
        return any(k == key for k in self._keys())

    def __iter__(self) -> Iterator:
        return iter(self._keys())

    def __len__(self):
        return sum(1 for _ in self._keys())
