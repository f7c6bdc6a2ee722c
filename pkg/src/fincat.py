#!/usr/bin/env python3
"""
Finite categories, functors and natural transformations.

A FiniteCategory is an explicit composition table. Derived categories (opposites,
full subcategories, Hermitian completions) implement the same accessor protocol
without materialising their tables, so that law scans run per hom-block over
numpy index arrays instead of per composable pair.

Convention: compose(g, f) is "g after f" and is defined iff cod(f) == dom(g).
"""

import itertools
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from .errors import (
    CompositionError,
    InconsistentResult,
    NotAnEquivalence,
    SearchSpaceExceeded,
    SourceTargetMismatch,
    UnknownMorphism,
    UnknownObject,
    ValidationError,
    ValidationReport,
    Violation,
)
from .logger import logger
from .utils import LazyMap, UnionFind, format_ident, ident_key


@dataclass(frozen=True)
class Morphism:
    name: Hashable
    dom: Hashable
    cod: Hashable


class FiniteCategory:
    """Explicit finite category: objects, morphism records, identities and a composition table."""

    def __init__(self, objects: Iterable, morphisms: Iterable, identities: Mapping,
                 composition: Mapping, name: str = ''):
        self.name = name
        self.objects = tuple(objects)
        self._object_set = frozenset(self.objects)
        self._records: Dict[Hashable, Morphism] = {}
        for m in morphisms:
            m = m if isinstance(m, Morphism) else Morphism(*m)
            self._records[m.name] = m
        self._identities = dict(identities)
        self._table = dict(composition)
        homs: Dict[Tuple, List] = {}
        for m in self._records.values():
            homs.setdefault((m.dom, m.cod), []).append(m.name)
        self._homs = {pair: tuple(names) for pair, names in homs.items()}
        self._local = {}
        for names in self._homs.values():
            for i, f in enumerate(names):
                self._local[f] = i
        self._init_caches()

    def _init_caches(self):
        self._blocks: Dict[Tuple, np.ndarray] = {}
        self._inverses: Dict[Tuple, np.ndarray] = {}
        self._opposite = None
        self._records_cache = None

    explicit = True

    # -- accessor protocol -------------------------------------------------

    def has_object(self, x) -> bool:
        return x in self._object_set

    def has_morphism(self, f) -> bool:
        return f in self._records

    def record(self, f) -> Morphism:
        try:
            return self._records[f]
        except (KeyError, TypeError):
            raise UnknownMorphism(f"{format_ident(f)} is not a morphism of {self.label}")

    def hom(self, a, b) -> Tuple:
        return self._homs.get((a, b), ())

    def identity(self, x):
        try:
            return self._identities[x]
        except KeyError:
            raise UnknownObject(f"{format_ident(x)} is not an object of {self.label}")

    def compose(self, g, f):
        try:
            return self._table[(g, f)]
        except (KeyError, TypeError):
            pass
        self._raise_composition(g, f)

    def local_index(self, f) -> int:
        try:
            return self._local[f]
        except (KeyError, TypeError):
            raise UnknownMorphism(f"{format_ident(f)} is not a morphism of {self.label}")

    def morphism_names(self) -> Iterator:
        return iter(self._records)

    @property
    def identities(self) -> Mapping:
        return self._identities

    @property
    def composition(self) -> Mapping:
        return self._table

    # -- derived helpers ---------------------------------------------------

    @property
    def label(self) -> str:
        return self.name or 'category'

    def _raise_composition(self, g, f):
        mg, mf = self.record(g), self.record(f)
        if mf.cod != mg.dom:
            raise CompositionError(
                f"cannot compose {format_ident(g)} after {format_ident(f)}: "
                f"{format_ident(mf.cod)} != {format_ident(mg.dom)}")
        raise CompositionError(f"no composite recorded for {format_ident(g)} . {format_ident(f)}")

    def dom(self, f):
        return self.record(f).dom

    def cod(self, f):
        return self.record(f).cod

    @property
    def morphisms(self) -> Tuple[Morphism, ...]:
        if self._records_cache is None:
            if self.explicit:
                self._records_cache = tuple(self._records.values())
            else:
                self._records_cache = tuple(self.record(f) for f in self.morphism_names())
        return self._records_cache

    def num_morphisms(self) -> int:
        return sum(len(self.hom(a, b)) for a in self.objects for b in self.objects)

    def is_identity(self, f) -> bool:
        return self.identity(self.dom(f)) == f

    def compose_many(self, *fs):
        """compose_many(h, g, f) is h . g . f."""
        result = fs[-1]
        for g in reversed(fs[:-1]):
            result = self.compose(g, result)
        return result

    def block(self, a, b, c) -> np.ndarray:
        """
        Composition restricted to Hom(b,c) x Hom(a,b).

        Returns:
            Integer array of shape (|Hom(b,c)|, |Hom(a,b)|) whose entry [i, j] is the
            position of hom(b,c)[i] . hom(a,b)[j] inside hom(a,c)
        """
        key = (a, b, c)
        cached = self._blocks.get(key)
        if cached is None:
            left, right = self.hom(b, c), self.hom(a, b)
            cached = np.empty((len(left), len(right)), dtype=np.int32)
            for i, g in enumerate(left):
                for j, f in enumerate(right):
                    cached[i, j] = self.local_index(self.compose(g, f))
            self._blocks[key] = cached
        return cached

    def _inverse_array(self, a, b) -> np.ndarray:
        key = (a, b)
        cached = self._inverses.get(key)
        if cached is None:
            ab, ba = self.hom(a, b), self.hom(b, a)
            cached = np.full(len(ab), -1, dtype=np.int64)
            if ab and ba:
                left = self.block(a, b, a) == self.local_index(self.identity(a))
                right = self.block(b, a, b) == self.local_index(self.identity(b))
                both = left & right.T
                found = both.any(axis=0)
                cached[found] = both.argmax(axis=0)[found]
            self._inverses[key] = cached
        return cached

    def inverse(self, f) -> Optional[Hashable]:
        """Two-sided inverse of f, or None when f is not an isomorphism."""
        m = self.record(f)
        i = int(self._inverse_array(m.dom, m.cod)[self.local_index(f)])
        return None if i < 0 else self.hom(m.cod, m.dom)[i]

    def is_iso(self, f) -> bool:
        return self.inverse(f) is not None

    def isomorphisms(self, a, b) -> List:
        inv = self._inverse_array(a, b)
        return [f for f, i in zip(self.hom(a, b), inv) if i >= 0]

    def opposite(self) -> 'FiniteCategory':
        if self._opposite is None:
            self._opposite = self._build_opposite()
        return self._opposite

    def _build_opposite(self) -> 'FiniteCategory':
        name = self.name[:-3] if self.name.endswith('^op') else f"{self.name}^op"
        op = FiniteCategory(
            self.objects,
            [Morphism(m.name, m.cod, m.dom) for m in self.morphisms],
            self._identities,
            {(f, g): h for (g, f), h in self._table.items()},
            name=name,
        )
        op._opposite = self
        return op

    def describe(self) -> str:
        return f"{self.label} ({len(self.objects)} objects, {self.num_morphisms()} morphisms)"

    def __repr__(self):
        return f"<{type(self).__name__} {self.describe()}>"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteCategory):
            return NotImplemented
        if self.explicit and other.explicit:
            return (self.objects == other.objects
                    and tuple(self._records.values()) == tuple(other._records.values())
                    and self._identities == other._identities
                    and self._table == other._table)
        return _same_structure(self, other)

    def __hash__(self):
        return hash((type(self).__name__, self.objects))


def _same_structure(c1: FiniteCategory, c2: FiniteCategory) -> bool:
    if c1.objects != c2.objects or c1.morphisms != c2.morphisms:
        return False
    if any(c1.identity(x) != c2.identity(x) for x in c1.objects):
        return False
    for a, b, c in itertools.product(c1.objects, repeat=3):
        for g in c1.hom(b, c):
            for f in c1.hom(a, b):
                if c1.compose(g, f) != c2.compose(g, f):
                    return False
    return True


class DerivedCategory(FiniteCategory):
    """Base for categories computed from another category on demand."""

    explicit = False

    def __init__(self, base: FiniteCategory, objects: Iterable, name: str = ''):
        self.base = base
        self.name = name
        self.objects = tuple(objects)
        self._object_set = frozenset(self.objects)
        self._init_caches()

    def morphism_names(self) -> Iterator:
        for a in self.objects:
            for b in self.objects:
                yield from self.hom(a, b)

    @property
    def identities(self) -> Mapping:
        return LazyMap(lambda: self.objects, self.identity, self.has_object)

    @property
    def composition(self) -> Mapping:
        raise NotImplementedError(f"{type(self).__name__} does not store a composition table")

    def _build_opposite(self) -> FiniteCategory:
        return OppositeCategory(self)


class OppositeCategory(DerivedCategory):
    """C^op sharing every identifier with C."""

    def __init__(self, base: FiniteCategory):
        name = base.name[:-3] if base.name.endswith('^op') else f"{base.name}^op"
        super().__init__(base, base.objects, name)
        self._opposite = base

    def has_morphism(self, f) -> bool:
        return self.base.has_morphism(f)

    def record(self, f) -> Morphism:
        m = self.base.record(f)
        return Morphism(m.name, m.cod, m.dom)

    def hom(self, a, b) -> Tuple:
        return self.base.hom(b, a)

    def identity(self, x):
        return self.base.identity(x)

    def compose(self, g, f):
        return self.base.compose(f, g)

    def local_index(self, f) -> int:
        return self.base.local_index(f)

    def block(self, a, b, c) -> np.ndarray:
        return self.base.block(c, b, a).T

    def _inverse_array(self, a, b) -> np.ndarray:
        return self.base._inverse_array(b, a)

    def __eq__(self, other):
        if self is other:
            return True
        if isinstance(other, OppositeCategory):
            return self.base == other.base
        return NotImplemented if not isinstance(other, FiniteCategory) else _same_structure(self, other)

    def __hash__(self):
        return hash(('op', hash(self.base)))


class FullSubcategory(DerivedCategory):
    """Full subcategory of a derived category on a subset of its objects."""

    def __init__(self, base: FiniteCategory, objects: Iterable, name: str = ''):
        keep = set(objects)
        super().__init__(base, [x for x in base.objects if x in keep], name or f"{base.name}|sub")

    def has_morphism(self, f) -> bool:
        if not self.base.has_morphism(f):
            return False
        m = self.base.record(f)
        return m.dom in self._object_set and m.cod in self._object_set

    def record(self, f) -> Morphism:
        m = self.base.record(f)
        if m.dom not in self._object_set or m.cod not in self._object_set:
            raise UnknownMorphism(f"{format_ident(f)} leaves the subcategory {self.label}")
        return m

    def hom(self, a, b) -> Tuple:
        if a not in self._object_set or b not in self._object_set:
            return ()
        return self.base.hom(a, b)

    def identity(self, x):
        if x not in self._object_set:
            raise UnknownObject(f"{format_ident(x)} is not an object of {self.label}")
        return self.base.identity(x)

    def compose(self, g, f):
        self.record(g)
        self.record(f)
        return self.base.compose(g, f)

    def local_index(self, f) -> int:
        return self.base.local_index(f)

    def block(self, a, b, c) -> np.ndarray:
        return self.base.block(a, b, c)

    def _inverse_array(self, a, b) -> np.ndarray:
        return self.base._inverse_array(a, b)

    def __eq__(self, other):
        if self is other:
            return True
        if isinstance(other, FullSubcategory):
            return self.objects == other.objects and self.base == other.base
        return NotImplemented if not isinstance(other, FiniteCategory) else _same_structure(self, other)

    def __hash__(self):
        return hash(('sub', self.objects))


def opposite(C: FiniteCategory) -> FiniteCategory:
    """Opposite category; opposite(opposite(C)) is C itself."""
    return C.opposite()


def full_subcategory(C: FiniteCategory, objects: Iterable, name: str = '') -> FiniteCategory:
    """Full subcategory on the given objects, materialised when C is an explicit table."""
    keep = set(objects)
    if not C.explicit:
        return FullSubcategory(C, keep, name)
    kept = [x for x in C.objects if x in keep]
    records = [m for m in C.morphisms if m.dom in keep and m.cod in keep]
    names = {m.name for m in records}
    table = {(g, f): h for (g, f), h in C.composition.items() if g in names and f in names}
    return FiniteCategory(kept, records, {x: C.identity(x) for x in kept}, table,
                          name=name or f"{C.name}|sub")


# -- validation -------------------------------------------------------------


def _raw_morphisms(candidate: Mapping) -> List[Tuple]:
    rows = []
    for entry in candidate.get('morphisms', ()):
        if isinstance(entry, Morphism):
            rows.append((entry.name, entry.dom, entry.cod))
        else:
            rows.append(tuple(entry))
    return rows


def _raw_composition(candidate: Mapping) -> List[Tuple]:
    comp = candidate.get('composition', {})
    if isinstance(comp, Mapping):
        return [(g, f, h) for (g, f), h in comp.items()]
    return [tuple(entry) for entry in comp]


def validate_category(candidate: Mapping) -> FiniteCategory:
    """
    Build and validate a category from raw data.

    Args:
        candidate: mapping with 'objects', 'morphisms' (name, dom, cod), optional
            'identities' (object -> morphism, defaulting to id_<object>),
            'composition' ((g, f) -> h, or (g, f, h) triples) and optional 'name'

    Returns:
        The validated FiniteCategory

    Raises:
        ValidationError: listing every violated law with the offending identifiers
    """
    name = candidate.get('name', '')
    objects = list(candidate.get('objects', ()))
    violations: List[Violation] = []

    if len(set(objects)) != len(objects):
        violations.append(Violation('DuplicateObject', 'object identifiers must be unique'))
    object_set = set(objects)

    records: Dict[Hashable, Morphism] = {}
    for f, a, b in _raw_morphisms(candidate):
        if f in records:
            violations.append(Violation('DuplicateMorphism', f"{format_ident(f)} declared twice", (f,)))
            continue
        if a not in object_set or b not in object_set:
            violations.append(Violation(
                'TypeMismatch', f"{format_ident(f)}: {format_ident(a)} -> {format_ident(b)} uses an unknown object", (f,)))
            continue
        records[f] = Morphism(f, a, b)

    identities = dict(candidate.get('identities') or {})
    for x in objects:
        if x not in identities and f"id_{x}" in records:
            identities[x] = f"id_{x}"
        ident = identities.get(x)
        if ident is None or ident not in records:
            violations.append(Violation('MissingIdentity', f"object {format_ident(x)} has no identity", (x,)))
            identities.pop(x, None)
        elif records[ident].dom != x or records[ident].cod != x:
            violations.append(Violation(
                'MissingIdentity', f"identity {format_ident(ident)} of {format_ident(x)} is not an endomorphism of it", (x, ident)))
            identities.pop(x, None)

    table: Dict[Tuple, Hashable] = {}
    for g, f, h in _raw_composition(candidate):
        if g not in records or f not in records or h not in records:
            missing = [m for m in (g, f, h) if m not in records]
            violations.append(Violation(
                'TypeMismatch', f"composition {format_ident(g)} . {format_ident(f)} = {format_ident(h)} "
                f"mentions undeclared {', '.join(format_ident(m) for m in missing)}", (g, f, h)))
            continue
        mg, mf, mh = records[g], records[f], records[h]
        if mf.cod != mg.dom:
            violations.append(Violation(
                'TypeMismatch', f"{format_ident(g)} . {format_ident(f)} is declared but "
                f"cod({format_ident(f)}) = {format_ident(mf.cod)} != dom({format_ident(g)}) = {format_ident(mg.dom)}", (g, f)))
            continue
        if mh.dom != mf.dom or mh.cod != mg.cod:
            violations.append(Violation(
                'TypeMismatch', f"{format_ident(g)} . {format_ident(f)} = {format_ident(h)} lands in the wrong hom-set", (g, f, h)))
            continue
        if (g, f) in table and table[(g, f)] != h:
            violations.append(Violation(
                'TypeMismatch', f"{format_ident(g)} . {format_ident(f)} has two different composites", (g, f)))
            continue
        table[(g, f)] = h

    structural = bool(violations)
    category = FiniteCategory(objects if not structural else list(dict.fromkeys(objects)),
                              records.values(), identities, table, name=name)

    complete = True
    for mf in records.values():
        for mg in records.values():
            if mf.cod == mg.dom and (mg.name, mf.name) not in table:
                complete = False
                violations.append(Violation(
                    'MissingComposite', f"no composite for {format_ident(mg.name)} . {format_ident(mf.name)}",
                    (mg.name, mf.name)))

    if complete:
        for m in records.values():
            id_dom, id_cod = identities.get(m.dom), identities.get(m.cod)
            if id_cod is not None and table.get((id_cod, m.name)) != m.name:
                violations.append(Violation(
                    'IdentityLawFailure', f"{format_ident(id_cod)} . {format_ident(m.name)} != {format_ident(m.name)}",
                    (id_cod, m.name)))
            if id_dom is not None and table.get((m.name, id_dom)) != m.name:
                violations.append(Violation(
                    'IdentityLawFailure', f"{format_ident(m.name)} . {format_ident(id_dom)} != {format_ident(m.name)}",
                    (m.name, id_dom)))
        if not structural:
            violations.extend(associativity_violations(category))

    if violations:
        raise ValidationError(f"category {name or '<anonymous>'}", ValidationReport(violations))
    logger.info(f"Validated category {category.describe()}")
    return category


def associativity_violations(C: FiniteCategory) -> List[Violation]:
    """Exhaustive associativity scan, one numpy comparison per h and object quadruple."""
    found = []
    objs = C.objects
    for a, b, c, d in itertools.product(objs, repeat=4):
        hab, hbc, hcd = C.hom(a, b), C.hom(b, c), C.hom(c, d)
        if not (hab and hbc and hcd):
            continue
        abc, acd = C.block(a, b, c), C.block(a, c, d)
        bcd, abd = C.block(b, c, d), C.block(a, b, d)
        for i, h in enumerate(hcd):
            left = acd[i][abc]
            right = abd[bcd[i]]
            for gi, fi in np.argwhere(left != right):
                g, f = hbc[gi], hab[fi]
                found.append(Violation(
                    'AssociativityFailure',
                    f"{format_ident(h)} . ({format_ident(g)} . {format_ident(f)}) != "
                    f"({format_ident(h)} . {format_ident(g)}) . {format_ident(f)}",
                    (h, g, f)))
    return found


def category_violations(C: FiniteCategory) -> List[Violation]:
    """Identity and associativity laws of an already-typed category."""
    found = []
    for a in C.objects:
        for b in C.objects:
            for f in C.hom(a, b):
                if C.compose(C.identity(b), f) != f or C.compose(f, C.identity(a)) != f:
                    found.append(Violation('IdentityLawFailure', f"identity law fails at {format_ident(f)}", (f,)))
    found.extend(associativity_violations(C))
    return found


# -- functors and natural transformations -----------------------------------


class FunctorData:
    """Functor given by an object map and a morphism map; equality is strict equality of maps."""

    def __init__(self, source: FiniteCategory, target: FiniteCategory,
                 object_map: Mapping, morphism_map: Mapping, name: str = ''):
        self.source = source
        self.target = target
        self.object_map = object_map
        self.morphism_map = morphism_map
        self.name = name

    def obj(self, x):
        try:
            return self.object_map[x]
        except KeyError:
            raise UnknownObject(f"{self.name or 'functor'} is undefined on object {format_ident(x)}")

    def mor(self, f):
        try:
            return self.morphism_map[f]
        except KeyError:
            raise UnknownMorphism(f"{self.name or 'functor'} is undefined on morphism {format_ident(f)}")

    def key(self) -> Tuple:
        return (tuple(self.obj(x) for x in self.source.objects),
                tuple(self.mor(f) for f in self.source.morphism_names()))

    def sort_key(self) -> Tuple:
        objs, mors = self.key()
        return (tuple(ident_key(y) for y in objs), tuple(ident_key(g) for g in mors))

    def first_difference(self, other: 'FunctorData') -> Optional[Tuple]:
        """First object or morphism where the two maps disagree, in identifier order of the source."""
        for x in self.source.objects:
            if self.obj(x) != other.obj(x):
                return ('object', x, self.obj(x), other.obj(x))
        for f in self.source.morphism_names():
            if self.mor(f) != other.mor(f):
                return ('morphism', f, self.mor(f), other.mor(f))
        return None

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FunctorData):
            return NotImplemented
        if not (self.source == other.source and self.target == other.target):
            return False
        return self.first_difference(other) is None

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"<FunctorData {self.name or ''} {self.source.label} -> {self.target.label}>"


class NatTransData:
    """Natural transformation given by its components."""

    def __init__(self, source_functor: FunctorData, target_functor: FunctorData,
                 components: Mapping, name: str = ''):
        self.source_functor = source_functor
        self.target_functor = target_functor
        self.components = components
        self.name = name

    @property
    def source(self) -> FiniteCategory:
        return self.source_functor.source

    @property
    def target(self) -> FiniteCategory:
        return self.source_functor.target

    def at(self, x):
        try:
            return self.components[x]
        except KeyError:
            raise UnknownObject(f"no component at {format_ident(x)}")

    def component_tuple(self) -> Tuple:
        return tuple(self.at(x) for x in self.source.objects)

    def sort_key(self) -> Tuple:
        return tuple(ident_key(a) for a in self.component_tuple())

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, NatTransData):
            return NotImplemented
        return (self.source_functor == other.source_functor
                and self.target_functor == other.target_functor
                and self.component_tuple() == other.component_tuple())

    def __hash__(self):
        return hash(self.component_tuple())

    def __repr__(self):
        comps = ', '.join(f"{format_ident(x)}: {format_ident(a)}" for x, a in zip(self.source.objects, self.component_tuple()))
        return f"<NatTransData {self.name} {{{comps}}}>"


@dataclass
class AdjointEquivalence:
    forward: FunctorData
    backward: FunctorData
    alpha: NatTransData
    beta: NatTransData


def identity_functor(C: FiniteCategory) -> FunctorData:
    return FunctorData(C, C,
                       LazyMap(lambda: C.objects, lambda x: x, C.has_object),
                       LazyMap(C.morphism_names, lambda f: f, C.has_morphism),
                       name=f"Id_{C.name}")


def identity_nat_trans(F: FunctorData) -> NatTransData:
    return NatTransData(F, F, {x: F.target.identity(F.obj(x)) for x in F.source.objects},
                        name=f"id_{F.name}")


def _same_category(c1: FiniteCategory, c2: FiniteCategory) -> bool:
    return c1 is c2 or c1 == c2


def compose_functors(G: FunctorData, F: FunctorData, validate: bool = True) -> FunctorData:
    """
    Pointwise composite G . F.

    Raises:
        SourceTargetMismatch: when the target of F is not the source of G
        ValidationError: when the composite of two explicit functors breaks a law
    """
    if not _same_category(F.target, G.source):
        raise SourceTargetMismatch(f"cannot compose {G.name or 'G'} after {F.name or 'F'}: "
                                   f"{F.target.label} is not {G.source.label}")
    name = f"{G.name}.{F.name}" if G.name and F.name else ''
    if isinstance(F.object_map, dict) and isinstance(G.object_map, dict) \
            and isinstance(F.morphism_map, dict) and isinstance(G.morphism_map, dict):
        composite = FunctorData(F.source, G.target,
                                {x: G.obj(F.obj(x)) for x in F.source.objects},
                                {f: G.mor(F.mor(f)) for f in F.source.morphism_names()},
                                name=name)
        if validate and F.source.explicit:
            validate_functor(composite)
        return composite
    return FunctorData(F.source, G.target,
                       LazyMap(lambda: F.source.objects, lambda x: G.obj(F.obj(x)), F.source.has_object),
                       LazyMap(F.source.morphism_names, lambda f: G.mor(F.mor(f)), F.source.has_morphism),
                       name=name)


def _hom_image_array(F: FunctorData, a, b) -> np.ndarray:
    D = F.target
    return np.array([D.local_index(F.mor(f)) for f in F.source.hom(a, b)], dtype=np.int64)


def functor_violations(F: FunctorData, code: str = 'NotAFunctor') -> List[Violation]:
    """Exhaustive functor-law scan: typing, identities and composition."""
    C, D = F.source, F.target
    found = []
    for x in C.objects:
        if x not in F.object_map or not D.has_object(F.obj(x)):
            found.append(Violation(code, f"object {format_ident(x)} is not mapped into {D.label}", (x,)))
    if found:
        return found
    for a in C.objects:
        for b in C.objects:
            for f in C.hom(a, b):
                if f not in F.morphism_map or not D.has_morphism(F.mor(f)):
                    found.append(Violation(code, f"morphism {format_ident(f)} is not mapped into {D.label}", (f,)))
                    continue
                m = D.record(F.mor(f))
                if m.dom != F.obj(a) or m.cod != F.obj(b):
                    found.append(Violation(
                        code, f"{format_ident(f)} maps to {format_ident(m.name)}, outside "
                        f"Hom({format_ident(F.obj(a))}, {format_ident(F.obj(b))})", (f,)))
    if found:
        return found
    for x in C.objects:
        if F.mor(C.identity(x)) != D.identity(F.obj(x)):
            found.append(Violation(code, f"identity of {format_ident(x)} is not preserved", (x,)))
    found.extend(composition_violations(F, code))
    return found


def composition_violations(F: FunctorData, code: str = 'NotAFunctor') -> List[Violation]:
    """F(g . f) == F(g) . F(f) for every composable pair, one numpy comparison per object triple."""
    C, D = F.source, F.target
    found = []
    images = {}
    for a, b, c in itertools.product(C.objects, repeat=3):
        hab, hbc = C.hom(a, b), C.hom(b, c)
        if not hab or not hbc:
            continue
        for pair in ((a, b), (b, c), (a, c)):
            if pair not in images:
                images[pair] = _hom_image_array(F, *pair)
        lhs = images[(a, c)][C.block(a, b, c)]
        rhs = D.block(F.obj(a), F.obj(b), F.obj(c))[images[(b, c)][:, None], images[(a, b)][None, :]]
        for gi, fi in np.argwhere(lhs != rhs):
            g, f = hbc[gi], hab[fi]
            found.append(Violation(code, f"composite {format_ident(g)} . {format_ident(f)} is not preserved", (g, f)))
    return found


def validate_functor(F: FunctorData) -> FunctorData:
    found = functor_violations(F)
    if found:
        raise ValidationError(f"functor {F.name or '<anonymous>'}", ValidationReport(found))
    return F


def naturality_violations(alpha: NatTransData, code: str = 'NotNatural') -> List[Violation]:
    F, G = alpha.source_functor, alpha.target_functor
    C, D = F.source, F.target
    found = []
    for x in C.objects:
        if x not in alpha.components:
            found.append(Violation(code, f"missing component at {format_ident(x)}", (x,)))
            continue
        a = alpha.at(x)
        if not D.has_morphism(a) or D.dom(a) != F.obj(x) or D.cod(a) != G.obj(x):
            found.append(Violation(code, f"component at {format_ident(x)} is not a morphism F(x) -> G(x)", (x, a)))
    if found:
        return found
    for x in C.objects:
        for y in C.objects:
            for f in C.hom(x, y):
                if D.compose(G.mor(f), alpha.at(x)) != D.compose(alpha.at(y), F.mor(f)):
                    found.append(Violation(code, f"naturality square fails at {format_ident(f)}", (f,)))
    return found


def validate_nat_trans(alpha: NatTransData) -> NatTransData:
    found = naturality_violations(alpha)
    if found:
        raise ValidationError(f"natural transformation {alpha.name or '<anonymous>'}", ValidationReport(found))
    return alpha


def vertical_compose(beta: NatTransData, alpha: NatTransData) -> NatTransData:
    """beta . alpha for alpha: F => G and beta: G => H."""
    if alpha.target_functor != beta.source_functor:
        raise SourceTargetMismatch("vertical composite needs alpha's target functor to be beta's source")
    D = alpha.target
    return NatTransData(alpha.source_functor, beta.target_functor,
                        {x: D.compose(beta.at(x), alpha.at(x)) for x in alpha.source.objects})


def whisker_left(H: FunctorData, alpha: NatTransData) -> NatTransData:
    """H alpha: H.F => H.G."""
    return NatTransData(compose_functors(H, alpha.source_functor, validate=False),
                        compose_functors(H, alpha.target_functor, validate=False),
                        {x: H.mor(alpha.at(x)) for x in alpha.source.objects})


def whisker_right(alpha: NatTransData, K: FunctorData) -> NatTransData:
    """alpha K: F.K => G.K."""
    return NatTransData(compose_functors(alpha.source_functor, K, validate=False),
                        compose_functors(alpha.target_functor, K, validate=False),
                        {x: alpha.at(K.obj(x)) for x in K.source.objects})


def is_natural_iso(alpha: NatTransData) -> bool:
    D = alpha.target
    return all(D.is_iso(alpha.at(x)) for x in alpha.source.objects)


# -- enumeration --------------------------------------------------------------


def _resolve_cap(cap: Optional[int]) -> int:
    if cap is not None:
        return cap
    from .config import default_cap
    return default_cap()


def enumerate_functors(C: FiniteCategory, D: FiniteCategory, cap: Optional[int] = None) -> List[FunctorData]:
    """
    All functors C -> D in lexicographic order of (object_map, morphism_map).

    Raises:
        SearchSpaceExceeded: when the candidate object maps, or the nodes visited by
            the morphism search, exceed the cap
    """
    cap = _resolve_cap(cap)
    bound = len(D.objects) ** len(C.objects)
    if bound > cap:
        raise SearchSpaceExceeded(bound, cap, 'functor enumeration')

    free = [m for m in C.morphisms if C.identity(m.dom) != m.name]
    position = {m.name: i for i, m in enumerate(free)}
    checks: List[List[Tuple]] = [[] for _ in free]
    for a, b, c in itertools.product(C.objects, repeat=3):
        for g in C.hom(b, c):
            for f in C.hom(a, b):
                h = C.compose(g, f)
                last = max(position.get(g, -1), position.get(f, -1), position.get(h, -1))
                if last >= 0:
                    checks[last].append((g, f, h))

    results = []
    visited = 0
    for images in itertools.product(D.objects, repeat=len(C.objects)):
        omap = dict(zip(C.objects, images))
        options = [D.hom(omap[m.dom], omap[m.cod]) for m in free]
        if any(not opt for opt in options):
            continue
        mmap = {C.identity(x): D.identity(omap[x]) for x in C.objects}

        def extend(i):
            nonlocal visited
            if i == len(free):
                results.append(FunctorData(C, D, dict(omap), dict(mmap)))
                return
            for candidate in options[i]:
                visited += 1
                if visited > cap:
                    raise SearchSpaceExceeded(visited, cap, 'functor enumeration')
                mmap[free[i].name] = candidate
                if all(mmap[h] == D.compose(mmap[g], mmap[f]) for g, f, h in checks[i]):
                    extend(i + 1)
            del mmap[free[i].name]

        if free:
            extend(0)
        else:
            results.append(FunctorData(C, D, dict(omap), dict(mmap)))

    results.sort(key=lambda F: F.sort_key())
    logger.debug(f"Enumerated {len(results)} functors {C.label} -> {D.label}")
    return results


def enumerate_nat_transformations(F: FunctorData, G: FunctorData, cap: Optional[int] = None) -> List[NatTransData]:
    """All natural transformations F => G, ordered by their component tuples."""
    if not (_same_category(F.source, G.source) and _same_category(F.target, G.target)):
        raise SourceTargetMismatch("natural transformations need parallel functors")
    cap = _resolve_cap(cap)
    C, D = F.source, F.target
    objs = C.objects
    order = {x: i for i, x in enumerate(objs)}
    checks: List[List] = [[] for _ in objs]
    for x in objs:
        for y in objs:
            for f in C.hom(x, y):
                checks[max(order[x], order[y])].append((x, y, f))
    options = [D.hom(F.obj(x), G.obj(x)) for x in objs]
    results = []
    comps: Dict = {}
    visited = 0

    def extend(i):
        nonlocal visited
        if i == len(objs):
            results.append(NatTransData(F, G, dict(comps)))
            return
        for candidate in options[i]:
            visited += 1
            if visited > cap:
                raise SearchSpaceExceeded(visited, cap, 'natural transformation enumeration')
            comps[objs[i]] = candidate
            if all(D.compose(G.mor(f), comps[x]) == D.compose(comps[y], F.mor(f)) for x, y, f in checks[i]):
                extend(i + 1)
        comps.pop(objs[i], None)

    extend(0)
    results.sort(key=lambda a: a.sort_key())
    return results


# -- equivalences ---------------------------------------------------------------


@dataclass
class EquivalenceVerdict:
    fully_faithful: bool
    essentially_surjective: bool
    quasi_inverse: Optional[FunctorData] = None
    alpha: Optional[NatTransData] = None
    beta: Optional[NatTransData] = None
    witness: Optional[str] = None

    @property
    def holds(self) -> bool:
        return self.fully_faithful and self.essentially_surjective

    def __bool__(self):
        return self.holds


def hom_map_is_bijective(F: FunctorData, a, b) -> bool:
    images = [F.mor(f) for f in F.source.hom(a, b)]
    return len(set(images)) == len(images) == len(F.target.hom(F.obj(a), F.obj(b)))


def fully_faithful_failure(F: FunctorData) -> Optional[Tuple]:
    for a in F.source.objects:
        for b in F.source.objects:
            if not hom_map_is_bijective(F, a, b):
                return (a, b)
    return None


def _least_iso_preimages(F: FunctorData) -> Tuple[Dict, Dict, Optional[Hashable]]:
    C, D = F.source, F.target
    chosen, witness = {}, {}
    sources = sorted(C.objects, key=ident_key)
    for y in D.objects:
        for x in sources:
            isos = D.isomorphisms(F.obj(x), y)
            if isos:
                chosen[y] = x
                witness[y] = min(isos, key=ident_key)
                break
        else:
            return chosen, witness, y
    return chosen, witness, None


def is_equivalence(F: FunctorData) -> EquivalenceVerdict:
    """
    Decide whether F is an equivalence of categories.

    Fully faithful is checked as bijectivity on every hom-set; essential surjectivity
    by searching, for each target object, the least source object (and least
    isomorphism) reaching it. On success the verdict carries a quasi-inverse G with
    natural isomorphisms alpha: F.G => Id and beta: G.F => Id.
    """
    C, D = F.source, F.target
    bad_pair = fully_faithful_failure(F)
    chosen, witness, missed = _least_iso_preimages(F)
    verdict = EquivalenceVerdict(bad_pair is None, missed is None)
    if bad_pair is not None:
        verdict.witness = f"hom-map on ({format_ident(bad_pair[0])}, {format_ident(bad_pair[1])}) is not a bijection"
    elif missed is not None:
        verdict.witness = f"{format_ident(missed)} is not isomorphic to any image object"
    if not verdict.holds:
        logger.debug(f"{F.name or 'functor'} is not an equivalence: {verdict.witness}")
        return verdict

    preimage = {}
    for a in C.objects:
        for b in C.objects:
            preimage[(a, b)] = {F.mor(f): f for f in C.hom(a, b)}

    def on_morphism(g):
        m = D.record(g)
        x, x2 = chosen[m.dom], chosen[m.cod]
        shifted = D.compose_many(D.inverse(witness[m.cod]), g, witness[m.dom])
        return preimage[(x, x2)][shifted]

    G = FunctorData(D, C, dict(chosen), LazyMap(D.morphism_names, on_morphism, D.has_morphism),
                    name=f"{F.name}^-1" if F.name else '')
    FG = compose_functors(F, G, validate=False)
    GF = compose_functors(G, F, validate=False)
    verdict.quasi_inverse = G
    verdict.alpha = NatTransData(FG, identity_functor(D), dict(witness), name='alpha')
    verdict.beta = NatTransData(GF, identity_functor(C),
                                {x: preimage[(chosen[F.obj(x)], x)][witness[F.obj(x)]] for x in C.objects},
                                name='beta')
    return verdict


def snake_violations(adj: AdjointEquivalence) -> List[Violation]:
    """Both snake identities with unit beta^-1 and counit alpha, checked componentwise."""
    F, G, alpha, beta = adj.forward, adj.backward, adj.alpha, adj.beta
    C, D = F.source, F.target
    found = []
    for x in C.objects:
        unit = C.inverse(beta.at(x))
        if unit is None or D.compose(alpha.at(F.obj(x)), F.mor(unit)) != D.identity(F.obj(x)):
            found.append(Violation('SnakeFailure', f"first snake identity fails at {format_ident(x)}", (x,)))
    for y in D.objects:
        unit = C.inverse(beta.at(G.obj(y)))
        if unit is None or C.compose(G.mor(alpha.at(y)), unit) != C.identity(G.obj(y)):
            found.append(Violation('SnakeFailure', f"second snake identity fails at {format_ident(y)}", (y,)))
    return found


def promote_to_adjoint_equivalence(F: FunctorData, G: FunctorData,
                                   alpha: NatTransData, beta: NatTransData) -> AdjointEquivalence:
    """
    Replace alpha so that (F, G, alpha', beta) satisfies both snake identities.

    alpha'_y = alpha_y . F(beta_{G y}) . alpha_{F G y}^-1

    Raises:
        NotAnEquivalence: if alpha or beta is not a natural isomorphism of the right type
    """
    C, D = F.source, F.target
    problems = []
    for x in D.objects:
        a = alpha.at(x)
        if D.dom(a) != F.obj(G.obj(x)) or D.cod(a) != x or not D.is_iso(a):
            problems.append(f"alpha at {format_ident(x)}")
    for x in C.objects:
        b = beta.at(x)
        if C.dom(b) != G.obj(F.obj(x)) or C.cod(b) != x or not C.is_iso(b):
            problems.append(f"beta at {format_ident(x)}")
    if not problems:
        problems.extend(v.message for v in naturality_violations(alpha))
        problems.extend(v.message for v in naturality_violations(beta))
    if problems:
        raise NotAnEquivalence("not an equivalence: " + "; ".join(problems[:5]))

    adjusted = {}
    for y in D.objects:
        gy = G.obj(y)
        adjusted[y] = D.compose_many(alpha.at(y), F.mor(beta.at(gy)), D.inverse(alpha.at(F.obj(gy))))
    adj = AdjointEquivalence(F, G, NatTransData(alpha.source_functor, alpha.target_functor, adjusted,
                                                name=alpha.name), beta)
    failures = snake_violations(adj)
    if failures:
        raise InconsistentResult(f"promoted equivalence still fails: {failures[0].message}")
    return adj


def iso_classes(C: FiniteCategory) -> Dict[Hashable, Tuple]:
    """Partition of the objects by isomorphism, keyed by the least member."""
    uf = UnionFind(C.objects)
    for i, a in enumerate(C.objects):
        for b in C.objects[i + 1:]:
            if not uf.same(a, b) and C.isomorphisms(a, b):
                uf.union(a, b)
    return uf.classes()
