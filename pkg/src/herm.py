#!/usr/bin/env python3
"""
Hermitian fixed points and the Hermitian completion.

A Hermitian fixed point of (C, d, eta) is an isomorphism h: c -> d(c) with
d(h) . eta_c == h. Herm(A) has these as objects, the hom-sets of C as hom-sets and
the dagger f -> h1^-1 . d(f) . h2. Completions are kept on A, one per positivity
notion, so that the unit and counit built from them compose with strict equality.
"""

from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Tuple

import numpy as np

from .dagger import DaggerStructure, is_isometry, is_unitary, unitary_iso_classes
from .errors import (
    InconsistentResult,
    NotIso,
    PreconditionFailure,
    UnknownMorphism,
    UnknownObject,
)
from .fincat import (
    DerivedCategory,
    FunctorData,
    Morphism,
    NatTransData,
    compose_functors,
    full_subcategory,
    identity_functor,
    is_equivalence,
    opposite,
)
from .involutive import (
    AntiInvolutiveCategory,
    InvolutiveFunctor,
    InvolutiveNatTrans,
    T_on_category,
    T_on_functor,
    compose_involutive_functors,
    identity_involutive_functor,
    involutive_functor_violations,
)
from .logger import logger
from .utils import LazyMap, UnionFind, format_ident, partition_of, sort_idents


@dataclass(frozen=True)
class HermitianFixedPoint:
    object: Hashable
    h: Hashable

    @property
    def key(self) -> Tuple:
        return (self.object, self.h)


def is_fixed_point(A: AntiInvolutiveCategory, c, h) -> bool:
    C = A.base
    if not C.has_object(c) or not C.has_morphism(h):
        return False
    if C.dom(h) != c or C.cod(h) != A.d_obj(c) or not C.is_iso(h):
        return False
    return C.compose(A.d_mor(h), A.eta_at(c)) == h


def enumerate_fixed_points(A: AntiInvolutiveCategory) -> List[HermitianFixedPoint]:
    """Every Hermitian fixed point, objects and then h in identifier order."""
    C = A.base
    points = []
    for c in sort_idents(C.objects):
        for h in sort_idents(C.isomorphisms(c, A.d_obj(c))):
            if C.compose(A.d_mor(h), A.eta_at(c)) == h:
                points.append(HermitianFixedPoint(c, h))
    logger.debug(f"{A.label}: {len(points)} Hermitian fixed points")
    return points


def _inverse_or_raise(C, h):
    inv = C.inverse(h)
    if inv is None:
        raise NotIso(f"{format_ident(h)} is not an isomorphism")
    return inv


def adjoint_wrt(A: AntiInvolutiveCategory, h1, h2, f):
    """
    Adjoint of f: c1 -> c2 with respect to fixed points h1 on c1 and h2 on c2.

    Returns:
        h1^-1 . d(f) . h2, a morphism c2 -> c1

    Raises:
        CompositionError: when f, h1 and h2 do not line up
    """
    C = A.base
    return C.compose_many(_inverse_or_raise(C, h1), A.d_mor(f), h2)


class HermCategory(DerivedCategory):
    """
    Herm(A), or Herm_P(A) when a positivity notion is given.

    Objects are (c, h) pairs, morphisms are (f, (c1, h1), (c2, h2)) triples with f a
    morphism of the base. Blocks and inverses are read off the base.
    """

    def __init__(self, source: AntiInvolutiveCategory, positivity=None):
        points = enumerate_fixed_points(source)
        if positivity is not None:
            points = [p for p in points if positivity.contains(p.object, p.h)]
        self.source = source
        self.positivity = positivity
        suffix = f"_{positivity.name}" if positivity is not None and positivity.name else ''
        super().__init__(source.base, [p.key for p in points], name=f"Herm{suffix}({source.label})")
        self._hom_cache: Dict[Tuple, Tuple] = {}
        self._h_inverse = {p.key: source.base.inverse(p.h) for p in points}
        self.dagger = DaggerStructure(self, LazyMap(self.morphism_names, self._adjoint, self.has_morphism),
                                      name=f"dagger of {self.name}")
        logger.info(f"Built {self.name} with {len(self.objects)} objects")

    def has_morphism(self, m) -> bool:
        if not isinstance(m, tuple) or len(m) != 3:
            return False
        f, p, q = m
        if p not in self._object_set or q not in self._object_set or not self.base.has_morphism(f):
            return False
        rec = self.base.record(f)
        return rec.dom == p[0] and rec.cod == q[0]

    def record(self, m) -> Morphism:
        if not self.has_morphism(m):
            raise UnknownMorphism(f"{format_ident(m)} is not a morphism of {self.label}")
        return Morphism(m, m[1], m[2])

    def hom(self, p, q) -> Tuple:
        key = (p, q)
        cached = self._hom_cache.get(key)
        if cached is None:
            if p in self._object_set and q in self._object_set:
                cached = tuple((f, p, q) for f in self.base.hom(p[0], q[0]))
            else:
                cached = ()
            self._hom_cache[key] = cached
        return cached

    def identity(self, p):
        if p not in self._object_set:
            raise UnknownObject(f"{format_ident(p)} is not an object of {self.label}")
        return (self.base.identity(p[0]), p, p)

    def compose(self, g, f):
        self.record(g)
        self.record(f)
        if f[2] != g[1]:
            self._raise_composition(g, f)
        return (self.base.compose(g[0], f[0]), f[1], g[2])

    def local_index(self, m) -> int:
        return self.base.local_index(m[0])

    def block(self, p, q, r) -> np.ndarray:
        return self.base.block(p[0], q[0], r[0])

    def _inverse_array(self, p, q) -> np.ndarray:
        return self.base._inverse_array(p[0], q[0])

    def _adjoint(self, m):
        f, p, q = m
        A = self.source
        return (self.base.compose_many(self._h_inverse[p], A.d_mor(f), q[1]), q, p)

    def __eq__(self, other):
        if self is other:
            return True
        if isinstance(other, HermCategory):
            return self.source is other.source and self.positivity is other.positivity
        return NotImplemented

    def __hash__(self):
        return hash(('herm', id(self.source), id(self.positivity)))


def herm_completion(A: AntiInvolutiveCategory, positivity=None) -> HermCategory:
    """Herm(A); kept on A, so the same object is returned for the same (A, positivity)."""
    H = A.completions.get(positivity)
    if H is None:
        H = A.completions[positivity] = HermCategory(A, positivity)
    return H


def _herm_object_map(Fi: InvolutiveFunctor, source: HermCategory, target: HermCategory) -> LazyMap:
    F, E = Fi.functor, Fi.target.base

    def on_object(p):
        c, h = p
        image = (F.obj(c), E.compose(Fi.at(c), F.mor(h)))
        if not target.has_object(image):
            if target.positivity is not None:
                raise PreconditionFailure(f"{Fi.name or 'functor'} sends {format_ident(p)} outside {target.label}")
            raise InconsistentResult(f"{format_ident(image)} is not a Hermitian fixed point")
        return image

    return LazyMap(lambda: source.objects, on_object, source.has_object)


def herm_functor(Fi: InvolutiveFunctor, source_positivity=None, target_positivity=None) -> FunctorData:
    """Herm F: (c, h) -> (F c, phi_c . F(h)) and f -> F f."""
    H1 = herm_completion(Fi.source, source_positivity)
    H2 = herm_completion(Fi.target, target_positivity)
    objects = _herm_object_map(Fi, H1, H2)
    F = Fi.functor
    morphisms = LazyMap(H1.morphism_names,
                        lambda m: (F.mor(m[0]), objects[m[1]], objects[m[2]]),
                        H1.has_morphism)
    return FunctorData(H1, H2, objects, morphisms, name=f"Herm({Fi.name})" if Fi.name else 'Herm')


def herm_nat_trans(ai: InvolutiveNatTrans) -> NatTransData:
    """
    Herm alpha: components alpha_c between the image fixed points.

    Raises:
        InconsistentResult: when a component is not an isometry
    """
    HF, HG = herm_functor(ai.source), herm_functor(ai.target)
    H1, H2 = HF.source, HF.target
    alpha = NatTransData(HF, HG, {p: (ai.at(p[0]), HF.obj(p), HG.obj(p)) for p in H1.objects})
    for p in H1.objects:
        if not is_isometry(H2.dagger, alpha.at(p)):
            raise InconsistentResult(f"Herm of an involutive transformation is not isometric at {format_ident(p)}")
    return alpha


def herm_is_functorial(Gi: InvolutiveFunctor, Fi: InvolutiveFunctor) -> bool:
    """Herm(G . F) == Herm(G) . Herm(F) as functor data."""
    whole = herm_functor(compose_involutive_functors(Gi, Fi))
    parts = compose_functors(herm_functor(Gi), herm_functor(Fi), validate=False)
    return whole == parts


# -- transfer -------------------------------------------------------------------


def transfer(A: AntiInvolutiveCategory, c, h, g) -> HermitianFixedPoint:
    """
    Transfer of h by g: c' -> c, namely d(g) . h . g.

    Raises:
        NotIso: when g is not an isomorphism
    """
    C = A.base
    if not C.is_iso(g):
        raise NotIso(f"cannot transfer along {format_ident(g)}: not an isomorphism")
    moved = HermitianFixedPoint(C.dom(g), C.compose_many(A.d_mor(g), h, g))
    if not is_fixed_point(A, moved.object, moved.h):
        raise InconsistentResult(f"transfer of {format_ident(h)} by {format_ident(g)} is not a fixed point")
    return moved


def transfer_orbit(A: AntiInvolutiveCategory, c, h) -> List[HermitianFixedPoint]:
    """All transfers of (c, h) along isomorphisms into c, in identifier order."""
    C = A.base
    seen = {}
    for c2 in C.objects:
        for g in C.isomorphisms(c2, c):
            p = HermitianFixedPoint(c2, C.compose_many(A.d_mor(g), h, g))
            seen[p.key] = p
    return [seen[k] for k in sort_idents(seen)]


def dual_fixed_point(A: AntiInvolutiveCategory, c, h) -> HermitianFixedPoint:
    """(d c, d(h)^-1); h itself is a unitary (c, h) -> (d c, d(h)^-1) in Herm(A)."""
    C = A.base
    dual = HermitianFixedPoint(A.d_obj(c), _inverse_or_raise(C, A.d_mor(h)))
    if not is_fixed_point(A, dual.object, dual.h):
        raise InconsistentResult(f"dual of {format_ident((c, h))} is not a fixed point")
    H = herm_completion(A)
    if not is_unitary(H.dagger, (h, (c, h), dual.key)):
        raise InconsistentResult(f"{format_ident(h)} is not unitary onto the dual fixed point")
    return dual


def unitary_classes_via_transfer(A: AntiInvolutiveCategory, oracle_bound: Optional[int] = None,
                                 cross_check: bool = True) -> Dict[Hashable, Tuple]:
    """
    Partition of the fixed points into transfer orbits.

    Transfer orbits are exactly the unitary isomorphism classes of Herm(A). When there
    are at most oracle_bound fixed points the brute-force unitary search is run as well
    and the two partitions must agree.

    Returns:
        Dict from least member to the sorted tuple of members, keys being (c, h) pairs

    Raises:
        InconsistentResult: when the cross-check disagrees
    """
    keys = [p.key for p in enumerate_fixed_points(A)]
    uf = UnionFind(keys)
    seen = set()
    for key in keys:
        if key in seen:
            continue
        for p in transfer_orbit(A, *key):
            uf.union(key, p.key)
            seen.add(p.key)
    classes = uf.classes()

    if cross_check:
        if oracle_bound is None:
            from .config import load_config
            oracle_bound = load_config()['oracle_bound']
        if len(keys) <= oracle_bound:
            oracle = unitary_iso_classes(herm_completion(A).dagger)
            if partition_of(oracle) != partition_of(classes):
                raise InconsistentResult(f"transfer orbits of {A.label} differ from its unitary classes")
        else:
            logger.warning(f"Skipping unitary-class cross-check on {A.label}: "
                           f"{len(keys)} fixed points exceed the bound of {oracle_bound}")
    return classes


# -- unit, counit and triangles -------------------------------------------------


def unit_U(D: DaggerStructure) -> FunctorData:
    """U: D -> Herm(T D), x -> (x, id_x)."""
    C = D.base
    H = herm_completion(T_on_category(D))
    objects = {x: (x, C.identity(x)) for x in C.objects}
    morphisms = {m.name: (m.name, objects[m.dom], objects[m.cod]) for m in C.morphisms}
    return FunctorData(C, H, objects, morphisms, name=f"U_{D.name}" if D.name else 'U')


def counit_K(A: AntiInvolutiveCategory, positivity=None) -> InvolutiveFunctor:
    """K: T(Herm A) -> A, (c, h) -> c with datum phi_(c,h) = h."""
    H = herm_completion(A, positivity)
    K = FunctorData(H, A.base,
                    LazyMap(lambda: H.objects, lambda p: p[0], H.has_object),
                    LazyMap(H.morphism_names, lambda m: m[0], H.has_morphism),
                    name=f"K_{A.name}" if A.name else 'K')
    return InvolutiveFunctor(T_on_category(H.dagger), A, K,
                             LazyMap(lambda: H.objects, lambda p: p[1], H.has_object), name=K.name)


def restrict_exists_fix(A: AntiInvolutiveCategory) -> AntiInvolutiveCategory:
    """(d, eta) restricted to the full subcategory of objects admitting a fixed point."""
    keep = {p.object for p in enumerate_fixed_points(A)}
    sub = full_subcategory(A.base, keep, name=f"{A.base.name}|fix")
    d = FunctorData(opposite(sub), sub, {x: A.d_obj(x) for x in sub.objects},
                    LazyMap(sub.morphism_names, A.d_mor, sub.has_morphism), name='d')
    return AntiInvolutiveCategory(sub, d, {x: A.eta_at(x) for x in sub.objects}, name=f"{A.label}|fix")


@dataclass
class CounitVerdict:
    involutive_valid: bool
    fully_faithful: bool
    essentially_surjective: bool
    image_matches: bool
    witness: Optional[str] = None

    @property
    def holds(self) -> bool:
        return self.involutive_valid and self.fully_faithful and self.essentially_surjective and self.image_matches

    def __bool__(self):
        return self.holds


def counit_equivalence(A: AntiInvolutiveCategory) -> CounitVerdict:
    """K corestricted to the objects admitting a fixed point, checked for equivalence."""
    Ki = counit_K(A)
    problems = involutive_functor_violations(Ki)
    sub = restrict_exists_fix(A)
    K = Ki.functor
    corestricted = FunctorData(K.source, sub.base, K.object_map, K.morphism_map, name=K.name)
    verdict = is_equivalence(corestricted)
    image = {K.obj(p) for p in K.source.objects}
    result = CounitVerdict(not problems, verdict.fully_faithful, verdict.essentially_surjective,
                           image == set(sub.objects))
    if problems:
        result.witness = problems[0].message
    elif not verdict.holds:
        result.witness = verdict.witness
    return result


@dataclass
class TriangleVerdict:
    checks: Dict[str, bool] = field(default_factory=dict)
    failures: Dict[str, str] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(self.checks.values())

    def __bool__(self):
        return self.holds


def _first_triangle(A: AntiInvolutiveCategory, verdict: TriangleVerdict):
    H = herm_completion(A)
    composite = compose_functors(herm_functor(counit_K(A)), unit_U(H.dagger), validate=False)
    difference = composite.first_difference(identity_functor(H))
    verdict.checks['triangle_herm_k_after_u'] = difference is None
    if difference is not None:
        kind, where, got, expected = difference
        verdict.failures['triangle_herm_k_after_u'] = (
            f"{kind} {format_ident(where)} goes to {format_ident(got)}, not {format_ident(expected)}")


def check_triangle_identities(X) -> TriangleVerdict:
    """
    Strict triangle identities for the unit U and counit K.

    For an anti-involutive X: Herm(K_X) . U_Herm(X) is the identity of Herm(X).
    For a dagger X: additionally K_T(X) . T(U_X) is the identity involutive functor on T(X).
    Both are compared field by field, not up to isomorphism.
    """
    verdict = TriangleVerdict()
    if isinstance(X, AntiInvolutiveCategory):
        _first_triangle(X, verdict)
        return verdict

    TX = T_on_category(X)
    _first_triangle(TX, verdict)
    H = herm_completion(TX)
    composite = compose_involutive_functors(counit_K(TX), T_on_functor(X, H.dagger, unit_U(X)))
    identity = identity_involutive_functor(TX)
    difference = composite.functor.first_difference(identity.functor)
    if difference is None:
        for x in sort_idents(X.base.objects):
            if composite.at(x) != identity.at(x):
                difference = ('datum', x, composite.at(x), identity.at(x))
                break
    verdict.checks['triangle_k_after_t_u'] = difference is None
    if difference is not None:
        kind, where, got, expected = difference
        verdict.failures['triangle_k_after_t_u'] = (
            f"{kind} {format_ident(where)} goes to {format_ident(got)}, not {format_ident(expected)}")
    return verdict
