#!/usr/bin/env python3
"""
Positivity notions, Herm_P, and the checks built on them.

A positivity notion picks, on every object, a non-empty set of Hermitian fixed
points closed under transfer, so none exists unless every object admits a fixed
point. This module also holds the T_P biequivalence check and the comparison
between dagger functors and fixed points of the functor category.
"""

from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Tuple

from .dagger import (
    DaggerStructure,
    canonical_positivity,
    is_dagger_equivalence,
    is_dagger_functor,
    is_isometric_nat_trans,
)
from .errors import (
    FincatError,
    InconsistentResult,
    NotADaggerFunctor,
    ValidationError,
    ValidationReport,
    Violation,
)
from .fincat import FunctorData, is_equivalence
from .functor_category import fixed_point_to_involutive_functor, functor_category_involution
from .herm import (
    HermCategory,
    HermitianFixedPoint,
    counit_K,
    enumerate_fixed_points,
    herm_completion,
    is_fixed_point,
    transfer_orbit,
    unitary_classes_via_transfer,
)
from .involutive import (
    AntiInvolutiveCategory,
    InvolutiveFunctor,
    InvolutiveNatTrans,
    T_on_category,
    involutive_functor_violations,
    involutive_nat_trans_violations,
)
from .logger import logger
from .utils import UnionFind, format_ident, sort_idents


class PositivityNotion:
    """Sets P_c of Hermitian fixed points, one per object of the involution."""

    def __init__(self, involution: AntiInvolutiveCategory, sets: Mapping, name: str = ''):
        self.involution = involution
        self.sets: Dict[Hashable, frozenset] = {c: frozenset(sets.get(c, ())) for c in involution.objects}
        self.name = name

    def contains(self, c, h) -> bool:
        return h in self.sets.get(c, ())

    def positive_fixed_points(self) -> List[HermitianFixedPoint]:
        return [HermitianFixedPoint(c, h) for c in sort_idents(self.sets) for h in sort_idents(self.sets[c])]

    def __repr__(self):
        return f"<PositivityNotion {self.name} on {self.involution.label}>"


def positive_fixed_points(P: PositivityNotion) -> List[HermitianFixedPoint]:
    return P.positive_fixed_points()


def positivity_violations(A: AntiInvolutiveCategory, sets: Mapping) -> List[Violation]:
    C = A.base
    found = []
    for c in sets:
        if not C.has_object(c):
            found.append(Violation('UnknownObject', f"{format_ident(c)} is not an object of {C.label}", (c,)))
    if found:
        return found
    for c in C.objects:
        members = sets.get(c, ())
        if not members:
            found.append(Violation('EmptyOnObject', f"no positive fixed point on {format_ident(c)}", (c,)))
        for h in sort_idents(members):
            if not is_fixed_point(A, c, h):
                found.append(Violation('NotHermitian', f"{format_ident(h)} is not a Hermitian fixed point on "
                                                       f"{format_ident(c)}", (c, h)))
    if found:
        return found
    for c in C.objects:
        for h in sort_idents(sets.get(c, ())):
            for p in transfer_orbit(A, c, h):
                if p.h not in sets.get(p.object, ()):
                    found.append(Violation('NotTransferClosed', f"transfer of {format_ident(h)} to "
                                                                f"{format_ident(p.object)} gives {format_ident(p.h)}, "
                                                                f"which is missing", (c, h, p.object, p.h)))
    return found


def validate_positivity(A: AntiInvolutiveCategory, sets: Mapping, name: str = '') -> PositivityNotion:
    """
    Check raw sets against the positivity axioms.

    Every object needs a positive fixed point, so an involution with a
    fixed-point-free object has no positivity notion at all.

    Raises:
        ValidationError: codes UnknownObject, EmptyOnObject, NotHermitian, NotTransferClosed
    """
    found = positivity_violations(A, sets)
    if found:
        raise ValidationError(f"positivity {name or '<anonymous>'}", ValidationReport(found))
    return PositivityNotion(A, sets, name)


def close_under_transfer(A: AntiInvolutiveCategory, seeds: Mapping, name: str = '') -> PositivityNotion:
    """Smallest transfer-closed family containing the seeds, then validated."""
    C = A.base
    sets: Dict[Hashable, set] = {c: set() for c in C.objects}
    for c, members in seeds.items():
        for h in members:
            if not is_fixed_point(A, c, h):
                raise ValidationError(f"positivity {name or '<anonymous>'}", ValidationReport([
                    Violation('NotHermitian', f"seed {format_ident(h)} is not a fixed point on {format_ident(c)}",
                              (c, h))]))
            for p in transfer_orbit(A, c, h):
                sets[p.object].add(p.h)
    return validate_positivity(A, sets, name)


def classes_to_positivity(A: AntiInvolutiveCategory, selection: Iterable[Tuple], name: str = '') -> PositivityNotion:
    """
    Positivity notion from a set of transfer classes, each given by any member (c, h).

    Raises:
        FincatError: code NotSurjectiveOntoPi0 when some object is left without a positive
            fixed point, including objects admitting none
    """
    seeds: Dict[Hashable, set] = {}
    for c, h in selection:
        seeds.setdefault(c, set()).add(h)
    C = A.base
    sets: Dict[Hashable, set] = {c: set() for c in C.objects}
    for c, members in seeds.items():
        for h in members:
            if not is_fixed_point(A, c, h):
                raise ValidationError(f"positivity {name or '<anonymous>'}", ValidationReport([
                    Violation('NotHermitian', f"{format_ident(h)} is not a fixed point on {format_ident(c)}", (c, h))]))
            for p in transfer_orbit(A, c, h):
                sets[p.object].add(p.h)
    missing = sort_idents(c for c in C.objects if not sets[c])
    if missing:
        raise FincatError(f"selected classes miss the isomorphism class of {format_ident(missing[0])}",
                          code='NotSurjectiveOntoPi0')
    return validate_positivity(A, sets, name)


def herm_P(A: AntiInvolutiveCategory, P: PositivityNotion) -> HermCategory:
    """Full dagger subcategory of Herm(A) on the positive fixed points."""
    return herm_completion(A, P)


def _class_lookup(classes: Dict[Hashable, Tuple]) -> Dict[Tuple, Hashable]:
    return {member: rep for rep, members in classes.items() for member in members}


def positive_classes(A: AntiInvolutiveCategory, P: PositivityNotion,
                     classes: Optional[Dict[Hashable, Tuple]] = None) -> List[Hashable]:
    """Representatives of the transfer classes that contain a positive fixed point."""
    if classes is None:
        classes = unitary_classes_via_transfer(A, cross_check=False)
    return [rep for rep, members in classes.items() if any(P.contains(c, h) for c, h in members)]


def preserves_positivity(Fi: InvolutiveFunctor, P: PositivityNotion, Q: PositivityNotion) -> bool:
    """
    Whether (F, phi) sends P into Q.

    Checked elementwise (phi_c . F(h) in Q for every h in P) and again on transfer
    classes (the class map sends [P] into [Q]); the two must agree.

    Raises:
        InconsistentResult: when the two readings disagree
    """
    F, E = Fi.functor, Fi.target.base

    def image(c, h):
        return (F.obj(c), E.compose(Fi.at(c), F.mor(h)))

    elementwise = all(Q.contains(*image(p.object, p.h)) for p in P.positive_fixed_points())

    source_classes = unitary_classes_via_transfer(Fi.source, cross_check=False)
    target_classes = unitary_classes_via_transfer(Fi.target, cross_check=False)
    target_of = _class_lookup(target_classes)
    good_targets = set(positive_classes(Fi.target, Q, target_classes))
    by_class = all(target_of[image(*rep)] in good_targets
                   for rep in positive_classes(Fi.source, P, source_classes))

    if elementwise != by_class:
        raise InconsistentResult(f"{Fi.name or 'functor'}: elementwise and class-level positivity checks disagree")
    return elementwise


# -- T_P biequivalence ----------------------------------------------------------------


@dataclass
class BiequivalenceVerdict:
    unit_dagger_equivalence: bool
    counit_pcat_equivalence: bool
    failures: List[str] = field(default_factory=list)
    witnesses: Dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.unit_dagger_equivalence and self.counit_pcat_equivalence

    def __bool__(self):
        return self.holds


def positive_unit(D: DaggerStructure, P: PositivityNotion) -> FunctorData:
    """U_P: D -> Herm_P(T D), x -> (x, id_x)."""
    C = D.base
    H = herm_P(P.involution, P)
    objects = {x: (x, C.identity(x)) for x in C.objects}
    morphisms = {m.name: (m.name, objects[m.dom], objects[m.cod]) for m in C.morphisms}
    return FunctorData(C, H, objects, morphisms, name=f"U_P_{D.name}" if D.name else 'U_P')


def transfer_witness(D: DaggerStructure, c, h) -> Optional[Hashable]:
    """Least isomorphism a out of c with a^dag . a == h, that is, h is the transfer of an identity along a."""
    C = D.base
    for y in sort_idents(C.objects):
        for a in sort_idents(C.isomorphisms(c, y)):
            if C.compose(D.adjoint(a), a) == h:
                return a
    return None


def check_Tp_biequivalence(D: DaggerStructure) -> BiequivalenceVerdict:
    """
    Unit and counit of T_P on one dagger category.

    (i) U_P is a dagger equivalence onto Herm_P(T D); every positive h is a^dag . a
    and so is unitarily isomorphic to some (y, id).
    (ii) K_P: T(Herm_P) -> T(D) is involutive, an equivalence, preserves the
    positivity notions and hits every positive class.
    """
    A = T_on_category(D)
    P = canonical_positivity(D)
    H = herm_P(A, P)
    verdict = BiequivalenceVerdict(True, True)

    U = positive_unit(D, P)
    unit = is_dagger_equivalence(D, H.dagger, U)
    factored, unfactored = {}, []
    for p in P.positive_fixed_points():
        a = transfer_witness(D, p.object, p.h)
        if a is None:
            unfactored.append(p.key)
        else:
            factored[p.key] = a
    verdict.unit_dagger_equivalence = unit.holds and not unfactored
    if not unit.holds:
        verdict.failures.append(f"tp_unit_dagger_equivalence: {unit.failure}")
    elif unfactored:
        verdict.failures.append(f"tp_unit_dagger_equivalence: positive {format_ident(unfactored[0])} "
                                f"is not a^dag . a for any isomorphism a")
    verdict.witnesses['factorisations'] = factored

    Ki = counit_K(A, P)
    problems = involutive_functor_violations(Ki)
    source_P = canonical_positivity(H.dagger)
    preserves = not problems and preserves_positivity(Ki, source_P, P)
    underlying = is_equivalence(Ki.functor)
    source_classes = unitary_classes_via_transfer(Ki.source, cross_check=False)
    target_classes = unitary_classes_via_transfer(A, cross_check=False)
    target_of = _class_lookup(target_classes)
    E = A.base
    hit = {target_of[(Ki.functor.obj(p.object), E.compose(Ki.at(p.object), Ki.functor.mor(p.h)))]
           for p in source_P.positive_fixed_points()}
    surjective = set(positive_classes(A, P, target_classes)) <= hit
    verdict.counit_pcat_equivalence = not problems and preserves and underlying.holds and surjective
    if problems:
        verdict.failures.append(f"tp_counit_pcat_equivalence: {problems[0].message}")
    elif not preserves:
        verdict.failures.append("tp_counit_pcat_equivalence: counit does not preserve positivity")
    elif not underlying.holds:
        verdict.failures.append(f"tp_counit_pcat_equivalence: {underlying.witness}")
    elif not surjective:
        verdict.failures.append("tp_counit_pcat_equivalence: some positive class is not hit")
    verdict.witnesses['positive_classes'] = len(positive_classes(A, P, target_classes))
    logger.info(f"T_P check on {D.name or D.base.label}: unit {verdict.unit_dagger_equivalence}, "
                f"counit {verdict.counit_pcat_equivalence}")
    return verdict


# -- dagger functors against fixed points of the functor category ---------------------


@dataclass
class CorollaryReport:
    fixed_points: List[Tuple]
    dagger_functors: List[Tuple]
    embedded: List[Tuple]
    essential_image: List[Tuple]
    positivity_preserving: List[Tuple]
    embedding_fully_faithful: bool
    image_matches: bool

    @property
    def holds(self) -> bool:
        return self.embedding_fully_faithful and self.image_matches

    def __bool__(self):
        return self.holds


def dagger_functors_vs_fixed_points(D1: DaggerStructure, D2: DaggerStructure,
                                   cap: Optional[int] = None) -> CorollaryReport:
    """
    Compare dagger functors D1 -> D2 with Hermitian fixed points of Fun(T D1, T D2).

    Dagger functors embed as (F, identity datum). The embedding must be fully faithful
    (isometric transformations are exactly the involutive ones) and its essential
    image must be the fixed points preserving the canonical positivity notions.

    Raises:
        SearchSpaceExceeded: when enumeration passes the cap
    """
    A1, A2 = T_on_category(D1), T_on_category(D2)
    fc = functor_category_involution(A1, A2, cap)
    fun = fc.base
    points = enumerate_fixed_points(fc.involution)
    involutive = {p.key: fixed_point_to_involutive_functor(fc, p) for p in points}

    daggers = [k for k in fc.functors if is_dagger_functor(D1, D2, fc.functors[k])]
    embedded = []
    for k in daggers:
        ident = fun.identity(k)
        if not is_fixed_point(fc.involution, k, ident):
            raise NotADaggerFunctor(f"dagger functor {format_ident(k)} does not embed as a fixed point")
        embedded.append((k, ident))

    def involutive_between(p, q) -> List:
        return [t for t in fun.hom(p[0], q[0])
                if not involutive_nat_trans_violations(
                    InvolutiveNatTrans(involutive[p], involutive[q], fc.transformations[t]))]

    fully_faithful = True
    for p in embedded:
        for q in embedded:
            isometric = {t for t in fun.hom(p[0], q[0])
                         if is_isometric_nat_trans(D1, D2, fc.functors[p[0]], fc.functors[q[0]],
                                                   fc.transformations[t])}
            if isometric != set(involutive_between(p, q)):
                fully_faithful = False

    uf = UnionFind([p.key for p in points])
    keys = [p.key for p in points]
    for i, p in enumerate(keys):
        for q in keys[i + 1:]:
            if not uf.same(p, q) and any(fun.is_iso(t) for t in involutive_between(p, q)):
                uf.union(p, q)
    image = sort_idents(q for q in keys if any(uf.same(q, e) for e in embedded))

    P1, P2 = canonical_positivity(D1), canonical_positivity(D2)
    preserving = sort_idents(p.key for p in points if preserves_positivity(involutive[p.key], P1, P2))
    report = CorollaryReport(
        fixed_points=keys,
        dagger_functors=sort_idents(daggers),
        embedded=embedded,
        essential_image=image,
        positivity_preserving=preserving,
        embedding_fully_faithful=fully_faithful,
        image_matches=image == preserving,
    )
    logger.info(f"Fun({D1.name}, {D2.name}): {len(keys)} fixed points, {len(daggers)} dagger functors")
    return report
