#!/usr/bin/env python3
"""
Dagger structures on finite categories.

A dagger is an identity-on-objects contravariant involution on morphisms. This
module classifies morphisms, checks dagger functors and dagger equivalences,
decides indefiniteness, and computes unitary classes and canonical positivity.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Hashable, List, Mapping, Optional, Set, Tuple

from .errors import (
    NotADaggerFunctor,
    UnknownMorphism,
    ValidationError,
    ValidationReport,
    Violation,
)
from .fincat import (
    FiniteCategory,
    FunctorData,
    NatTransData,
    composition_violations,
    compose_functors,
    enumerate_functors,
    enumerate_nat_transformations,
    fully_faithful_failure,
    identity_functor,
    opposite,
)
from .logger import logger
from .utils import LazyMap, UnionFind, format_ident, sort_idents


class DaggerStructure:
    """A category together with its dagger map."""

    def __init__(self, base: FiniteCategory, dag: Mapping, name: str = ''):
        self.base = base
        self.dag = dag
        self.name = name

    def adjoint(self, f):
        try:
            return self.dag[f]
        except KeyError:
            raise UnknownMorphism(f"{format_ident(f)} has no adjoint in {self.name or self.base.label}")

    @cached_property
    def functor(self) -> FunctorData:
        """The dagger as a functor out of the opposite category."""
        C = self.base
        return FunctorData(opposite(C), C,
                           LazyMap(lambda: C.objects, lambda x: x, C.has_object),
                           self.dag, name=self.name or 'dagger')

    @cached_property
    def involution(self):
        """T of this dagger: d is the dagger and eta the identity, built once per structure."""
        from .involutive import AntiInvolutiveCategory
        C = self.base
        return AntiInvolutiveCategory(C, self.functor,
                                      LazyMap(lambda: C.objects, C.identity, C.has_object),
                                      name=f"T({self.name})" if self.name else f"T({C.label})")

    def __repr__(self):
        return f"<DaggerStructure {self.name} on {self.base.label}>"


def dagger_violations(D: DaggerStructure) -> List[Violation]:
    C = D.base
    found = []
    for a in C.objects:
        for b in C.objects:
            for f in C.hom(a, b):
                if f not in D.dag:
                    found.append(Violation('NotIdentityOnObjects', f"{format_ident(f)} has no adjoint", (f,)))
                    continue
                g = D.dag[f]
                if not C.has_morphism(g) or C.dom(g) != b or C.cod(g) != a:
                    found.append(Violation(
                        'NotIdentityOnObjects',
                        f"adjoint of {format_ident(f)}: {format_ident(a)} -> {format_ident(b)} is not a morphism "
                        f"{format_ident(b)} -> {format_ident(a)}", (f, g)))
    if found:
        return found
    for x in C.objects:
        if D.dag[C.identity(x)] != C.identity(x):
            found.append(Violation('NotInvolutive', f"adjoint of the identity on {format_ident(x)} is not the identity", (x,)))
    for f in C.morphism_names():
        if D.dag[D.dag[f]] != f:
            found.append(Violation('NotInvolutive', f"adjoint of the adjoint of {format_ident(f)} is not itself", (f,)))
    found.extend(composition_violations(D.functor, code='NotContravariant'))
    return found


def validate_dagger(C: FiniteCategory, dag: Mapping, name: str = '') -> DaggerStructure:
    """
    Check that dag is a dagger on C.

    Raises:
        ValidationError: codes NotIdentityOnObjects, NotContravariant, NotInvolutive
    """
    D = dag if isinstance(dag, DaggerStructure) else DaggerStructure(C, dag, name)
    found = dagger_violations(D)
    if found:
        raise ValidationError(f"dagger {name or D.name or '<anonymous>'}", ValidationReport(found))
    logger.info(f"Validated dagger {D.name or name} on {C.describe()}")
    return D


@dataclass(frozen=True)
class MorphismClassification:
    self_adjoint: bool
    isometry: bool
    unitary: bool
    positive_automorphism: bool
    positive_endomorphism: bool


def is_isometry(D: DaggerStructure, f) -> bool:
    C = D.base
    return C.compose(D.adjoint(f), f) == C.identity(C.dom(f))


def is_unitary(D: DaggerStructure, f) -> bool:
    C = D.base
    return is_isometry(D, f) and C.compose(f, D.adjoint(f)) == C.identity(C.cod(f))


def positive_automorphisms(D: DaggerStructure, x) -> Set:
    """{a^dag . a : a an isomorphism out of x}."""
    C = D.base
    return {C.compose(D.adjoint(a), a) for y in C.objects for a in C.isomorphisms(x, y)}


def positive_endomorphisms(D: DaggerStructure, x) -> Set:
    """{a^dag . a : a any morphism out of x}."""
    C = D.base
    return {C.compose(D.adjoint(a), a) for y in C.objects for a in C.hom(x, y)}


def classify_morphism(D: DaggerStructure, f) -> MorphismClassification:
    """
    Classify f by the dagger.

    Raises:
        UnknownMorphism: when f is not a morphism of the base
    """
    C = D.base
    m = C.record(f)
    endo = m.dom == m.cod
    self_adjoint = endo and D.adjoint(f) == f
    isometry = is_isometry(D, f)
    unitary = isometry and C.compose(f, D.adjoint(f)) == C.identity(m.cod)
    positive_auto = endo and C.is_iso(f) and f in positive_automorphisms(D, m.dom)
    positive_endo = endo and f in positive_endomorphisms(D, m.dom)
    return MorphismClassification(self_adjoint, isometry, unitary, positive_auto, positive_endo)


def dagger_functor_failure(D1: DaggerStructure, D2: DaggerStructure, F: FunctorData) -> Optional[Hashable]:
    """First morphism (identifier order) where F(f^dag) != F(f)^dag, or None."""
    for f in sort_idents(D1.base.morphism_names()):
        if F.mor(D1.adjoint(f)) != D2.adjoint(F.mor(f)):
            return f
    return None


def is_dagger_functor(D1: DaggerStructure, D2: DaggerStructure, F: FunctorData) -> bool:
    failure = dagger_functor_failure(D1, D2, F)
    if failure is not None:
        logger.debug(f"{F.name or 'functor'} does not commute with the daggers at {format_ident(failure)}")
    return failure is None


def is_isometric_nat_trans(D1: DaggerStructure, D2: DaggerStructure, F: FunctorData,
                           G: FunctorData, alpha: NatTransData) -> bool:
    return all(is_isometry(D2, alpha.at(x)) for x in D1.base.objects)


def isometric_iff_unitary(D2: DaggerStructure, alpha: NatTransData) -> Tuple[bool, bool]:
    """(isometric, unitary) for a natural transformation; they agree on natural isomorphisms."""
    objects = alpha.source.objects
    return (all(is_isometry(D2, alpha.at(x)) for x in objects),
            all(is_unitary(D2, alpha.at(x)) for x in objects))


@dataclass
class DaggerEquivalenceVerdict:
    fully_faithful: bool
    unitarily_surjective: bool
    witnesses: Dict
    failure: Optional[str] = None

    @property
    def holds(self) -> bool:
        return self.fully_faithful and self.unitarily_surjective

    def __bool__(self):
        return self.holds


def unitary_witness(D1: DaggerStructure, D2: DaggerStructure, F: FunctorData, y) -> Optional[Tuple]:
    """Least (x, u) with u: F(x) -> y unitary."""
    C2 = D2.base
    for x in sort_idents(D1.base.objects):
        for u in sort_idents(C2.isomorphisms(F.obj(x), y)):
            if is_unitary(D2, u):
                return (x, u)
    return None


def is_dagger_equivalence(D1: DaggerStructure, D2: DaggerStructure, F: FunctorData) -> DaggerEquivalenceVerdict:
    """
    Fully faithful and surjective up to unitaries.

    Raises:
        NotADaggerFunctor: when F does not commute with the daggers
    """
    failure = dagger_functor_failure(D1, D2, F)
    if failure is not None:
        raise NotADaggerFunctor(f"{F.name or 'functor'} fails to commute with the daggers at {format_ident(failure)}")
    bad_pair = fully_faithful_failure(F)
    witnesses = {}
    missed = None
    for y in D2.base.objects:
        found = unitary_witness(D1, D2, F, y)
        if found is None:
            missed = y
            break
        witnesses[y] = found
    verdict = DaggerEquivalenceVerdict(bad_pair is None, missed is None, witnesses)
    if bad_pair is not None:
        verdict.failure = f"not bijective on Hom({format_ident(bad_pair[0])}, {format_ident(bad_pair[1])})"
    elif missed is not None:
        verdict.failure = f"{format_ident(missed)} is not unitarily isomorphic to any image object"
    return verdict


def has_dagger_quasi_inverse(D1: DaggerStructure, D2: DaggerStructure, F: FunctorData,
                             cap: Optional[int] = None) -> bool:
    """Search for a dagger functor G with unitary natural isomorphisms F.G => Id and G.F => Id."""
    id1, id2 = identity_functor(D1.base), identity_functor(D2.base)
    for G in enumerate_functors(D2.base, D1.base, cap):
        if not is_dagger_functor(D2, D1, G):
            continue
        FG = compose_functors(F, G, validate=False)
        GF = compose_functors(G, F, validate=False)
        alphas = [a for a in enumerate_nat_transformations(FG, id2, cap)
                  if all(is_unitary(D2, a.at(y)) for y in D2.base.objects)]
        if not alphas:
            continue
        betas = [b for b in enumerate_nat_transformations(GF, id1, cap)
                 if all(is_unitary(D1, b.at(x)) for x in D1.base.objects)]
        if betas:
            return True
    return False


@dataclass
class IndefinitenessVerdict:
    indefinite: bool
    counterexample: Optional[Tuple] = None

    def __bool__(self):
        return self.indefinite


def self_adjoint_automorphisms(D: DaggerStructure, x) -> List:
    C = D.base
    return [a for a in sort_idents(C.isomorphisms(x, x)) if D.adjoint(a) == a]


def is_indefinite(D: DaggerStructure) -> IndefinitenessVerdict:
    """Every self-adjoint automorphism a of x is f^dag . f for some isomorphism f out of x."""
    for x in sort_idents(D.base.objects):
        candidates = self_adjoint_automorphisms(D, x)
        if not candidates:
            continue
        covered = positive_automorphisms(D, x)
        for a in candidates:
            if a not in covered:
                logger.debug(f"{D.name or 'dagger'} is not indefinite: {format_ident(a)} on {format_ident(x)}")
                return IndefinitenessVerdict(False, (x, a))
    return IndefinitenessVerdict(True)


def unitary_iso_classes(D: DaggerStructure) -> Dict[Hashable, Tuple]:
    """Partition of the objects by unitary isomorphism, keyed by the least member."""
    C = D.base
    uf = UnionFind(C.objects)
    objs = C.objects
    for i, a in enumerate(objs):
        for b in objs[i + 1:]:
            if uf.same(a, b):
                continue
            if any(is_unitary(D, u) for u in C.isomorphisms(a, b)):
                uf.union(a, b)
    return uf.classes()


def canonical_positivity(D: DaggerStructure):
    """
    Positivity notion on T(D): P_c = {a^dag . a : a an isomorphism out of c}.

    The result is run through positivity validation before it is returned.
    """
    from .involutive import T_on_category
    from .positivity import validate_positivity

    A = T_on_category(D)
    sets = {c: positive_automorphisms(D, c) for c in D.base.objects}
    return validate_positivity(A, sets, name=f"canonical({D.name})")


def automorphism_positivity_sets(D: DaggerStructure) -> Dict[Hashable, frozenset]:
    """{a^dag . a : a an automorphism of c}; agrees with canonical positivity on skeletal categories."""
    C = D.base
    return {c: frozenset(C.compose(D.adjoint(a), a) for a in C.isomorphisms(c, c)) for c in C.objects}
