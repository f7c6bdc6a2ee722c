#!/usr/bin/env python3
"""
Anti-involutive categories, involutive functors and involutive natural transformations.

An anti-involution on C is a functor d: C^op -> C with a natural isomorphism
eta: Id => d.d satisfying the two coherence equations. Involutive functors carry
a datum phi_x: F(d x) -> d(F x). The T construction turns daggers into
anti-involutions with eta the identity.
"""

from typing import Mapping, Tuple, Union

from .dagger import DaggerStructure, is_dagger_functor, is_isometric_nat_trans
from .errors import (
    InconsistentResult,
    NotADaggerFunctor,
    NotAnEquivalence,
    NotIsometric,
    PreconditionFailure,
    SourceTargetMismatch,
    ValidationError,
    ValidationReport,
    Violation,
)
from .fincat import (
    AdjointEquivalence,
    FiniteCategory,
    FunctorData,
    NatTransData,
    compose_functors,
    functor_violations,
    identity_functor,
    is_equivalence,
    naturality_violations,
    opposite,
    promote_to_adjoint_equivalence,
    snake_violations,
    vertical_compose,
)
from .logger import logger
from .utils import LazyMap, format_ident


class AntiInvolutiveCategory:
    """A category C with d: C^op -> C and eta: Id => d.d."""

    def __init__(self, base: FiniteCategory, d: FunctorData, eta: Mapping, name: str = ''):
        self.base = base
        self.d = d
        self.eta = eta
        self.name = name
        # Herm completions keyed by positivity notion, None for the full one
        self.completions: dict = {}

    @property
    def objects(self):
        return self.base.objects

    def d_obj(self, x):
        return self.d.obj(x)

    def d_mor(self, f):
        return self.d.mor(f)

    def eta_at(self, x):
        return self.eta[x]

    @property
    def label(self) -> str:
        return self.name or f"involution on {self.base.label}"

    def __repr__(self):
        return f"<AntiInvolutiveCategory {self.label}>"


def _as_functor(C: FiniteCategory, d: Union[FunctorData, Tuple[Mapping, Mapping]]) -> FunctorData:
    if isinstance(d, FunctorData):
        return d
    object_map, morphism_map = d
    return FunctorData(opposite(C), C, dict(object_map), dict(morphism_map), name='d')


def anti_involution_violations(A: AntiInvolutiveCategory) -> list:
    C, d = A.base, A.d
    found = []
    if d.source != opposite(C) or d.target != C:
        return [Violation('NotAFunctor', f"d must be a functor {C.label}^op -> {C.label}")]
    found.extend(functor_violations(d, code='NotAFunctor'))
    if found:
        return found
    for x in C.objects:
        e = A.eta.get(x)
        if e is None or not C.has_morphism(e) or C.dom(e) != x or C.cod(e) != d.obj(d.obj(x)):
            found.append(Violation('EtaNotNatural', f"eta at {format_ident(x)} is not a morphism x -> d(d(x))", (x,)))
    if found:
        return found
    for x in C.objects:
        for y in C.objects:
            for f in C.hom(x, y):
                if C.compose(d.mor(d.mor(f)), A.eta_at(x)) != C.compose(A.eta_at(y), f):
                    found.append(Violation('EtaNotNatural', f"eta is not natural at {format_ident(f)}", (f,)))
    for x in C.objects:
        if not C.is_iso(A.eta_at(x)):
            found.append(Violation('EtaNotIso', f"eta at {format_ident(x)} is not invertible", (x,)))
    if found:
        return found
    for x in C.objects:
        dx = d.obj(x)
        if C.compose(d.mor(A.eta_at(x)), A.eta_at(dx)) != C.identity(dx):
            found.append(Violation('CoherenceFailure', f"d(eta_x) . eta_dx is not the identity at {format_ident(x)}", (x,)))
        if C.compose(A.eta_at(dx), d.mor(A.eta_at(x))) != C.identity(d.obj(dx)):
            found.append(Violation('CoherenceFailure', f"eta_dx . d(eta_x) is not the identity at {format_ident(x)}", (x,)))
    return found


def validate_anti_involution(C: FiniteCategory, d, eta: Mapping, name: str = '') -> AntiInvolutiveCategory:
    """
    Check (d, eta) and wrap it.

    Args:
        C: the underlying category
        d: FunctorData C^op -> C, or a pair (object map, morphism map)
        eta: object -> component x -> d(d(x))

    Raises:
        ValidationError: codes NotAFunctor, EtaNotNatural, EtaNotIso, CoherenceFailure
    """
    A = AntiInvolutiveCategory(C, _as_functor(C, d), eta, name)
    found = anti_involution_violations(A)
    if found:
        raise ValidationError(f"involution {name or '<anonymous>'}", ValidationReport(found))
    logger.info(f"Validated involution {name} on {C.describe()}")
    return A


# -- involutive functors ------------------------------------------------------


class InvolutiveFunctor:
    """(F, phi) with phi_x: F(d1 x) -> d2(F x)."""

    def __init__(self, source: AntiInvolutiveCategory, target: AntiInvolutiveCategory,
                 functor: FunctorData, phi: Mapping, name: str = ''):
        self.source = source
        self.target = target
        self.functor = functor
        self.phi = phi
        self.name = name or functor.name

    def at(self, x):
        return self.phi[x]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, InvolutiveFunctor):
            return NotImplemented
        return (self.functor == other.functor
                and all(self.phi[x] == other.phi[x] for x in self.source.objects))

    def __hash__(self):
        return hash(self.functor)

    def __repr__(self):
        return f"<InvolutiveFunctor {self.name} {self.source.label} -> {self.target.label}>"


def involutive_functor_violations(Fi: InvolutiveFunctor) -> list:
    A1, A2, F = Fi.source, Fi.target, Fi.functor
    C, D = A1.base, A2.base
    if F.source != C or F.target != D:
        raise SourceTargetMismatch(f"{Fi.name or 'functor'} does not run {C.label} -> {D.label}")
    found = []
    for x in C.objects:
        p = Fi.phi[x] if x in Fi.phi else None
        if p is None or not D.has_morphism(p) or D.dom(p) != F.obj(A1.d_obj(x)) or D.cod(p) != A2.d_obj(F.obj(x)):
            found.append(Violation('PhiTyping', f"phi at {format_ident(x)} is not a morphism F(d x) -> d(F x)", (x,)))
        elif not D.is_iso(p):
            found.append(Violation('PhiNotIso', f"phi at {format_ident(x)} is not invertible", (x, p)))
    if found:
        return found
    for x in C.objects:
        for y in C.objects:
            for f in C.hom(x, y):
                lhs = D.compose(Fi.at(x), F.mor(A1.d_mor(f)))
                rhs = D.compose(A2.d_mor(F.mor(f)), Fi.at(y))
                if lhs != rhs:
                    found.append(Violation('PhiNotNatural', f"phi is not natural at {format_ident(f)}", (f,)))
    for x in C.objects:
        lhs = D.compose(Fi.at(A1.d_obj(x)), F.mor(A1.eta_at(x)))
        rhs = D.compose(A2.d_mor(Fi.at(x)), A2.eta_at(F.obj(x)))
        if lhs != rhs:
            found.append(Violation('EtaSquareFailure', f"phi and eta do not commute at {format_ident(x)}", (x,)))
    return found


def validate_involutive_functor(Fi: InvolutiveFunctor) -> InvolutiveFunctor:
    """
    Raises:
        ValidationError: codes PhiTyping, PhiNotIso, PhiNotNatural, EtaSquareFailure
        SourceTargetMismatch: when the functor does not run between the two bases
    """
    found = involutive_functor_violations(Fi)
    if found:
        raise ValidationError(f"involutive functor {Fi.name or '<anonymous>'}", ValidationReport(found))
    return Fi


def identity_involutive_functor(A: AntiInvolutiveCategory) -> InvolutiveFunctor:
    C = A.base
    return InvolutiveFunctor(A, A, identity_functor(C),
                             LazyMap(lambda: C.objects, lambda x: C.identity(A.d_obj(x)), C.has_object),
                             name=f"Id_{A.name}")


def compose_involutive_functors(Gi: InvolutiveFunctor, Fi: InvolutiveFunctor) -> InvolutiveFunctor:
    """(G, psi) after (F, phi), with datum psi_{F x} . G(phi_x)."""
    if Fi.target is not Gi.source:
        raise SourceTargetMismatch(f"{Gi.name or 'G'} does not start where {Fi.name or 'F'} ends")
    G, F = Gi.functor, Fi.functor
    E = Gi.target.base
    return InvolutiveFunctor(
        Fi.source, Gi.target, compose_functors(G, F, validate=False),
        LazyMap(lambda: Fi.source.objects,
                lambda x: E.compose(Gi.at(F.obj(x)), G.mor(Fi.at(x))),
                Fi.source.base.has_object),
        name=f"{Gi.name}.{Fi.name}" if Gi.name and Fi.name else '')


class InvolutiveNatTrans:
    """Natural transformation alpha: (F, phi) => (G, psi)."""

    def __init__(self, source: InvolutiveFunctor, target: InvolutiveFunctor, alpha: NatTransData):
        self.source = source
        self.target = target
        self.alpha = alpha

    def at(self, x):
        return self.alpha.at(x)

    def __eq__(self, other):
        if not isinstance(other, InvolutiveNatTrans):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.alpha == other.alpha

    def __hash__(self):
        return hash(self.alpha)


def involutive_nat_trans_violations(ai: InvolutiveNatTrans) -> list:
    Fi, Gi, alpha = ai.source, ai.target, ai.alpha
    found = list(naturality_violations(alpha))
    if found:
        return found
    A1, A2 = Fi.source, Fi.target
    D = A2.base
    for x in A1.objects:
        expected = D.compose_many(A2.d_mor(alpha.at(x)), Gi.at(x), alpha.at(A1.d_obj(x)))
        if Fi.at(x) != expected:
            found.append(Violation('NotInvolutive', f"phi_x != d(alpha_x) . psi_x . alpha_dx at {format_ident(x)}", (x,)))
    return found


def validate_involutive_nat_trans(ai: InvolutiveNatTrans) -> InvolutiveNatTrans:
    """
    Raises:
        ValidationError: codes NotNatural, NotInvolutive
    """
    found = involutive_nat_trans_violations(ai)
    if found:
        raise ValidationError("involutive natural transformation", ValidationReport(found))
    return ai


def compose_involutive_nat_trans(bi: InvolutiveNatTrans, ai: InvolutiveNatTrans) -> InvolutiveNatTrans:
    """
    Vertical composite beta . alpha of two involutive transformations.

    The composite is checked against the involutive square before it is returned.

    Raises:
        SourceTargetMismatch: when alpha does not end at the involutive functor beta starts from
        InconsistentResult: when the composite is not involutive
    """
    if ai.target != bi.source:
        raise SourceTargetMismatch("vertical composite needs alpha's target to be beta's source")
    composite = InvolutiveNatTrans(ai.source, bi.target, vertical_compose(bi.alpha, ai.alpha))
    found = involutive_nat_trans_violations(composite)
    if found:
        raise InconsistentResult(f"composite of involutive transformations is not involutive: {found[0].message}")
    return composite


# -- the T construction -----------------------------------------------------------


def T_on_category(D: DaggerStructure) -> AntiInvolutiveCategory:
    """(C, dagger, identity): kept on D, so T(D) is the same object on every call."""
    return D.involution


def T_on_functor(D1: DaggerStructure, D2: DaggerStructure, F: FunctorData) -> InvolutiveFunctor:
    """
    Raises:
        NotADaggerFunctor: when F does not commute with the daggers
    """
    if not is_dagger_functor(D1, D2, F):
        raise NotADaggerFunctor(f"{F.name or 'functor'} is not a dagger functor")
    C2 = D2.base
    return InvolutiveFunctor(T_on_category(D1), T_on_category(D2), F,
                             LazyMap(lambda: D1.base.objects, lambda x: C2.identity(F.obj(x)), D1.base.has_object),
                             name=F.name)


def T_on_nat_trans(D1: DaggerStructure, D2: DaggerStructure, F: FunctorData, G: FunctorData,
                   alpha: NatTransData) -> InvolutiveNatTrans:
    """
    Raises:
        NotIsometric: when some component is not an isometry
    """
    if not is_isometric_nat_trans(D1, D2, F, G, alpha):
        raise NotIsometric(f"{alpha.name or 'transformation'} has a non-isometric component")
    return InvolutiveNatTrans(T_on_functor(D1, D2, F), T_on_functor(D1, D2, G), alpha)


# -- involutive equivalences --------------------------------------------------------


def involutive_inverse_of_equivalence(Fi: InvolutiveFunctor, adj: AdjointEquivalence
                                      ) -> Tuple[InvolutiveFunctor, InvolutiveNatTrans, InvolutiveNatTrans]:
    """
    Lift the quasi-inverse of an adjoint equivalence to an involutive functor.

    The datum on G is psi_y = beta_{d G y} . G(phi_{G y}^-1) . G(d(alpha_y)); alpha and
    beta then become involutive. Every output is re-validated before it is returned.

    Raises:
        PreconditionFailure: when adj is not an adjoint equivalence on F
        InconsistentResult: when a constructed datum fails validation
    """
    F, G, alpha, beta = adj.forward, adj.backward, adj.alpha, adj.beta
    A1, A2 = Fi.source, Fi.target
    C, D = A1.base, A2.base
    if F != Fi.functor:
        raise PreconditionFailure("adjoint equivalence does not start from the given functor")
    problems = snake_violations(adj) + naturality_violations(alpha) + naturality_violations(beta)
    if problems:
        raise PreconditionFailure(f"not an adjoint equivalence: {problems[0].message}")

    def psi(y):
        gy = G.obj(y)
        return C.compose_many(beta.at(A1.d_obj(gy)),
                              G.mor(D.inverse(Fi.at(gy))),
                              G.mor(A2.d_mor(alpha.at(y))))

    Gi = InvolutiveFunctor(A2, A1, G, {y: psi(y) for y in D.objects}, name=G.name or 'G')
    FGi = compose_involutive_functors(Fi, Gi)
    GFi = compose_involutive_functors(Gi, Fi)
    alpha_i = InvolutiveNatTrans(FGi, identity_involutive_functor(A2),
                                 NatTransData(FGi.functor, identity_functor(D), alpha.components, name='alpha'))
    beta_i = InvolutiveNatTrans(GFi, identity_involutive_functor(A1),
                                NatTransData(GFi.functor, identity_functor(C), beta.components, name='beta'))
    for what, found in (('quasi-inverse', involutive_functor_violations(Gi)),
                        ('alpha', involutive_nat_trans_violations(alpha_i)),
                        ('beta', involutive_nat_trans_violations(beta_i))):
        if found:
            raise InconsistentResult(f"constructed {what} is not involutive: {found[0].message}")
    return Gi, alpha_i, beta_i


def involutive_equivalence_from_functor(Fi: InvolutiveFunctor):
    """
    Decide the underlying equivalence, promote it and lift it.

    Returns:
        (adjoint equivalence, involutive quasi-inverse, involutive alpha, involutive beta)

    Raises:
        NotAnEquivalence: when the underlying functor is not an equivalence
    """
    verdict = is_equivalence(Fi.functor)
    if not verdict.holds:
        raise NotAnEquivalence(verdict.witness or "not an equivalence")
    adj = promote_to_adjoint_equivalence(Fi.functor, verdict.quasi_inverse, verdict.alpha, verdict.beta)
    Gi, alpha_i, beta_i = involutive_inverse_of_equivalence(Fi, adj)
    return adj, Gi, alpha_i, beta_i
