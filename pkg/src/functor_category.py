#!/usr/bin/env python3
"""
The anti-involution on a functor category Fun(C, D).

Objects are functors, morphisms natural transformations; d acts by conjugation
dF = d_D . F . d_C and eta_F is the whiskered unit. Hermitian fixed points of
Fun(C, D) are the same thing as involutive functors C -> D; both directions of
that identification live here.
"""

import itertools
from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Tuple

from .errors import InconsistentResult, SearchSpaceExceeded, ValidationError
from .fincat import (
    FiniteCategory,
    FunctorData,
    Morphism,
    NatTransData,
    _resolve_cap,
    enumerate_functors,
    enumerate_nat_transformations,
    opposite,
)
from .herm import HermitianFixedPoint, enumerate_fixed_points
from .involutive import (
    AntiInvolutiveCategory,
    InvolutiveFunctor,
    involutive_functor_violations,
    validate_anti_involution,
)
from .logger import logger
from .utils import format_ident, ident_key


@dataclass
class FunctorCategory:
    source: AntiInvolutiveCategory
    target: AntiInvolutiveCategory
    involution: AntiInvolutiveCategory
    functors: Dict[Hashable, FunctorData]
    transformations: Dict[Hashable, NatTransData]

    @property
    def base(self) -> FiniteCategory:
        return self.involution.base

    def functor(self, key) -> FunctorData:
        return self.functors[key]

    def transformation(self, ident) -> NatTransData:
        return self.transformations[ident]


def transformation_id(alpha: NatTransData) -> Tuple:
    """Morphism identifier of alpha inside Fun(C, D): (source key, target key, components)."""
    return (alpha.source_functor.key(), alpha.target_functor.key(), alpha.component_tuple())


def conjugate_functor(C_inv: AntiInvolutiveCategory, D_inv: AntiInvolutiveCategory, F: FunctorData) -> FunctorData:
    """d_D . F . d_C, covariant again."""
    C, D = C_inv.base, D_inv.base
    return FunctorData(C, D,
                       {x: D_inv.d_obj(F.obj(C_inv.d_obj(x))) for x in C.objects},
                       {f: D_inv.d_mor(F.mor(C_inv.d_mor(f))) for f in C.morphism_names()})


def functor_category_involution(C_inv: AntiInvolutiveCategory, D_inv: AntiInvolutiveCategory,
                                cap: Optional[int] = None) -> FunctorCategory:
    """
    Materialise Fun(C, D) with its anti-involution.

    (d alpha)_x = d_D(alpha_{d_C x}) and (eta_F)_x = (eta_D)_{F d_C d_C x} . F((eta_C)_x).
    The result is validated, and its fixed points are matched one to one against
    involutive structures counted directly.

    Raises:
        SearchSpaceExceeded: when an enumeration passes the cap
        InconsistentResult: when the construction fails validation or the counts disagree
    """
    C, D = C_inv.base, D_inv.base
    functors = {F.key(): F for F in enumerate_functors(C, D, cap)}
    transformations: Dict[Tuple, NatTransData] = {}
    records = []
    for F in functors.values():
        for G in functors.values():
            for alpha in enumerate_nat_transformations(F, G, cap):
                ident = transformation_id(alpha)
                transformations[ident] = alpha
                records.append(Morphism(ident, F.key(), G.key()))

    identities = {}
    for k, F in functors.items():
        identities[k] = (k, k, tuple(D.identity(F.obj(x)) for x in C.objects))
    table = {}
    for beta_id, beta in transformations.items():
        for alpha_id, alpha in transformations.items():
            if alpha_id[1] != beta_id[0]:
                continue
            comps = tuple(D.compose(beta.at(x), alpha.at(x)) for x in C.objects)
            table[(beta_id, alpha_id)] = (alpha_id[0], beta_id[1], comps)
    fun = FiniteCategory(list(functors), records, identities, table, name=f"Fun({C.label}, {D.label})")

    conjugates = {k: conjugate_functor(C_inv, D_inv, F) for k, F in functors.items()}
    object_map = {}
    for k, dF in conjugates.items():
        if dF.key() not in functors:
            raise InconsistentResult(f"conjugate of a functor is missing from {fun.label}")
        object_map[k] = dF.key()
    morphism_map = {}
    for ident, alpha in transformations.items():
        comps = tuple(D_inv.d_mor(alpha.at(C_inv.d_obj(x))) for x in C.objects)
        morphism_map[ident] = (object_map[ident[1]], object_map[ident[0]], comps)
    eta = {}
    for k, F in functors.items():
        ddk = object_map[object_map[k]]
        comps = tuple(D.compose(D_inv.eta_at(F.obj(C_inv.d_obj(C_inv.d_obj(x)))), F.mor(C_inv.eta_at(x)))
                      for x in C.objects)
        eta[k] = (k, ddk, comps)

    d = FunctorData(opposite(fun), fun, object_map, morphism_map, name='d')
    try:
        involution = validate_anti_involution(fun, d, eta, name=fun.name)
    except ValidationError as e:
        raise InconsistentResult(f"functor-category involution fails its own axioms: {e}")
    fc = FunctorCategory(C_inv, D_inv, involution, functors, transformations)

    points = enumerate_fixed_points(involution)
    structures = sum(len(enumerate_involutive_structures(F, C_inv, D_inv, cap)) for F in functors.values())
    if len(points) != structures:
        raise InconsistentResult(f"{len(points)} fixed points but {structures} involutive structures")
    for p in points:
        Fi = fixed_point_to_involutive_functor(fc, p)
        if involutive_functor_violations(Fi) or involutive_functor_to_fixed_point(fc, Fi) != p:
            raise InconsistentResult(f"fixed point {format_ident(p.key)} does not match an involutive functor")
    logger.info(f"Built {fun.describe()} with {len(points)} fixed points")
    return fc


def fixed_point_to_involutive_functor(fc: FunctorCategory, fp: HermitianFixedPoint) -> InvolutiveFunctor:
    """psi: F => dF becomes phi_x = d_D(F(eta_C,x)) . psi_{d_C x}."""
    C_inv, D_inv = fc.source, fc.target
    C, D = C_inv.base, D_inv.base
    F = fc.functors[fp.object]
    psi = fc.transformations[fp.h]
    phi = {x: D.compose(D_inv.d_mor(F.mor(C_inv.eta_at(x))), psi.at(C_inv.d_obj(x))) for x in C.objects}
    return InvolutiveFunctor(C_inv, D_inv, F, phi)


def involutive_functor_to_fixed_point(fc: FunctorCategory, Fi: InvolutiveFunctor) -> HermitianFixedPoint:
    """phi becomes psi_c = phi_{d c} . F(eta_c)."""
    C_inv = fc.source
    C, D = C_inv.base, fc.target.base
    F = Fi.functor
    comps = tuple(D.compose(Fi.at(C_inv.d_obj(c)), F.mor(C_inv.eta_at(c))) for c in C.objects)
    k = F.key()
    ident = (k, fc.involution.d_obj(k), comps)
    if ident not in fc.transformations:
        raise InconsistentResult(f"datum of {Fi.name or 'functor'} is not a transformation F => dF")
    return HermitianFixedPoint(k, ident)


def enumerate_involutive_structures(F: FunctorData, C_inv: AntiInvolutiveCategory,
                                    D_inv: AntiInvolutiveCategory, cap: Optional[int] = None
                                    ) -> List[InvolutiveFunctor]:
    """Every datum phi making (F, phi) involutive, found by direct search over isomorphisms."""
    cap = _resolve_cap(cap)
    C, D = C_inv.base, D_inv.base
    objs = C.objects
    options = [D.isomorphisms(F.obj(C_inv.d_obj(x)), D_inv.d_obj(F.obj(x))) for x in objs]
    bound = 1
    for opt in options:
        bound *= len(opt)
    if bound > cap:
        raise SearchSpaceExceeded(bound, cap, 'involutive structure search')
    found = []
    for choice in itertools.product(*options):
        Fi = InvolutiveFunctor(C_inv, D_inv, F, dict(zip(objs, choice)))
        if not involutive_functor_violations(Fi):
            found.append(Fi)
    found.sort(key=lambda Fi: tuple(ident_key(Fi.at(x)) for x in objs))
    return found
