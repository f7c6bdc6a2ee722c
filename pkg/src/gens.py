#!/usr/bin/env python3
"""
Deterministic fixture generators.

Each generator turns a GeneratorSpec into a Bundle: a validated category with
its dagger and anti-involution where the kind has them. Presets name the fixtures
used throughout the tests and the CLI.
"""

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .config import load_config
from .dagger import DaggerStructure, validate_dagger
from .errors import InvalidSpec, SizeExceeded, ValidationError
from .fincat import FiniteCategory, validate_category
from .finite_field import (
    QuadraticExtension,
    all_matrices,
    conjugate_transpose,
    identity_matrix,
    matrix_product,
)
from .involutive import AntiInvolutiveCategory, T_on_category, validate_anti_involution
from .logger import logger

KINDS = ('delooping', 'discrete-involution', 'matrix-finite-field', 'poset-antitone', 'indiscrete', 'product')


@dataclass
class GeneratorSpec:
    kind: str
    params: Dict[str, Any] = field(default_factory=dict)


@dataclass
class Bundle:
    name: str
    category: FiniteCategory
    dagger: Optional[DaggerStructure] = None
    involution: Optional[AntiInvolutiveCategory] = None
    dagger_name: str = 'D'
    involution_name: str = ''
    extra_involutions: Dict[str, AntiInvolutiveCategory] = field(default_factory=dict)


def _check_size(count: int, max_morphisms: int, what: str):
    if count > max_morphisms:
        raise SizeExceeded(f"{what} would have {count} morphisms, above the limit of {max_morphisms}")


def _build_category(name: str, objects: Sequence, morphisms: List[Tuple], compose: Callable) -> FiniteCategory:
    """Full composition table from a compose function on (g, f) with cod(f) == dom(g)."""
    by_dom: Dict[Any, List[Tuple]] = {}
    for m in morphisms:
        by_dom.setdefault(m[1], []).append(m)
    table = {}
    for f, _, b in morphisms:
        for g, _, _ in by_dom.get(b, ()):
            table[(g, f)] = compose(g, f)
    try:
        return validate_category({'name': name, 'objects': list(objects), 'morphisms': morphisms,
                                  'identities': {x: f"id_{x}" for x in objects}, 'composition': table})
    except ValidationError as e:
        raise InvalidSpec(f"generated {name} is not a category: {e}")


def _dagger(C: FiniteCategory, dag: Dict, name: str) -> DaggerStructure:
    try:
        return validate_dagger(C, dag, name=name)
    except ValidationError as e:
        raise InvalidSpec(f"generated dagger on {C.label} is invalid: {e}")


def _involution(C: FiniteCategory, object_map: Dict, morphism_map: Dict, eta: Dict, name: str) -> AntiInvolutiveCategory:
    try:
        return validate_anti_involution(C, (object_map, morphism_map), eta, name=name)
    except ValidationError as e:
        raise InvalidSpec(f"generated involution on {C.label} is invalid: {e}")


def _finish(name: str, C: FiniteCategory, dag: Optional[Dict], params: Dict) -> Bundle:
    dagger_name = params.get('dagger_name', 'D')
    bundle = Bundle(name, C, dagger_name=dagger_name)
    if dag is not None:
        bundle.dagger = _dagger(C, dag, dagger_name)
        bundle.involution = T_on_category(bundle.dagger)
        bundle.involution_name = params.get('involution_name', f"T{name}")
    return bundle


# -- delooping of a finite group --------------------------------------------------------


def _cyclic_group(n: int, twist: int):
    if n < 1:
        raise InvalidSpec(f"cyclic order must be positive, got {n}")
    if gcd(twist % n or n, n) != 1 and n > 1:
        raise InvalidSpec(f"multiplication by {twist} is not an automorphism of Z/{n}")
    if (twist * twist) % n != 1 % n:
        raise InvalidSpec(f"multiplication by {twist} is not an involution of Z/{n}")
    names = ['id_x'] + [str(k) for k in range(1, n)]
    index = {name: k for k, name in enumerate(names)}

    def mul(g, f):
        return names[(index[g] + index[f]) % n]

    def inverse(g):
        return names[(-index[g]) % n]

    def theta(g):
        return names[(twist * index[g]) % n]

    return names, mul, inverse, theta


def _symmetric3(twist: Optional[str]):
    perms = list(itertools.permutations(range(3)))
    names = {p: ('id_x' if p == (0, 1, 2) else 'p' + ''.join(map(str, p))) for p in perms}
    perm_of = {v: k for k, v in names.items()}

    def mul(g, f):
        pg, pf = perm_of[g], perm_of[f]
        return names[tuple(pg[pf[i]] for i in range(3))]

    def inverse(g):
        p = perm_of[g]
        q = [0, 0, 0]
        for i, j in enumerate(p):
            q[j] = i
        return names[tuple(q)]

    if twist is None:
        def theta(g):
            return g
    else:
        if twist not in perm_of:
            raise InvalidSpec(f"unknown element {twist} of S3")
        if mul(twist, twist) != 'id_x':
            raise InvalidSpec(f"conjugation by {twist} is not an involution")

        def theta(g):
            return mul(mul(twist, g), inverse(twist))

    return [names[p] for p in perms], mul, inverse, theta


def generate_delooping(params: Dict, max_morphisms: int) -> Bundle:
    """One object x; morphisms are group elements, dagger g -> theta(g^-1)."""
    group = params.get('group', 'cyclic')
    if group == 'cyclic':
        n = int(params.get('order', 4))
        _check_size(n, max_morphisms, f"B(Z/{n})")
        elements, mul, inverse, theta = _cyclic_group(n, int(params.get('twist', 1)))
        default_name = 'One' if n == 1 else f"B{n}"
    elif group == 'symmetric3':
        elements, mul, inverse, theta = _symmetric3(params.get('twist'))
        default_name = 'BS3'
    else:
        raise InvalidSpec(f"unknown group {group!r}")
    for g in elements:
        if theta(theta(g)) != g:
            raise InvalidSpec("twist is not an involution")
        for f in elements:
            if theta(mul(g, f)) != mul(theta(g), theta(f)):
                raise InvalidSpec("twist is not a group automorphism")

    name = params.get('name', default_name)
    C = _build_category(name, ['x'], [(g, 'x', 'x') for g in elements], mul)
    bundle = _finish(name, C, {g: theta(inverse(g)) for g in elements}, params)

    eta = params.get('eta')
    if eta is not None:
        eta = str(eta)
        if eta not in elements:
            raise InvalidSpec(f"eta {eta} is not an element of the group")
        extra_name = params.get('eta_name', f"{name}eta{eta}")
        bundle.extra_involutions[extra_name] = _involution(
            C, {'x': 'x'}, dict(bundle.dagger.dag), {'x': eta}, name=extra_name)
    return bundle


# -- other kinds --------------------------------------------------------------------


def generate_discrete_involution(params: Dict, max_morphisms: int) -> Bundle:
    """Discrete category on c0 .. c(n-1) with d permuting the objects."""
    permutation = [int(i) for i in params.get('permutation', [1, 0])]
    n = int(params.get('n', len(permutation)))
    if sorted(permutation) != list(range(n)):
        raise InvalidSpec(f"{permutation} is not a permutation of {n} elements")
    if any(permutation[permutation[i]] != i for i in range(n)):
        raise InvalidSpec(f"{permutation} is not an involution")
    _check_size(n, max_morphisms, 'discrete category')
    objects = [f"c{i}" for i in range(n)]
    name = params.get('name', f"Disc{n}")
    C = _build_category(name, objects, [(f"id_{x}", x, x) for x in objects], lambda g, f: g)
    bundle = _finish(name, C, {f"id_{x}": f"id_{x}" for x in objects}, params)
    swap = {objects[i]: objects[permutation[i]] for i in range(n)}
    bundle.involution_name = params.get('involution_name', f"{name}swap")
    bundle.involution = _involution(C, swap, {f"id_{x}": f"id_{swap[x]}" for x in objects},
                                    {x: f"id_{x}" for x in objects}, name=bundle.involution_name)
    return bundle


def generate_indiscrete(params: Dict, max_morphisms: int) -> Bundle:
    """Exactly one morphism between any two objects; its adjoint is its inverse."""
    objects = [str(x) for x in params.get('objects', ['a', 'b'])]
    _check_size(len(objects) ** 2, max_morphisms, 'indiscrete category')

    def arrow(x, y):
        return f"id_{x}" if x == y else f"{x}_to_{y}"

    ends = {arrow(x, y): (x, y) for x in objects for y in objects}
    name = params.get('name', 'Walk' if len(objects) == 2 else f"Ind{len(objects)}")
    C = _build_category(name, objects, [(m, x, y) for m, (x, y) in ends.items()],
                        lambda g, f: arrow(ends[f][0], ends[g][1]))
    return _finish(name, C, {m: arrow(y, x) for m, (x, y) in ends.items()}, params)


def generate_matrix(params: Dict, max_morphisms: int) -> Bundle:
    """
    Matrices over F_{q^2}: objects 0 .. maxdim, a morphism m -> n is an n x m matrix.

    The dagger is the conjugate transpose with conjugation x -> x^q.
    """
    q = int(params.get('q', 2))
    maxdim = int(params.get('maxdim', 2))
    if maxdim < 0:
        raise InvalidSpec("maxdim must be non-negative")
    F = QuadraticExtension(q)
    dims = range(maxdim + 1)
    _check_size(sum(F.order ** (m * n) for m in dims for n in dims), max_morphisms, f"M{maxdim}(F{F.order})")

    def label(n, m, A):
        if n == m and A == identity_matrix(n):
            return f"id_{n}"
        digits = ''.join(format(e, 'x') for row in A for e in row)
        return f"m{n}x{m}_{digits}" if digits else f"m{n}x{m}"

    morphisms, matrices, lookup = [], {}, {}
    for m in dims:
        for n in dims:
            for A in all_matrices(F, n, m):
                name = label(n, m, A)
                morphisms.append((name, str(m), str(n)))
                matrices[name] = (A, m, n)
                lookup[(m, n, A)] = name

    def compose(g, f):
        B, a, b = matrices[f]
        A, _, c = matrices[g]
        return lookup[(a, c, matrix_product(F, A, B, c, b, a))]

    name = params.get('name', f"M{maxdim}F{F.order}")
    C = _build_category(name, [str(n) for n in dims], morphisms, compose)
    dag = {}
    for f, (A, m, n) in matrices.items():
        dag[f] = lookup[(n, m, conjugate_transpose(F, A, n, m))]
    return _finish(name, C, dag, params)


def _parse_pairs(raw, sep: str) -> List[Tuple[str, str]]:
    """Pairs from "a<b,b<c" text, a list of such strings, or a list of 2-sequences."""
    if isinstance(raw, str):
        raw = [item for item in raw.split(',') if item]
    pairs = []
    for item in raw:
        if isinstance(item, str):
            a, found, b = item.partition(sep)
            if not found:
                raise InvalidSpec(f"{item!r} is not of the form x{sep}y")
            pairs.append((a, b))
        else:
            pairs.append(tuple(map(str, item)))
    return pairs


def generate_poset(params: Dict, max_morphisms: int) -> Bundle:
    """Poset with an order-reversing involution; x_le_y is the unique arrow x -> y."""
    elements = params.get('elements', ['a', 'b', 'c'])
    if isinstance(elements, str):
        elements = [e for e in elements.split(',') if e]
    elements = [str(e) for e in elements]
    relations = _parse_pairs(params.get('relations', [('a', 'b'), ('b', 'c')]), '<')
    antitone = dict(_parse_pairs(params.get('antitone', [('a', 'c'), ('b', 'b'), ('c', 'a')]), ':'))

    below = {x: {x} for x in elements}
    for x, y in relations:
        if x not in below or y not in below:
            raise InvalidSpec(f"relation {x} < {y} mentions an unknown element")
        below[y].add(x)
    changed = True
    while changed:
        changed = False
        for y in elements:
            extra = set().union(*(below[x] for x in below[y])) - below[y]
            if extra:
                below[y] |= extra
                changed = True
    for x in elements:
        for y in elements:
            if x != y and x in below[y] and y in below[x]:
                raise InvalidSpec(f"{x} and {y} are distinct but below each other")
    if set(antitone) != set(elements) or any(antitone.get(antitone[x]) != x for x in elements):
        raise InvalidSpec("antitone map must be an involution of the elements")
    for y in elements:
        for x in below[y]:
            if antitone[y] not in below[antitone[x]]:
                raise InvalidSpec(f"antitone map does not reverse {x} <= {y}")

    def arrow(x, y):
        return f"id_{x}" if x == y else f"{x}_le_{y}"

    ends = {arrow(x, y): (x, y) for y in elements for x in sorted(below[y], key=elements.index)}
    _check_size(len(ends), max_morphisms, 'poset')
    name = params.get('name', f"Chain{len(elements)}")
    C = _build_category(name, elements, [(m, x, y) for m, (x, y) in ends.items()],
                        lambda g, f: arrow(ends[f][0], ends[g][1]))
    bundle = Bundle(name, C, dagger_name='')
    bundle.involution_name = params.get('involution_name', f"{name}rev")
    bundle.involution = _involution(C, dict(antitone),
                                    {m: arrow(antitone[y], antitone[x]) for m, (x, y) in ends.items()},
                                    {x: f"id_{x}" for x in elements}, name=bundle.involution_name)
    return bundle


def generate_product(params: Dict, max_morphisms: int) -> Bundle:
    """Componentwise product; daggers and involutions are combined when both sides have them."""
    left = _as_bundle(params.get('left', 'cyclic'), max_morphisms)
    right = _as_bundle(params.get('right', 'swap2'), max_morphisms)
    A, B = left.category, right.category
    _check_size(A.num_morphisms() * B.num_morphisms(), max_morphisms, 'product')

    def obj(a, b):
        return f"{a}__{b}"

    def mor(f, g):
        if A.is_identity(f) and B.is_identity(g):
            return f"id_{obj(A.dom(f), B.dom(g))}"
        return f"{f}__{g}"

    objects = [obj(a, b) for a in A.objects for b in B.objects]
    pairs = {mor(f.name, g.name): (f.name, g.name) for f in A.morphisms for g in B.morphisms}
    morphisms = [(m, obj(A.dom(f), B.dom(g)), obj(A.cod(f), B.cod(g))) for m, (f, g) in pairs.items()]

    def compose(h2, h1):
        (g1, g2), (f1, f2) = pairs[h2], pairs[h1]
        return mor(A.compose(g1, f1), B.compose(g2, f2))

    name = params.get('name', f"{left.name}x{right.name}")
    C = _build_category(name, objects, morphisms, compose)
    dag = None
    if left.dagger is not None and right.dagger is not None:
        dag = {m: mor(left.dagger.adjoint(f), right.dagger.adjoint(g)) for m, (f, g) in pairs.items()}
    bundle = _finish(name, C, dag, params)
    if dag is None and left.involution is not None and right.involution is not None:
        L, R = left.involution, right.involution
        bundle.involution_name = params.get('involution_name', f"{name}inv")
        bundle.involution = _involution(
            C,
            {obj(a, b): obj(L.d_obj(a), R.d_obj(b)) for a in A.objects for b in B.objects},
            {m: mor(L.d_mor(f), R.d_mor(g)) for m, (f, g) in pairs.items()},
            {obj(a, b): mor(L.eta_at(a), R.eta_at(b)) for a in A.objects for b in B.objects},
            name=bundle.involution_name)
    return bundle


GENERATORS: Dict[str, Callable[[Dict, int], Bundle]] = {
    'delooping': generate_delooping,
    'discrete-involution': generate_discrete_involution,
    'matrix-finite-field': generate_matrix,
    'poset-antitone': generate_poset,
    'indiscrete': generate_indiscrete,
    'product': generate_product,
}

PRESETS: Dict[str, GeneratorSpec] = {
    'one': GeneratorSpec('delooping', {'group': 'cyclic', 'order': 1}),
    'walk': GeneratorSpec('indiscrete', {'objects': ['a', 'b']}),
    'swap2': GeneratorSpec('discrete-involution', {'permutation': [1, 0], 'name': 'Swap2'}),
    'cyclic': GeneratorSpec('delooping', {'group': 'cyclic', 'order': 4}),
    'symmetric3': GeneratorSpec('delooping', {'group': 'symmetric3'}),
    'discrete': GeneratorSpec('discrete-involution', {'permutation': [1, 0, 2]}),
    'chain': GeneratorSpec('poset-antitone', {}),
    'matrix': GeneratorSpec('matrix-finite-field', {'q': 2, 'maxdim': 2}),
    'product': GeneratorSpec('product', {'left': GeneratorSpec('delooping', {'group': 'cyclic', 'order': 3}),
                                         'right': 'swap2'}),
}


def preset(name: str, **overrides) -> GeneratorSpec:
    """Named fixture spec, optionally with some parameters replaced."""
    if name not in PRESETS:
        raise InvalidSpec(f"unknown preset {name!r} (choose from {', '.join(sorted(PRESETS))})")
    base = PRESETS[name]
    return GeneratorSpec(base.kind, {**base.params, **overrides})


def _as_bundle(spec, max_morphisms: int) -> Bundle:
    if isinstance(spec, Bundle):
        return spec
    if isinstance(spec, str):
        spec = preset(spec)
    elif isinstance(spec, dict):
        spec = GeneratorSpec(spec['kind'], spec.get('params', {}))
    return generate(spec, max_morphisms)


def generate(spec: GeneratorSpec, max_morphisms: Optional[int] = None) -> Bundle:
    """
    Build the bundle described by spec.

    Raises:
        InvalidSpec: unknown kind or ill-formed parameters
        SizeExceeded: more morphisms than max_morphisms (FINCAT_MAX_MORPHISMS by default)
    """
    if spec.kind not in GENERATORS:
        raise InvalidSpec(f"unknown generator kind {spec.kind!r} (choose from {', '.join(KINDS)})")
    if max_morphisms is None:
        max_morphisms = load_config()['max_morphisms']
    bundle = GENERATORS[spec.kind](dict(spec.params), max_morphisms)
    logger.info(f"Generated {bundle.category.describe()} ({spec.kind})")
    return bundle


def bundle_to_document(bundle: Bundle):
    """The bundle as a DSL Document: category, dagger, involution and extra involutions."""
    from .dsl import document_from_structures

    involutions = dict(bundle.extra_involutions)
    if bundle.involution is not None:
        involutions[bundle.involution_name] = bundle.involution
    daggers = {bundle.dagger_name: bundle.dagger} if bundle.dagger is not None else {}
    return document_from_structures(categories={bundle.name: bundle.category},
                                    daggers=daggers, involutions=involutions)
