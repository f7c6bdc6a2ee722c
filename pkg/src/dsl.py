#!/usr/bin/env python3
"""
The .fincat text format: parser, resolver and canonical printer.

A file is a sequence of declarations:

    category B3 {
      objects: x;
      morphisms: g : x -> x  h : x -> x;
      compose: g . g = h  g . h = id_x  h . g = id_x  h . h = g;
    }
    dagger D on B3 { g -> h  h -> g }
    involution TB3 on B3 { d: x -> x; g -> h  h -> g; eta: x => id_x; }
    positivity P on TB3 { x: { id_x } }
    functor F : B3 -> B3 { objects: x -> x; morphisms: g -> g  h -> h; }

Identities are implicit (id_<object>); identity entries are dropped on parse and
filled back in before validation, so two files that differ only in spelled-out
identities describe the same Document.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Tuple

from lark import Lark, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from .dagger import DaggerStructure, validate_dagger
from .errors import Diagnostic, DslError, FincatError, InvalidSpec, ValidationError
from .fincat import FiniteCategory, FunctorData, validate_category, validate_functor
from .involutive import (
    AntiInvolutiveCategory,
    InvolutiveFunctor,
    T_on_category,
    validate_anti_involution,
    validate_involutive_functor,
)
from .logger import logger
from .positivity import PositivityNotion, validate_positivity
from .utils import is_valid_identifier, sort_idents

GRAMMAR = r"""
    start: _decl*
    _decl: category | dagger | involution | positivity | functor

    category: "category" NAME "{" objects morphisms compose? "}"
    objects: "objects" ":" NAME* ";"
    morphisms: "morphisms" ":" arrow* ";"
    arrow: NAME ":" NAME "->" NAME
    compose: "compose" ":" composite* ";"
    composite: NAME "." NAME "=" NAME

    dagger: "dagger" NAME "on" NAME "{" entry* "}"

    involution: "involution" NAME "on" NAME "{" "d" ":" object_map ";" morphism_map ";" "eta" ":" component* ";" "}"
    object_map: entry*
    morphism_map: entry*

    positivity: "positivity" NAME "on" NAME "{" positive_set* "}"
    positive_set: NAME ":" "{" NAME* "}"

    functor: "functor" NAME ":" NAME "->" NAME "{" "objects" ":" object_map ";" "morphisms" ":" morphism_map ";" phi? "}"
    phi: "phi" ":" component* ";"

    entry: NAME "->" NAME
    component: NAME "=>" NAME

    NAME: /[A-Za-z0-9_][A-Za-z0-9_']*/
    COMMENT: /#[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

KIND_ORDER = ('category', 'dagger', 'involution', 'positivity', 'functor')

Spans = Dict[object, Tuple[int, int]]


def _identity(x: str) -> str:
    return f"id_{x}"


# -- declarations ---------------------------------------------------------------------


@dataclass
class CategoryDecl:
    name: str
    objects: Tuple[str, ...]
    morphisms: Tuple[Tuple[str, str, str], ...]
    composition: Tuple[Tuple[str, str, str], ...] = ()
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)
    spans: Spans = field(default_factory=dict, compare=False, repr=False)


@dataclass
class DaggerDecl:
    name: str
    category: str
    entries: Tuple[Tuple[str, str], ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)
    spans: Spans = field(default_factory=dict, compare=False, repr=False)


@dataclass
class InvolutionDecl:
    name: str
    category: str
    object_map: Tuple[Tuple[str, str], ...]
    morphism_map: Tuple[Tuple[str, str], ...]
    eta: Tuple[Tuple[str, str], ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)
    spans: Spans = field(default_factory=dict, compare=False, repr=False)


@dataclass
class PositivityDecl:
    name: str
    involution: str
    sets: Tuple[Tuple[str, Tuple[str, ...]], ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)
    spans: Spans = field(default_factory=dict, compare=False, repr=False)


@dataclass
class FunctorDecl:
    name: str
    source: str
    target: str
    object_map: Tuple[Tuple[str, str], ...]
    morphism_map: Tuple[Tuple[str, str], ...]
    phi: Optional[Tuple[Tuple[str, str], ...]] = None
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)
    spans: Spans = field(default_factory=dict, compare=False, repr=False)


def _pos(token) -> Tuple[int, int]:
    return (getattr(token, 'line', 0) or 0, getattr(token, 'column', 0) or 0)


class _DeclBuilder(Transformer):
    """Parse tree to declarations; every name keeps its position in a spans table."""

    def start(self, items):
        return items

    def objects(self, items):
        return list(items)

    def morphisms(self, items):
        return list(items)

    def compose(self, items):
        return list(items)

    def arrow(self, items):
        return tuple(items)

    def composite(self, items):
        return tuple(items)

    def entry(self, items):
        return tuple(items)

    def component(self, items):
        return tuple(items)

    def object_map(self, items):
        return ('object_map', list(items))

    def morphism_map(self, items):
        return ('morphism_map', list(items))

    def phi(self, items):
        return ('phi', list(items))

    def positive_set(self, items):
        return (items[0], list(items[1:]))

    def category(self, items):
        name, objects, morphisms = items[0], items[1], items[2]
        composition = items[3] if len(items) > 3 else []
        spans: Spans = {}
        for x in objects:
            spans.setdefault(('object', str(x)), _pos(x))
        for f, a, b in morphisms:
            spans.setdefault(str(f), _pos(f))
        for g, f, h in composition:
            spans.setdefault((str(g), str(f)), _pos(g))
        return CategoryDecl(str(name), tuple(map(str, objects)),
                            tuple((str(f), str(a), str(b)) for f, a, b in morphisms),
                            tuple((str(g), str(f), str(h)) for g, f, h in composition),
                            *_pos(name), spans)

    def dagger(self, items):
        name, category, entries = items[0], items[1], items[2:]
        spans = {str(f): _pos(f) for f, _ in reversed(entries)}
        spans['category'] = _pos(category)
        return DaggerDecl(str(name), str(category), tuple((str(f), str(g)) for f, g in entries), *_pos(name), spans)

    def involution(self, items):
        name, category = items[0], items[1]
        (_, object_map), (_, morphism_map) = items[2], items[3]
        eta = items[4:]
        spans: Spans = {('object', str(x)): _pos(x) for x, _ in reversed(object_map)}
        spans.update({str(f): _pos(f) for f, _ in reversed(morphism_map)})
        spans.update({('eta', str(x)): _pos(x) for x, _ in reversed(eta)})
        spans['category'] = _pos(category)
        return InvolutionDecl(str(name), str(category),
                              tuple((str(x), str(y)) for x, y in object_map),
                              tuple((str(f), str(g)) for f, g in morphism_map),
                              tuple((str(x), str(e)) for x, e in eta),
                              *_pos(name), spans)

    def positivity(self, items):
        name, involution, sets = items[0], items[1], items[2:]
        spans: Spans = {}
        for c, members in sets:
            spans.setdefault(('object', str(c)), _pos(c))
            for h in members:
                spans.setdefault((str(c), str(h)), _pos(h))
        spans['involution'] = _pos(involution)
        return PositivityDecl(str(name), str(involution),
                              tuple((str(c), tuple(map(str, members))) for c, members in sets),
                              *_pos(name), spans)

    def functor(self, items):
        name, source, target = items[0], items[1], items[2]
        (_, object_map), (_, morphism_map) = items[3], items[4]
        phi = items[5][1] if len(items) > 5 else None
        spans: Spans = {('object', str(x)): _pos(x) for x, _ in reversed(object_map)}
        spans.update({str(f): _pos(f) for f, _ in reversed(morphism_map)})
        spans['source'] = _pos(source)
        spans['target'] = _pos(target)
        return FunctorDecl(str(name), str(source), str(target),
                           tuple((str(x), str(y)) for x, y in object_map),
                           tuple((str(f), str(g)) for f, g in morphism_map),
                           None if phi is None else tuple((str(x), str(p)) for x, p in phi),
                           *_pos(name), spans)


_parser = Lark(GRAMMAR, start='start', parser='lalr', propagate_positions=True)
_builder = _DeclBuilder()


# -- documents ------------------------------------------------------------------------


class Document:
    """Resolved declarations, one dictionary per kind, plus the validated structures they describe."""

    def __init__(self):
        self.category_decls: Dict[str, CategoryDecl] = {}
        self.dagger_decls: Dict[str, DaggerDecl] = {}
        self.involution_decls: Dict[str, InvolutionDecl] = {}
        self.positivity_decls: Dict[str, PositivityDecl] = {}
        self.functor_decls: Dict[str, FunctorDecl] = {}

        self.categories: Dict[str, FiniteCategory] = {}
        self.daggers: Dict[str, DaggerStructure] = {}
        self.involutions: Dict[str, AntiInvolutiveCategory] = {}
        self.positivities: Dict[str, PositivityNotion] = {}
        self.functors: Dict[str, FunctorData] = {}

    def decls(self, kind: str) -> Dict:
        return getattr(self, f"{kind}_decls")

    def is_empty(self) -> bool:
        return not any(self.decls(kind) for kind in KIND_ORDER)

    def __eq__(self, other):
        if not isinstance(other, Document):
            return NotImplemented
        return all(self.decls(kind) == other.decls(kind) for kind in KIND_ORDER)

    def __repr__(self):
        counts = ', '.join(f"{len(self.decls(kind))} {kind}" for kind in KIND_ORDER)
        return f"<Document {counts}>"

    def _lookup(self, table: Mapping, name: str, kind: str):
        try:
            return table[name]
        except KeyError:
            raise FincatError(f"no {kind} named {name}", code='UnresolvedReference')

    def category(self, name: str) -> FiniteCategory:
        return self._lookup(self.categories, name, 'category')

    def dagger(self, name: str) -> DaggerStructure:
        return self._lookup(self.daggers, name, 'dagger')

    def positivity(self, name: str) -> PositivityNotion:
        return self._lookup(self.positivities, name, 'positivity')

    def functor(self, name: str) -> FunctorData:
        return self._lookup(self.functors, name, 'functor')

    def anti_involutive(self, name: str) -> AntiInvolutiveCategory:
        """A declared involution, or T of a declared dagger."""
        if name in self.involutions:
            return self.involutions[name]
        if name in self.daggers:
            return T_on_category(self.daggers[name])
        raise FincatError(f"no involution or dagger named {name}", code='UnresolvedReference')

    def involutive_functor(self, name: str, source: AntiInvolutiveCategory,
                           target: AntiInvolutiveCategory) -> InvolutiveFunctor:
        """
        The declared functor with its phi block read against the given involutions.

        Without a phi block every component is the identity, which needs F(d x) = d(F x).

        Raises:
            ValidationError: when (F, phi) is not involutive for these involutions
        """
        F = self.functor(name)
        decl = self.functor_decls[name]
        D = target.base
        if decl.phi is None:
            phi = {x: D.identity(target.d_obj(F.obj(x))) for x in source.objects}
        else:
            phi = dict(decl.phi)
        return validate_involutive_functor(InvolutiveFunctor(source, target, F, phi, name=name))


# -- resolution -----------------------------------------------------------------------


class _Resolver:
    """Checks names and references, normalises identity entries and runs the validators."""

    def __init__(self):
        self.diagnostics: List[Diagnostic] = []
        self.doc = Document()

    def report(self, code: str, where: Tuple[int, int], message: str):
        self.diagnostics.append(Diagnostic(code, where[0], where[1], message))

    def report_validation(self, decl, error: ValidationError):
        for v in error.report:
            where = (decl.line, decl.column)
            if v.witnesses:
                key = tuple(v.witnesses[:2]) if len(v.witnesses) > 1 else v.witnesses[0]
                where = decl.spans.get(key) or decl.spans.get(v.witnesses[0]) or where
            self.report('ValidationError', where, f"{v.code}: {v.message}")

    def register(self, decls: List):
        kinds = {CategoryDecl: 'category', DaggerDecl: 'dagger', InvolutionDecl: 'involution',
                 PositivityDecl: 'positivity', FunctorDecl: 'functor'}
        for decl in decls:
            table = self.doc.decls(kinds[type(decl)])
            if decl.name in table:
                first = table[decl.name]
                self.report('DuplicateName', (decl.line, decl.column),
                            f"{kinds[type(decl)]} {decl.name} already declared at line {first.line}")
                continue
            table[decl.name] = decl

    def check_map(self, decl, pairs, domain, codomain, what: str, key=lambda k: k) -> bool:
        ok = True
        seen = {}
        for a, b in pairs:
            where = decl.spans.get(key(a), (decl.line, decl.column))
            if a not in domain:
                self.report('UnresolvedReference', where, f"{what}: {a} is not declared")
                ok = False
            elif b not in codomain:
                self.report('UnresolvedReference', where, f"{what}: {b} is not declared")
                ok = False
            elif a in seen and seen[a] != b:
                self.report('DuplicateName', where, f"{what}: {a} is mapped twice")
                ok = False
            seen[a] = b
        return ok

    # categories

    def resolve_category(self, decl: CategoryDecl) -> CategoryDecl:
        objects = set(decl.objects)
        identities = {_identity(x): x for x in decl.objects}
        kept = []
        ok = True
        for f, a, b in decl.morphisms:
            for x in (a, b):
                if x not in objects:
                    self.report('UnresolvedReference', decl.spans.get(f, (decl.line, decl.column)),
                                f"morphism {f} uses undeclared object {x}")
                    ok = False
            if identities.get(f) == a == b:
                continue
            kept.append((f, a, b))
        names = {f: (a, b) for f, a, b in kept}
        for f, x in identities.items():
            names.setdefault(f, (x, x))
        order = {f: i for i, f in enumerate(list(identities) + [f for f, _, _ in kept])}

        composition = []
        for g, f, h in decl.composition:
            missing = [m for m in (g, f, h) if m not in names]
            if missing:
                self.report('UnresolvedReference', decl.spans.get((g, f), (decl.line, decl.column)),
                            f"composition {g} . {f} = {h} uses undeclared {', '.join(missing)}")
                ok = False
                continue
            if (g in identities and names[g] == (identities[g],) * 2 and h == f) or \
                    (f in identities and names[f] == (identities[f],) * 2 and h == g):
                continue
            composition.append((g, f, h))
        composition = sorted(set(composition), key=lambda e: (order[e[0]], order[e[1]]))
        resolved = replace(decl, morphisms=tuple(kept), composition=tuple(composition))
        if ok:
            self.build_category(resolved)
        return resolved

    def build_category(self, decl: CategoryDecl):
        records = [(_identity(x), x, x) for x in decl.objects
                   if all(f != _identity(x) for f, _, _ in decl.morphisms)]
        records += list(decl.morphisms)
        table: Dict[Tuple[str, str], str] = {}
        declared = [(g, f, h) for g, f, h in decl.composition]
        for f, a, b in records:
            table[(_identity(b), f)] = f
            table[(f, _identity(a))] = f
        triples = [(g, f, h) for (g, f), h in table.items()] + declared
        try:
            C = validate_category({'name': decl.name, 'objects': list(decl.objects), 'morphisms': records,
                                   'identities': {x: _identity(x) for x in decl.objects},
                                   'composition': triples})
        except ValidationError as e:
            self.report_validation(decl, e)
            return
        self.doc.categories[decl.name] = C

    def _category_for(self, decl, name: str, where_key: str) -> Optional[FiniteCategory]:
        if name not in self.doc.category_decls:
            self.report('UnresolvedReference', decl.spans.get(where_key, (decl.line, decl.column)),
                        f"no category named {name}")
            return None
        return self.doc.categories.get(name)

    # daggers and involutions

    def resolve_dagger(self, decl: DaggerDecl) -> DaggerDecl:
        C = self._category_for(decl, decl.category, 'category')
        if C is None:
            return decl
        names = set(C.morphism_names())
        if not self.check_map(decl, decl.entries, names, names, f"dagger {decl.name}"):
            return decl
        dag = {C.identity(x): C.identity(x) for x in C.objects}
        entries = []
        for f, g in decl.entries:
            if C.is_identity(f) and g == f:
                continue
            entries.append((f, g))
        dag.update(dict(entries))
        order = {f: i for i, f in enumerate(C.morphism_names())}
        resolved = replace(decl, entries=tuple(sorted(set(entries), key=lambda e: order[e[0]])))
        try:
            self.doc.daggers[decl.name] = validate_dagger(C, dag, name=decl.name)
        except ValidationError as e:
            self.report_validation(decl, e)
        return resolved

    def resolve_involution(self, decl: InvolutionDecl) -> InvolutionDecl:
        C = self._category_for(decl, decl.category, 'category')
        if C is None:
            return decl
        objects, names = set(C.objects), set(C.morphism_names())
        ok = self.check_map(decl, decl.object_map, objects, objects, f"involution {decl.name}",
                            key=lambda x: ('object', x))
        ok = self.check_map(decl, decl.morphism_map, names, names, f"involution {decl.name}") and ok
        ok = self.check_map(decl, decl.eta, objects, names, f"eta of {decl.name}", key=lambda x: ('eta', x)) and ok
        if not ok:
            return decl
        object_map = dict(decl.object_map)
        morphisms = []
        for f, g in decl.morphism_map:
            if C.is_identity(f) and C.dom(f) in object_map and g == C.identity(object_map[C.dom(f)]):
                continue
            morphisms.append((f, g))
        morphism_map = {C.identity(x): C.identity(y) for x, y in object_map.items()}
        morphism_map.update(dict(morphisms))
        obj_order = {x: i for i, x in enumerate(C.objects)}
        mor_order = {f: i for i, f in enumerate(C.morphism_names())}
        resolved = replace(decl,
                           object_map=tuple(sorted(set(decl.object_map), key=lambda e: obj_order[e[0]])),
                           morphism_map=tuple(sorted(set(morphisms), key=lambda e: mor_order[e[0]])),
                           eta=tuple(sorted(set(decl.eta), key=lambda e: obj_order[e[0]])))
        try:
            self.doc.involutions[decl.name] = validate_anti_involution(
                C, (object_map, morphism_map), dict(decl.eta), name=decl.name)
        except ValidationError as e:
            self.report_validation(decl, e)
        return resolved

    # positivity and functors

    def resolve_positivity(self, decl: PositivityDecl) -> PositivityDecl:
        name = decl.involution
        if name not in self.doc.involution_decls and name not in self.doc.dagger_decls:
            self.report('UnresolvedReference', decl.spans.get('involution', (decl.line, decl.column)),
                        f"no involution or dagger named {name}")
            return decl
        if name not in self.doc.involutions and name not in self.doc.daggers:
            return decl
        A = self.doc.anti_involutive(name)
        C = A.base
        sets: Dict[str, set] = {}
        ok = True
        for c, members in decl.sets:
            if not C.has_object(c):
                self.report('UnresolvedReference', decl.spans.get(('object', c), (decl.line, decl.column)),
                            f"positivity {decl.name}: {c} is not an object of {C.label}")
                ok = False
                continue
            for h in members:
                if not C.has_morphism(h):
                    self.report('UnresolvedReference', decl.spans.get((c, h), (decl.line, decl.column)),
                                f"positivity {decl.name}: {h} is not declared")
                    ok = False
            sets.setdefault(c, set()).update(members)
        if not ok:
            return decl
        canonical = tuple((c, tuple(sort_idents(sets[c]))) for c in C.objects if sets.get(c))
        resolved = replace(decl, sets=canonical)
        try:
            self.doc.positivities[decl.name] = validate_positivity(A, sets, name=decl.name)
        except ValidationError as e:
            self.report_validation(decl, e)
        return resolved

    def resolve_functor(self, decl: FunctorDecl) -> FunctorDecl:
        C = self._category_for(decl, decl.source, 'source')
        D = self._category_for(decl, decl.target, 'target')
        if C is None or D is None:
            return decl
        ok = self.check_map(decl, decl.object_map, set(C.objects), set(D.objects), f"functor {decl.name}",
                            key=lambda x: ('object', x))
        ok = self.check_map(decl, decl.morphism_map, set(C.morphism_names()), set(D.morphism_names()),
                            f"functor {decl.name}") and ok
        if decl.phi is not None:
            ok = self.check_map(decl, decl.phi, set(C.objects), set(D.morphism_names()),
                                f"phi of {decl.name}") and ok
        if not ok:
            return decl
        object_map = dict(decl.object_map)
        morphisms = []
        for f, g in decl.morphism_map:
            if C.is_identity(f) and C.dom(f) in object_map and g == D.identity(object_map[C.dom(f)]):
                continue
            morphisms.append((f, g))
        morphism_map = {C.identity(x): D.identity(y) for x, y in object_map.items()}
        morphism_map.update(dict(morphisms))
        obj_order = {x: i for i, x in enumerate(C.objects)}
        mor_order = {f: i for i, f in enumerate(C.morphism_names())}
        resolved = replace(
            decl,
            object_map=tuple(sorted(set(decl.object_map), key=lambda e: obj_order[e[0]])),
            morphism_map=tuple(sorted(set(morphisms), key=lambda e: mor_order[e[0]])),
            phi=None if decl.phi is None else tuple(sorted(set(decl.phi), key=lambda e: obj_order[e[0]])))
        try:
            self.doc.functors[decl.name] = validate_functor(
                FunctorData(C, D, object_map, morphism_map, name=decl.name))
        except ValidationError as e:
            self.report_validation(decl, e)
        return resolved

    def run(self, decls: List) -> Document:
        self.register(decls)
        for kind in KIND_ORDER:
            table = self.doc.decls(kind)
            resolve = getattr(self, f"resolve_{kind}")
            for name in list(table):
                table[name] = resolve(table[name])
        return self.doc


def parse(text: str) -> Document:
    """
    Parse and validate .fincat text.

    Raises:
        DslError: diagnostics with codes LexError, ParseError, DuplicateName,
            UnresolvedReference or ValidationError, ordered by position
    """
    try:
        decls = _builder.transform(_parser.parse(text))
    except UnexpectedCharacters as e:
        raise DslError([Diagnostic('LexError', e.line, e.column, f"unexpected character {e.char!r}")])
    except UnexpectedEOF as e:
        line = text.count('\n') + 1
        raise DslError([Diagnostic('ParseError', line, 0, f"unexpected end of input, expected {sorted(e.expected)}")])
    except UnexpectedInput as e:
        token = getattr(e, 'token', None)
        found = 'end of input' if token is None or token.type == '$END' else repr(str(token))
        raise DslError([Diagnostic('ParseError', max(e.line, 0), max(e.column, 0), f"unexpected {found}")])
    except VisitError as e:
        meta = getattr(e.obj, 'meta', None)
        line, column = getattr(meta, 'line', 0), getattr(meta, 'column', 0)
        raise DslError([Diagnostic('ParseError', line, column, str(e.orig_exc))])

    resolver = _Resolver()
    doc = resolver.run(decls)
    if resolver.diagnostics:
        diagnostics = sorted(resolver.diagnostics, key=lambda d: (d.line, d.column))
        for d in diagnostics:
            logger.debug(f"dsl: {d}")
        raise DslError(diagnostics)
    logger.info(f"Parsed {doc!r}")
    return doc


def parse_file(path: str) -> Tuple[Document, str]:
    """Read and parse a .fincat file; returns the document and the raw text."""
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    return parse(text), text


# -- printing -------------------------------------------------------------------------


def _block(lines: List[str], indent: str = '    ') -> List[str]:
    return [indent + line for line in lines]


def _print_category(decl: CategoryDecl) -> List[str]:
    out = [f"category {decl.name} {{", f"  objects: {' '.join(decl.objects)};"]
    out.append('  morphisms:')
    out += _block([f"{f} : {a} -> {b}" for f, a, b in decl.morphisms])
    out.append('  ;')
    if decl.composition:
        out.append('  compose:')
        out += _block([f"{g} . {f} = {h}" for g, f, h in decl.composition])
        out.append('  ;')
    out.append('}')
    return out


def _print_entries(pairs, arrow: str) -> List[str]:
    return _block([f"{a} {arrow} {b}" for a, b in pairs])


def _print_dagger(decl: DaggerDecl) -> List[str]:
    return [f"dagger {decl.name} on {decl.category} {{"] + _print_entries(decl.entries, '->') + ['}']


def _print_involution(decl: InvolutionDecl) -> List[str]:
    out = [f"involution {decl.name} on {decl.category} {{", '  d:']
    out += _print_entries(decl.object_map, '->')
    out.append('  ;')
    out += _print_entries(decl.morphism_map, '->')
    out.append('  ;')
    out.append('  eta:')
    out += _print_entries(decl.eta, '=>')
    out.append('  ;')
    out.append('}')
    return out


def _print_positivity(decl: PositivityDecl) -> List[str]:
    out = [f"positivity {decl.name} on {decl.involution} {{"]
    out += [f"  {c}: {{ {' '.join(members)} }}" for c, members in decl.sets]
    out.append('}')
    return out


def _print_functor(decl: FunctorDecl) -> List[str]:
    out = [f"functor {decl.name} : {decl.source} -> {decl.target} {{", '  objects:']
    out += _print_entries(decl.object_map, '->')
    out.append('  ;')
    out.append('  morphisms:')
    out += _print_entries(decl.morphism_map, '->')
    out.append('  ;')
    if decl.phi is not None:
        out.append('  phi:')
        out += _print_entries(decl.phi, '=>')
        out.append('  ;')
    out.append('}')
    return out


_PRINTERS = {
    'category': _print_category,
    'dagger': _print_dagger,
    'involution': _print_involution,
    'positivity': _print_positivity,
    'functor': _print_functor,
}


def print_document(doc: Document) -> str:
    """Canonical text: kinds in a fixed order, names sorted within a kind, one blank line between blocks."""
    blocks = []
    for kind in KIND_ORDER:
        table = doc.decls(kind)
        for name in sort_idents(table):
            blocks.append('\n'.join(_PRINTERS[kind](table[name])))
    return '\n\n'.join(blocks) + ('\n' if blocks else '')


# -- structures to declarations -------------------------------------------------------


def _check_names(values, what: str):
    for v in values:
        if not is_valid_identifier(v):
            raise InvalidSpec(f"{what} {v!r} cannot be written as a .fincat identifier")


def category_to_decl(C: FiniteCategory, name: Optional[str] = None) -> CategoryDecl:
    """
    Declaration of an explicit category; identities must be named id_<object>.

    Raises:
        InvalidSpec: when an identifier cannot be printed
    """
    name = name or C.name
    _check_names([name], 'category name')
    _check_names(C.objects, 'object')
    _check_names(C.morphism_names(), 'morphism')
    for x in C.objects:
        if C.identity(x) != _identity(x):
            raise InvalidSpec(f"identity of {x} is named {C.identity(x)}, not {_identity(x)}")
    morphisms = tuple((f, C.dom(f), C.cod(f)) for f in C.morphism_names() if not C.is_identity(f))
    composition = []
    for g, _, _ in morphisms:
        for f, _, _ in morphisms:
            if C.cod(f) == C.dom(g):
                composition.append((g, f, C.compose(g, f)))
    return CategoryDecl(name, tuple(C.objects), morphisms, tuple(composition))


def _category_name(categories: Mapping[str, FiniteCategory], C: FiniteCategory) -> str:
    for name, candidate in categories.items():
        if candidate is C:
            return name
    for name, candidate in categories.items():
        if candidate == C:
            return name
    raise InvalidSpec(f"{C.label} is not among the categories being written")


def document_from_structures(categories: Mapping[str, FiniteCategory],
                             daggers: Optional[Mapping[str, DaggerStructure]] = None,
                             involutions: Optional[Mapping[str, AntiInvolutiveCategory]] = None,
                             positivities: Optional[Mapping[str, PositivityNotion]] = None,
                             functors: Optional[Mapping[str, Tuple[FunctorData, Optional[Mapping]]]] = None
                             ) -> Document:
    """
    Document describing already validated structures, keyed by the names to print.

    Positivity notions are written against the involution they live on, which must be
    among the given involutions or be T of one of the given daggers (by identity).
    Functors are given as (functor, phi or None) pairs.
    """
    doc = Document()
    for name, C in categories.items():
        decl = category_to_decl(C, name)
        doc.category_decls[name] = decl
        doc.categories[name] = C
    for name, D in (daggers or {}).items():
        _check_names([name], 'dagger name')
        C = D.base
        entries = tuple((f, D.adjoint(f)) for f in C.morphism_names() if not C.is_identity(f))
        doc.dagger_decls[name] = DaggerDecl(name, _category_name(categories, C), entries)
        doc.daggers[name] = D
    for name, A in (involutions or {}).items():
        _check_names([name], 'involution name')
        C = A.base
        object_map = tuple((x, A.d_obj(x)) for x in C.objects)
        morphism_map = tuple((f, A.d_mor(f)) for f in C.morphism_names() if not C.is_identity(f))
        eta = tuple((x, A.eta_at(x)) for x in C.objects)
        doc.involution_decls[name] = InvolutionDecl(name, _category_name(categories, C), object_map, morphism_map, eta)
        doc.involutions[name] = A
    for name, P in (positivities or {}).items():
        _check_names([name], 'positivity name')
        owner = next((n for n, A in doc.involutions.items() if A is P.involution), None)
        if owner is None:
            owner = next((n for n, D in doc.daggers.items() if T_on_category(D) is P.involution), None)
        if owner is None:
            raise InvalidSpec(f"positivity {name} lives on an involution that is not being written")
        C = P.involution.base
        sets = tuple((c, tuple(sort_idents(P.sets[c]))) for c in C.objects if P.sets.get(c))
        doc.positivity_decls[name] = PositivityDecl(name, owner, sets)
        doc.positivities[name] = P
    for name, (F, phi) in (functors or {}).items():
        doc.functor_decls[name] = functor_to_decl(F, name, _category_name(categories, F.source),
                                                  _category_name(categories, F.target), phi)
        doc.functors[name] = F
    return doc


def functor_to_decl(F: FunctorData, name: str, source: str, target: str,
                    phi: Optional[Mapping] = None) -> FunctorDecl:
    """Declaration of a functor between two named categories, optionally with a phi block."""
    C, D = F.source, F.target
    _check_names([name], 'functor name')
    object_map = tuple((x, F.obj(x)) for x in C.objects)
    morphism_map = tuple((f, F.mor(f)) for f in C.morphism_names()
                         if not C.is_identity(f) or F.mor(f) != D.identity(F.obj(C.dom(f))))
    phi_block = None if phi is None else tuple((x, phi[x]) for x in C.objects)
    return FunctorDecl(name, source, target, object_map, morphism_map, phi_block)
