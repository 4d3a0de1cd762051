# Copyright 2023 Quarkslab
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Problem file parser

PEG grammar of the ``.alp`` problem format and its translation into a
:py:class:`ProblemInstance`. Statements may come in any order; names are
resolved once the whole file is read, and every problem is reported with
its line and column.
"""

from __future__ import annotations
import re
from dataclasses import dataclass, field
from typing import Any, NamedTuple, TYPE_CHECKING

from arpeggio import EOF, NoMatch, Optional, ParserPython, PTNodeVisitor, ZeroOrMore
from arpeggio import RegExMatch as _
from arpeggio import visit_parse_tree

from qrelevance.exceptions import ParseError, QRelevanceError
from qrelevance.model import (
    Access,
    AccessMethod,
    Attribute,
    Configuration,
    Fact,
    ProblemInstance,
    Relation,
    Schema,
    TypedValue,
)
from qrelevance.query import (
    FALSE,
    TRUE,
    And,
    Atom,
    Constant,
    Or,
    Variable,
    constants,
    validate_query,
    variables,
)
from qrelevance.types import AccessMode

if TYPE_CHECKING:
    from qrelevance.query import Query, Term

Span = tuple[int, int]


# Grammar
def comment():
    return _(r"#[^\n]*")


def name():
    return _(r"[A-Za-z_][A-Za-z0-9_]*")


def bare():
    return _(r"[A-Za-z_][A-Za-z0-9_]*")


def variable():
    return _(r"[A-Za-z_][A-Za-z0-9_]*")


def number():
    return _(r"-?\d+(\.\d+)?")


def string():
    return _(r'"(\\.|[^"\\])*"')


def hole():
    return _(r"\?")


def value():
    return [number, string, bare]


def domain_decl():
    return _(r"domain\b"), name


def attribute():
    return name, ":", name


def relation_decl():
    return _(r"relation\b"), name, "(", Optional(attribute, ZeroOrMore(",", attribute)), ")"


def mode():
    return _(r"(dependent|independent)\b")


def access_decl():
    return (
        _(r"access\b"),
        name,
        _(r"on\b"),
        name,
        _(r"inputs\b"),
        "(",
        Optional(name, ZeroOrMore(",", name)),
        ")",
        mode,
    )


def fact_decl():
    return _(r"fact\b"), name, "(", Optional(value, ZeroOrMore(",", value)), ")"


def const_decl():
    return _(r"const\b"), value, ":", name


def term():
    return [number, string, variable]


def atom():
    return name, "(", Optional(term, ZeroOrMore(",", term)), ")"


def truth():
    return _(r"(true|false)\b")


def primary():
    return [truth, atom, ("(", expression, ")")]


def conjunction():
    return primary, ZeroOrMore("&", primary)


def expression():
    return conjunction, ZeroOrMore("|", conjunction)


def head():
    return "(", Optional(name, ZeroOrMore(",", name)), ")"


def query_decl():
    return _(r"query\b"), name, Optional(head), "=", expression


def slot():
    return [hole, number, string, bare]


def access_expr():
    return name, "(", Optional(slot, ZeroOrMore(",", slot)), ")", _(r"via\b"), name


def target_decl():
    return _(r"target\b"), access_expr


def statement():
    return [domain_decl, relation_decl, access_decl, fact_decl, const_decl, query_decl, target_decl]


def problem():
    return ZeroOrMore(statement), EOF


def access_line():
    return access_expr, EOF


# Parse tree
class Statement(NamedTuple):
    kind: str
    span: Span
    payload: Any


class RawAccess(NamedTuple):
    relation: str
    slots: list[tuple[str, str | None]]
    method: str


def _unquote(text: str) -> str:
    return re.sub(r"\\(.)", r"\1", text[1:-1])


def _parts(children) -> list:
    return [c for c in children if not isinstance(c, str)]


class ProblemVisitor(PTNodeVisitor):
    """Turns the parse tree into a list of raw statements"""

    def __init__(self, parser: ParserPython, **kwargs):
        super().__init__(**kwargs)
        self.parser = parser

    def span(self, node) -> Span:
        return self.parser.pos_to_linecol(node.position)

    def visit_name(self, node, children):
        return node.value

    def visit_bare(self, node, children):
        return ("const", node.value)

    def visit_variable(self, node, children):
        return ("var", node.value)

    def visit_number(self, node, children):
        return ("const", node.value)

    def visit_string(self, node, children):
        return ("const", _unquote(node.value))

    def visit_hole(self, node, children):
        return ("hole", None)

    def visit_mode(self, node, children):
        return AccessMode[node.value]

    def visit_value(self, node, children):
        return _parts(children)[0]

    visit_term = visit_value
    visit_slot = visit_value

    def visit_domain_decl(self, node, children):
        return Statement("domain", self.span(node), children.name[0])

    def visit_attribute(self, node, children):
        return tuple(children.name)

    def visit_relation_decl(self, node, children):
        return Statement("relation", self.span(node), (children.name[0], list(children.attribute)))

    def visit_access_decl(self, node, children):
        method, relation, *inputs = children.name
        payload = (method, relation, inputs, children.mode[0])
        return Statement("access", self.span(node), payload)

    def visit_fact_decl(self, node, children):
        return Statement("fact", self.span(node), (children.name[0], list(children.value)))

    def visit_const_decl(self, node, children):
        return Statement("const", self.span(node), (children.value[0], children.name[0]))

    def visit_atom(self, node, children):
        return ("atom", children.name[0], list(children.term), self.span(node))

    def visit_truth(self, node, children):
        return ("truth", node.value == "true")

    def visit_primary(self, node, children):
        return _parts(children)[0]

    def visit_conjunction(self, node, children):
        parts = _parts(children)
        return parts[0] if len(parts) == 1 else ("and", parts)

    def visit_expression(self, node, children):
        parts = _parts(children)
        return parts[0] if len(parts) == 1 else ("or", parts)

    def visit_head(self, node, children):
        return ("head", list(children.name))

    def visit_query_decl(self, node, children):
        heads = children.head
        payload = (children.name[0], heads[0][1] if heads else [], children.expression[0])
        return Statement("query", self.span(node), payload)

    def visit_access_expr(self, node, children):
        return RawAccess(children.name[0], list(children.slot), children.name[1])

    def visit_target_decl(self, node, children):
        return Statement("target", self.span(node), children.access_expr[0])

    def visit_statement(self, node, children):
        return _parts(children)[0]

    def visit_problem(self, node, children):
        return [c for c in children if isinstance(c, Statement)]

    def visit_access_line(self, node, children):
        return _parts(children)[0]


_PARSERS: dict[str, ParserPython] = {}


def _parser(rule) -> ParserPython:
    if rule.__name__ not in _PARSERS:
        _PARSERS[rule.__name__] = ParserPython(rule, comment_def=comment)
    return _PARSERS[rule.__name__]


def _parse(rule, text: str):
    parser = _parser(rule)
    try:
        tree = parser.parse(text)
    except NoMatch as e:
        raise ParseError([(e.line, e.col, f"syntax error: {e}")]) from None
    return visit_parse_tree(tree, ProblemVisitor(parser))


# Resolution
@dataclass(frozen=True)
class ProblemFile:
    """A parsed problem together with the source position of every named item"""

    instance: ProblemInstance
    spans: dict[str, Span] = field(default_factory=dict)  #: "relation:R", "query:Q", ...


class _Resolver:
    def __init__(self) -> None:
        self.diagnostics: list[tuple[int, int, str]] = []

    def error(self, span: Span, message: str) -> None:
        self.diagnostics.append((span[0], span[1], message))

    def schema(self, statements: list[Statement], spans: dict[str, Span]) -> Schema | None:
        domains: list[str] = []
        relations: dict[str, Relation] = {}
        methods: dict[str, AccessMethod] = {}
        for st in statements:
            if st.kind == "domain":
                if st.payload in domains:
                    self.error(st.span, f"duplicate domain {st.payload}")
                    continue
                domains.append(st.payload)
                spans[f"domain:{st.payload}"] = st.span
        for st in statements:
            if st.kind != "relation":
                continue
            rel_name, attrs = st.payload
            if rel_name in relations:
                self.error(st.span, f"duplicate relation {rel_name}")
                continue
            if len({a for a, _d in attrs}) != len(attrs):
                self.error(st.span, f"duplicate attribute in relation {rel_name}")
                continue
            undeclared = [d for _a, d in attrs if d not in domains]
            if undeclared:
                self.error(st.span, f"relation {rel_name} uses the unknown domain {undeclared[0]}")
                continue
            relations[rel_name] = Relation(rel_name, tuple(Attribute(a, d) for a, d in attrs))
            spans[f"relation:{rel_name}"] = st.span
        for st in statements:
            if st.kind != "access":
                continue
            method, rel_name, inputs, access_mode = st.payload
            if method in methods:
                self.error(st.span, f"duplicate access method {method}")
            elif rel_name not in relations:
                self.error(st.span, f"access method {method} is on the unknown relation {rel_name}")
            elif len(set(inputs)) != len(inputs):
                self.error(st.span, f"duplicate input attribute in {method}")
            elif not set(inputs) <= {a.name for a in relations[rel_name].attributes}:
                self.error(st.span, f"input of {method} is not an attribute of {rel_name}")
            else:
                methods[method] = AccessMethod(method, rel_name, tuple(inputs), access_mode)
                spans[f"access:{method}"] = st.span
        if self.diagnostics:
            return None
        return Schema(tuple(domains), tuple(relations.values()), tuple(methods.values()))

    def values(
        self, schema: Schema, relation: str, items: list[tuple[str, str | None]], span: Span
    ) -> tuple[TypedValue | None, ...] | None:
        if not schema.has_relation(relation):
            self.error(span, f"unknown relation {relation}")
            return None
        rel = schema.relation(relation)
        if len(items) != rel.arity:
            self.error(span, f"{relation} has arity {rel.arity}, got {len(items)} value(s)")
            return None
        return tuple(
            None if kind == "hole" else TypedValue(token, a.domain)  # type: ignore[arg-type]
            for (kind, token), a in zip(items, rel.attributes)
        )

    def configuration(self, schema: Schema, statements: list[Statement]) -> Configuration:
        facts = set()
        consts = set()
        for st in statements:
            if st.kind == "fact":
                rel_name, items = st.payload
                values = self.values(schema, rel_name, items, st.span)
                if values is not None:
                    facts.add(Fact(rel_name, values))  # type: ignore[arg-type]
            elif st.kind == "const":
                (_kind, token), domain = st.payload
                if domain not in schema.domains:
                    self.error(st.span, f"unknown domain {domain}")
                else:
                    consts.add(TypedValue(token, domain))
        return Configuration(frozenset(facts), frozenset(consts))

    def query(self, schema: Schema, raw) -> Query | None:
        kind = raw[0]
        if kind == "truth":
            return TRUE if raw[1] else FALSE
        if kind in ("and", "or"):
            children = [self.query(schema, c) for c in raw[1]]
            if any(c is None for c in children):
                return None
            return And(tuple(children)) if kind == "and" else Or(tuple(children))  # type: ignore
        _atom, rel_name, items, span = raw
        if not schema.has_relation(rel_name):
            self.error(span, f"unknown relation {rel_name}")
            return None
        rel = schema.relation(rel_name)
        if len(items) != rel.arity:
            self.error(span, f"{rel_name} has arity {rel.arity}, got {len(items)} term(s)")
            return None
        terms: list[Term] = [
            Variable(token) if kind == "var" else Constant(TypedValue(token, a.domain))
            for (kind, token), a in zip(items, rel.attributes)
        ]
        return Atom(rel_name, tuple(terms))

    def access(self, schema: Schema, raw: RawAccess, span: Span) -> Access | None:
        values = self.values(schema, raw.relation, raw.slots, span)
        if values is None:
            return None
        try:
            method = schema.method(raw.method)
        except QRelevanceError:
            self.error(span, f"unknown access method {raw.method}")
            return None
        if method.relation != raw.relation:
            self.error(span, f"{raw.method} is not an access method on {raw.relation}")
            return None
        inputs = schema.input_positions(raw.method)
        if any((values[p] is None) == (p in inputs) for p in range(len(values))):
            self.error(span, f"the inputs of {raw.method} must be bound and the other places '?'")
            return None
        return Access(raw.method, tuple(values[p] for p in inputs))  # type: ignore[misc]


def parse_problem(text: str, *, admit_query_constants: bool = False) -> ProblemFile:
    """
    Parse and validate a problem file.

    :param text: content of the file
    :param admit_query_constants: admit the constants of the queries in the
        configuration instead of reporting them
    :return: the problem
    :raises ParseError: with every syntax or validation diagnostic
    """

    statements: list[Statement] = _parse(problem, text)
    spans: dict[str, Span] = {}
    resolver = _Resolver()
    schema = resolver.schema(statements, spans)
    if schema is None:
        raise ParseError(resolver.diagnostics)
    conf = resolver.configuration(schema, statements)

    queries: dict[str, Query] = {}
    heads: dict[str, tuple[Variable, ...]] = {}
    for st in statements:
        if st.kind != "query":
            continue
        name_, head_vars, raw = st.payload
        if name_ in queries:
            resolver.error(st.span, f"duplicate query {name_}")
            continue
        q = resolver.query(schema, raw)
        if q is None:
            continue
        queries[name_] = q
        spans[f"query:{name_}"] = st.span
        if head_vars:
            heads[name_] = tuple(Variable(v) for v in head_vars)

    if admit_query_constants:
        conf = conf.with_constants(v for q in queries.values() for v in constants(q))
    for name_, q in queries.items():
        for d in validate_query(q, schema, conf, admit_constants=admit_query_constants):
            resolver.error(spans[f"query:{name_}"], f"query {name_}: {d.message}")
        occurring = set(variables(q))
        for v in heads.get(name_, ()):
            if v.name not in occurring:
                message = f"head variable {v.name} of {name_} is unused"
                resolver.error(spans[f"query:{name_}"], message)

    targets = [st for st in statements if st.kind == "target"]
    target = None
    for st in targets[1:]:
        resolver.error(st.span, "only one target access may be declared")
    if targets:
        target = resolver.access(schema, targets[0].payload, targets[0].span)
        spans["target"] = targets[0].span

    if resolver.diagnostics:
        raise ParseError(resolver.diagnostics)
    return ProblemFile(ProblemInstance(schema, conf, queries, heads, target), spans)


def parse_access(text: str, schema: Schema) -> Access:
    """
    Parse an access given as ``R(v, ?) via M``

    :raises ParseError: on syntax errors or when the access does not fit the schema
    """

    raw: RawAccess = _parse(access_line, text)
    resolver = _Resolver()
    access = resolver.access(schema, raw, (1, 1))
    if access is None:
        raise ParseError(resolver.diagnostics)
    return access
