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

"""Positive queries

A query is a tree of atoms, conjunctions and disjunctions. Every variable is
existentially quantified, so a query is a Boolean sentence. Conjunctive
queries are the disjunction-free queries.
"""

from __future__ import annotations
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import TypeAlias, TYPE_CHECKING

from qrelevance.exceptions import QueryError
from qrelevance.model import Fact, TypedValue
from qrelevance.types import DiagnosticKind

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator, Mapping
    from qrelevance.model import Configuration, Schema
    from qrelevance.types import DomainName, RelationName, VariableName

NUMBER_RE = re.compile(r"-?\d+(\.\d+)?")
NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def format_token(token: str, *, in_query: bool) -> str:
    """
    Textual form of a constant token. Inside queries every non-numeric token is
    quoted, since bare lowercase identifiers denote variables there.

    :param token: the token
    :param in_query: whether the token appears in a query
    :return: the printable form
    """

    if NUMBER_RE.fullmatch(token):
        return token
    if not in_query and NAME_RE.fullmatch(token):
        return token
    return '"' + token.replace("\\", "\\\\").replace('"', '\\"') + '"'


@dataclass(frozen=True, order=True)
class Variable:
    name: VariableName

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Constant:
    value: TypedValue

    def __str__(self) -> str:
        return format_token(self.value.token, in_query=True)


Term: TypeAlias = Variable | Constant


@dataclass(frozen=True)
class Atom:
    relation: RelationName
    terms: tuple[Term, ...] = ()

    def variables(self) -> list[VariableName]:
        """Variables of the atom, in order of first occurrence"""
        return list(dict.fromkeys(t.name for t in self.terms if isinstance(t, Variable)))

    def ground(self, assignment: Mapping[VariableName, TypedValue]) -> Fact:
        """
        Image of the atom under an assignment covering its variables

        :param assignment: variable to value mapping
        :return: the ground fact
        """

        return Fact(
            self.relation,
            tuple(t.value if isinstance(t, Constant) else assignment[t.name] for t in self.terms),
        )

    def __str__(self) -> str:
        return f"{self.relation}({', '.join(str(t) for t in self.terms)})"


@dataclass(frozen=True)
class And:
    children: tuple[Query, ...] = field(default=())

    def __str__(self) -> str:
        if not self.children:
            return "true"
        return " & ".join(
            f"({c})" if isinstance(c, (Or, And)) and c.children else str(c) for c in self.children
        )


@dataclass(frozen=True)
class Or:
    children: tuple[Query, ...] = field(default=())

    def __str__(self) -> str:
        if not self.children:
            return "false"
        return " | ".join(
            f"({c})" if isinstance(c, Or) and c.children else str(c) for c in self.children
        )


Query: TypeAlias = Atom | And | Or
"""
Positive query: an atom, a conjunction or a disjunction of queries
"""

TRUE = And()  #: The empty conjunction
FALSE = Or()  #: The empty disjunction


def conjoin(*queries: Query) -> Query:
    """
    Conjunction of queries, flattening nested conjunctions and dropping `true`.
    A single remaining conjunct is returned as is.
    """

    children: list[Query] = []
    for q in queries:
        if isinstance(q, And):
            children.extend(q.children)
        else:
            children.append(q)
    if any(isinstance(c, Or) and not c.children for c in children):
        return FALSE
    return children[0] if len(children) == 1 else And(tuple(children))


def disjoin(*queries: Query) -> Query:
    """
    Disjunction of queries, flattening nested disjunctions and dropping `false`.
    A single remaining disjunct is returned as is.
    """

    children: list[Query] = []
    for q in queries:
        if isinstance(q, Or):
            children.extend(q.children)
        else:
            children.append(q)
    if any(isinstance(c, And) and not c.children for c in children):
        return TRUE
    return children[0] if len(children) == 1 else Or(tuple(children))


def iter_atoms(q: Query) -> Iterator[Atom]:
    """Atom occurrences of the query tree, left to right"""
    if isinstance(q, Atom):
        yield q
    else:
        for c in q.children:
            yield from iter_atoms(c)


def atoms(q: Query) -> list[Atom]:
    return list(iter_atoms(q))


def variables(q: Query) -> list[VariableName]:
    """Variables of the query in order of first occurrence"""
    return list(dict.fromkeys(v for a in iter_atoms(q) for v in a.variables()))


def constants(q: Query) -> set[TypedValue]:
    return {t.value for a in iter_atoms(q) for t in a.terms if isinstance(t, Constant)}


def relations(q: Query) -> set[RelationName]:
    return {a.relation for a in iter_atoms(q)}


def is_cq(q: Query) -> bool:
    """True if the query has no disjunction node"""
    if isinstance(q, Atom):
        return True
    if isinstance(q, Or):
        return False
    return all(is_cq(c) for c in q.children)


def size(q: Query) -> int:
    """Number of atoms plus number of connectives"""
    if isinstance(q, Atom):
        return 1
    return 1 + sum(size(c) for c in q.children)


def map_atoms(q: Query, fn: Callable[[int, Atom], Query]) -> Query:
    """
    Rebuild a query replacing every atom occurrence. Occurrences are numbered
    left to right as in :py:func:`atoms`.

    :param q: the query
    :param fn: receives the occurrence index and the atom, returns its replacement
    :return: the rebuilt query
    """

    counter = iter(range(1 << 62))

    def rebuild(node: Query) -> Query:
        if isinstance(node, Atom):
            return fn(next(counter), node)
        children = tuple(rebuild(c) for c in node.children)
        return And(children) if isinstance(node, And) else Or(children)

    return rebuild(q)


def substitute(q: Query, mapping: Mapping[VariableName, Term]) -> Query:
    """Replace variables by terms, variables missing from `mapping` are kept"""

    def sub(t: Term) -> Term:
        return mapping.get(t.name, t) if isinstance(t, Variable) else t

    return map_atoms(q, lambda _, a: Atom(a.relation, tuple(sub(t) for t in a.terms)))


def rename_variables(q: Query, rename: Callable[[VariableName], VariableName]) -> Query:
    return substitute(q, {v: Variable(rename(v)) for v in variables(q)})


def simplify(q: Query) -> Query:
    """Normalize the tree: flatten nested connectives and propagate `true`/`false`"""
    if isinstance(q, Atom):
        return q
    children = [simplify(c) for c in q.children]
    return conjoin(*children) if isinstance(q, And) else disjoin(*children)


def _merge(left: tuple[Atom, ...], right: tuple[Atom, ...]) -> tuple[Atom, ...]:
    return tuple(dict.fromkeys(left + right))


@lru_cache(maxsize=1024)
def dnf(q: Query) -> tuple[tuple[Atom, ...], ...]:
    """
    Disjunctive normal form as tuples of atoms. Atoms are deduplicated inside a
    disjunct, identical disjuncts are merged. The result may be exponentially
    larger than the query.

    :param q: the query
    :return: tuple of disjuncts
    """

    if isinstance(q, Atom):
        return ((q,),)
    if isinstance(q, Or):
        result: dict[frozenset[Atom], tuple[Atom, ...]] = {}
        for c in q.children:
            for d in dnf(c):
                result.setdefault(frozenset(d), d)
        return tuple(result.values())
    partial: list[tuple[Atom, ...]] = [()]
    for c in q.children:
        merged: dict[frozenset[Atom], tuple[Atom, ...]] = {}
        for left in partial:
            for right in dnf(c):
                d = _merge(left, right)
                merged.setdefault(frozenset(d), d)
        partial = list(merged.values())
        if not partial:
            break
    return tuple(partial)


def to_dnf(q: Query) -> list[And]:
    """
    Disjunction of conjunctive queries equivalent to `q`. A conjunction of
    atoms is returned unchanged; the output can be exponentially large.

    :param q: the query
    :return: list of conjunctions of atoms
    """

    if isinstance(q, And) and all(isinstance(c, Atom) for c in q.children):
        if len(set(q.children)) == len(q.children):
            return [q]
    return [And(d) for d in dnf(q)]


@dataclass(frozen=True)
class Diagnostic:
    kind: DiagnosticKind
    message: str

    def __str__(self) -> str:
        return f"{self.kind.name}: {self.message}"


@dataclass(frozen=True)
class QueryDiagnostics:
    """Result of :py:func:`validate_query`"""

    diagnostics: tuple[Diagnostic, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.diagnostics

    def kinds(self) -> set[DiagnosticKind]:
        return {d.kind for d in self.diagnostics}

    def __iter__(self) -> Iterator[Diagnostic]:
        return iter(self.diagnostics)


def validate_query(
    q: Query, schema: Schema, conf: Configuration, *, admit_constants: bool = False
) -> QueryDiagnostics:
    """
    Report unknown relations, arity errors, domain clashes on shared variables
    and constants that are not admitted in the configuration.

    :param q: the query
    :param schema: the schema
    :param conf: the configuration whose active domain must contain the constants
    :param admit_constants: do not report un-admitted constants
    :return: the diagnostics (empty when the query is valid)
    """

    found: list[Diagnostic] = []
    domains: dict[VariableName, DomainName] = {}
    adom = conf.adom
    for atom in iter_atoms(q):
        if not schema.has_relation(atom.relation):
            found.append(Diagnostic(DiagnosticKind.relation, f"unknown relation in {atom}"))
            continue
        rel = schema.relation(atom.relation)
        if len(atom.terms) != rel.arity:
            found.append(
                Diagnostic(
                    DiagnosticKind.arity,
                    f"{atom} has {len(atom.terms)} term(s), {rel.name} has arity {rel.arity}",
                )
            )
            continue
        for t, attr in zip(atom.terms, rel.attributes):
            if isinstance(t, Variable):
                known = domains.setdefault(t.name, attr.domain)
                if known != attr.domain:
                    found.append(
                        Diagnostic(
                            DiagnosticKind.domain,
                            f"variable {t.name} used with domains {known} and {attr.domain}",
                        )
                    )
            else:
                if t.value.domain != attr.domain:
                    found.append(
                        Diagnostic(
                            DiagnosticKind.domain,
                            f"constant {t} of domain {t.value.domain} at {rel.name}.{attr.name}",
                        )
                    )
                elif not admit_constants and t.value not in adom:
                    found.append(
                        Diagnostic(DiagnosticKind.constant, f"constant {t} is not admitted")
                    )
    return QueryDiagnostics(tuple(dict.fromkeys(found)))


def variable_domains(q: Query, schema: Schema) -> dict[VariableName, DomainName]:
    """
    Domain of every variable of the query

    :raises QueryError: on unknown relations, arity errors or domain clashes
    """

    domains: dict[VariableName, DomainName] = {}
    for atom in iter_atoms(q):
        rel = schema.relation(atom.relation)
        if len(atom.terms) != rel.arity:
            raise QueryError(f"{atom} does not match the arity of {rel.name}")
        for t, attr in zip(atom.terms, rel.attributes):
            if isinstance(t, Variable) and domains.setdefault(t.name, attr.domain) != attr.domain:
                raise QueryError(f"Variable {t.name} is used with two domains")
    return domains
