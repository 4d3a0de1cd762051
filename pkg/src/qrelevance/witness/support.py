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

"""Support of fact sets

A set of facts is producible from a configuration when its facts can be
fetched one at a time, each dependent access using values known at that
point. Values missing from the active domain are obtained through support
facts that carry them at a position no dependent method needs as input.
"""

from __future__ import annotations
import itertools
from dataclasses import dataclass, field
from time import perf_counter
from typing import TYPE_CHECKING

import networkx

from qrelevance.exceptions import SchemaError
from qrelevance.model import Fact, Path, Step, access_for
from qrelevance.query import holds_through
from qrelevance.types import Cutoff

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping
    from qrelevance.model import Access, Configuration, FreshValues, Schema, TypedValue
    from qrelevance.query import Query
    from qrelevance.relevance import SearchStats
    from qrelevance.types import DomainName, Position, RelationName
    from qrelevance.witness.budget import Budget


@dataclass(frozen=True)
class SupportPlan:
    """Production order of a fact set: one singleton access per fact"""

    target: frozenset[Fact]
    steps: tuple[Step, ...] = ()

    def path(self, conf: Configuration) -> Path:
        return Path(conf, self.steps)

    def dependency_graph(self, conf: Configuration) -> networkx.DiGraph:
        """
        Edge from the step that first makes a value known to every later step
        using it as a binding value

        :param conf: the initial configuration
        :return: directed acyclic graph over step indices
        """

        graph = networkx.DiGraph()
        graph.add_nodes_from(range(len(self.steps)))
        origin: dict[TypedValue, int] = {}
        known = set(conf.adom)
        for i, step in enumerate(self.steps):
            for v in step.access.binding:
                if v not in known and v in origin:
                    graph.add_edge(origin[v], i)
            for fact in step.response:
                for v in fact.values:
                    origin.setdefault(v, i)
        return graph

    def is_tree_like(self, conf: Configuration) -> bool:
        """True if every value outside the active domain is introduced by exactly one step"""
        introduced: dict[TypedValue, int] = {}
        for step in self.steps:
            for fact in step.response:
                for v in set(fact.values) - set(step.access.binding):
                    if v not in conf.adom:
                        introduced[v] = introduced.get(v, 0) + 1
        return all(n == 1 for n in introduced.values())


def _candidate_methods(fact: Fact, schema: Schema) -> list[str]:
    methods = schema.methods_on(fact.relation)
    if not methods:
        raise SchemaError(f"Relation {fact.relation} has no access method")
    return [m.name for m in sorted(methods, key=lambda m: m.is_dependent)]


def closure(
    conf: Configuration, schema: Schema, facts: Iterable[Fact]
) -> tuple[list[Step], set[TypedValue], list[Fact]]:
    """
    Greedy production of a fact set. Availability only grows, so the greedy
    fixpoint produces every fact that any order could produce.

    :param conf: the starting configuration
    :param schema: the schema
    :param facts: the facts to produce
    :return: the steps, the values known at the fixpoint and the facts left blocked
    :raises SchemaError: if a fact is on a relation without access method
    """

    pending = sorted(set(facts) - conf.facts)
    for fact in pending:
        _candidate_methods(fact, schema)
    known = set(conf.adom)
    steps: list[Step] = []
    progress = True
    while pending and progress:
        progress = False
        blocked: list[Fact] = []
        for fact in pending:
            for method in _candidate_methods(fact, schema):
                access = access_for(fact, method, schema)
                if not schema.method(method).is_dependent or set(access.binding) <= known:
                    steps.append(Step(access, frozenset([fact])))
                    known.update(fact.values)
                    progress = True
                    break
            else:
                blocked.append(fact)
        pending = blocked
    return steps, known, pending


def producible_closure(
    conf: Configuration, schema: Schema, facts: Iterable[Fact]
) -> SupportPlan | None:
    """
    Order the accesses producing a fact set so that every dependent binding
    uses values already known.

    :param conf: the starting configuration
    :param schema: the schema
    :param facts: the target facts (those already in `conf` need no access)
    :return: the plan, None if no order exists
    :raises SchemaError: if a target fact is on a relation without access method
    """

    target = frozenset(facts)
    steps, _, blocked = closure(conf, schema, target)
    if blocked:
        return None
    return SupportPlan(target, tuple(steps))


def generating_positions(schema: Schema, relation: RelationName) -> set[Position]:
    """Positions at which some method of the relation accepts an unknown value"""
    arity = schema.relation(relation).arity
    found: set[Position] = set()
    for m in schema.methods_on(relation):
        inputs = set(schema.input_positions(m.name)) if m.is_dependent else set()
        found.update(p for p in range(arity) if p not in inputs)
    return found


def generating_domains(schema: Schema) -> set[DomainName]:
    """Domains of which an access can return values not known yet"""
    return {
        r.attributes[p].domain
        for r in schema.relations
        for p in generating_positions(schema, r.name)
    }


@dataclass
class Candidate:
    """State of the support search"""

    first: frozenset[Fact]
    rest: frozenset[Fact]
    fresh_used: dict[DomainName, int]
    depth: dict[TypedValue, int] = field(default_factory=dict)
    skipped: frozenset[TypedValue] = frozenset()
    roots: int = 0
    passive: int = 0
    added: int = 0  #: Support facts added by the search

    @property
    def facts(self) -> frozenset[Fact]:
        return self.first | self.rest


class SupportSearch:
    """
    Depth-first search of support facts making a fact set producible.

    :param schema: the schema
    :param conf: the starting configuration
    :param budget: the search budget
    :param stats: statistics updated in place, cut-offs included
    :param fresh: the canonical fresh value supply
    :param blocking: a query that must stay false on the candidate (pruning). It
        must already be false on the configuration extended with the facts of
        the initial candidate: only the homomorphisms using a new support are
        searched.
    :param first: the distinguished access whose response may hold support facts
    :param chain_limit: number of support chains and of non-generating supports
        allowed by the chain heuristic
    """

    def __init__(
        self,
        schema: Schema,
        conf: Configuration,
        budget: Budget,
        stats: SearchStats,
        fresh: FreshValues,
        *,
        blocking: Query | None = None,
        first: Access | None = None,
        chain_limit: int = 0,
        deadline: float | None = None,
    ):
        self.schema = schema
        self.conf = conf
        self.budget = budget
        self.stats = stats
        self.fresh = fresh
        self.blocking = blocking
        self.first = first
        self.chain_limit = chain_limit
        self.deadline = deadline
        self.generating = generating_domains(schema)
        self.level: int | None = None  #: Support facts a candidate may add, None for no limit
        self.level_cut = False  #: Set when `level` stopped the search of some candidate
        self._seen: set[tuple[frozenset[Fact], frozenset[Fact]]] = set()

    def expired(self) -> bool:
        if self.deadline is not None and perf_counter() > self.deadline:
            self.stats.cut(Cutoff.time)
            return True
        return False

    def completions(self, candidate: Candidate) -> Iterator[Candidate]:
        """
        Yield candidates whose remaining facts are producible from the
        configuration extended with the first response

        :param candidate: initial candidate
        :return: iterator over completed candidates, each set pair reported once
        """

        self._seen = set()
        yield from self._extend(candidate)

    def _missing(self, candidate: Candidate) -> tuple[list[TypedValue], bool]:
        base = self.conf.with_facts(candidate.first)
        _, known, blocked = closure(base, self.schema, candidate.rest)
        if not blocked:
            return [], True
        missing: set[TypedValue] = set()
        for fact in blocked:
            for m in self.schema.methods_on(fact.relation):
                if m.is_dependent:
                    missing.update(
                        fact.values[p] for p in self.schema.input_positions(m.name)
                        if fact.values[p] not in known
                    )
        if any(v.domain not in self.generating for v in missing):
            # no access can ever bring such a value
            return [], False
        return sorted(missing - candidate.skipped), False

    def _extend(self, candidate: Candidate) -> Iterator[Candidate]:
        if self.expired():
            return
        missing, done = self._missing(candidate)
        if done:
            key = (candidate.first, candidate.rest)
            if key not in self._seen:
                self._seen.add(key)
                yield candidate
            return
        if not missing:
            return
        value = missing[0]

        for support, minted in self._supports(value, candidate):
            self.stats.nodes += 1
            if support in candidate.facts or support in self.conf:
                continue
            if len(candidate.facts) + 1 > self.budget.max_facts:
                self.stats.cut(Cutoff.facts)
                continue
            if self.level is not None and candidate.added >= self.level:
                self.level_cut = True
                continue
            if self.blocking is not None and holds_through(
                self.blocking, self.conf.with_facts(candidate.facts | {support}), support
            ):
                continue
            root = candidate.depth.get(value, 0) == 0
            passive = not minted
            if self.budget.chain_heuristic and self.chain_limit:
                if (root and candidate.roots >= self.chain_limit) or (
                    passive and candidate.passive >= self.chain_limit
                ):
                    self.stats.cut(Cutoff.chains)
                    continue
            fresh_used, depth = self._mint(candidate, value, minted)
            if fresh_used is None:
                continue
            common = dict(
                fresh_used=fresh_used,
                depth=depth,
                skipped=candidate.skipped,
                roots=candidate.roots + root,
                passive=candidate.passive + passive,
                added=candidate.added + 1,
            )
            extended = Candidate(candidate.first, candidate.rest | {support}, **common)
            yield from self._extend(extended)
            if (
                self.first is not None
                and self.first.agrees(support, self.schema)
                and len(candidate.first) < self.budget.max_first_response
            ):
                yield from self._extend(
                    Candidate(candidate.first | {support}, candidate.rest, **common)
                )

        # The value may be carried by a fact of the candidate that is itself still blocked
        for fact in sorted(candidate.facts):
            positions = generating_positions(self.schema, fact.relation)
            if any(fact.values[p] == value for p in positions):
                yield from self._extend(
                    Candidate(
                        candidate.first,
                        candidate.rest,
                        dict(candidate.fresh_used),
                        dict(candidate.depth),
                        candidate.skipped | {value},
                        candidate.roots,
                        candidate.passive,
                        candidate.added,
                    )
                )
                break

    def _mint(
        self, candidate: Candidate, value: TypedValue, minted: Mapping[TypedValue, bool]
    ) -> tuple[dict[DomainName, int] | None, dict[TypedValue, int]]:
        fresh_used = dict(candidate.fresh_used)
        depth = dict(candidate.depth)
        level = depth.get(value, 0) + 1
        for v, needs_support in minted.items():
            fresh_used[v.domain] = fresh_used.get(v.domain, 0) + 1
            if fresh_used[v.domain] > self.budget.max_fresh:
                self.stats.cut(Cutoff.fresh)
                return None, depth
            if needs_support and level > self.budget.max_depth:
                self.stats.cut(Cutoff.depth)
                return None, depth
            depth[v] = level
        return fresh_used, depth

    def _supports(
        self, value: TypedValue, candidate: Candidate
    ) -> Iterator[tuple[Fact, dict[TypedValue, bool]]]:
        """
        Facts carrying `value` at a generating position. The other positions
        take values of the active domain or of the candidate, or new fresh
        values (which need support themselves at dependent inputs).

        :return: iterator of (fact, minted values) pairs, the minted values
            mapped to whether they sit at a dependent input
        """

        base = self.conf.with_facts(candidate.first)
        known = base.adom
        pool = sorted(set(known) | {v for f in candidate.facts for v in f.values})
        seen: set[Fact] = set()
        for relation in self.schema.relations:
            for m in self.schema.methods_on(relation.name):
                inputs = set(self.schema.input_positions(m.name)) if m.is_dependent else set()
                for p, attr in enumerate(relation.attributes):
                    if attr.domain != value.domain or p in inputs:
                        continue
                    choices: list[list[TypedValue | None]] = []
                    for q, other in enumerate(relation.attributes):
                        if q == p:
                            choices.append([value])
                            continue
                        options: list[TypedValue | None] = [
                            v for v in pool if v.domain == other.domain
                        ]
                        if q not in inputs or other.domain in self.generating:
                            options.append(None)  # a new fresh value
                        choices.append(options)
                    for combo in itertools.product(*choices):
                        used = dict(candidate.fresh_used)
                        values: list[TypedValue] = []
                        minted: dict[TypedValue, bool] = {}
                        for q, v in enumerate(combo):
                            if v is None:
                                domain = relation.attributes[q].domain
                                v = self.fresh(domain, used.get(domain, 0))
                                used[domain] = used.get(domain, 0) + 1
                                minted[v] = q in inputs
                            values.append(v)
                        fact = Fact(relation.name, tuple(values))
                        if fact not in seen:
                            seen.add(fact)
                            yield fact, minted
