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

"""Brute-force oracles

Literal unfolding of the definitions over a bounded universe: the active
domain, the constants of the queries and a small pool of fresh values per
domain. The oracles only use the data model and query evaluation so that
they can be compared against the decision procedures.
"""

from __future__ import annotations
import logging
from collections import deque
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import TYPE_CHECKING

from qrelevance.exceptions import BudgetError, OracleLimitExceeded
from qrelevance.model import Configuration, Fact, FreshValues
from qrelevance.query import Constant, constants, holds, substitute, variable_domains
from qrelevance.utils import log_once

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator
    from qrelevance.model import Access, AccessMethod, Schema, TypedValue
    from qrelevance.query import Query, Variable
    from qrelevance.types import DomainName, Position, RelationName

Universe = dict["DomainName", list["TypedValue"]]


@dataclass(frozen=True)
class OracleLimits:
    """
    Bounds of the brute-force oracles.

    .. warning::
        The explored space is exponential in every field. Anything beyond a
        handful of facts and two or three fresh values does not terminate in
        practice; `max_states` turns such runs into an explicit failure.
    """

    max_path_length: int = 3  #: Accesses of a path (facts added for reachability)
    max_fresh: int = 1  #: Fresh values per domain
    max_response_size: int = 2  #: Facts of the response to the distinguished access
    max_extension_facts: int = 2  #: Facts added to the configuration by the certainty oracle
    max_states: int = 200_000

    def validate(self) -> OracleLimits:
        """
        :raises BudgetError: if a limit is negative
        """

        fields = (self.max_path_length, self.max_fresh, self.max_response_size)
        if min(fields) < 0 or self.max_extension_facts < 0 or self.max_states < 1:
            raise BudgetError("Oracle limits must be non-negative")
        if self.max_fresh > 3 or self.max_path_length > 5:
            log_once(logging.WARNING, "[!] Large oracle limits, the search may never end")
        return self


class _Counter:
    def __init__(self, limits: OracleLimits):
        self.limit = limits.max_states
        self.states = 0

    def tick(self) -> None:
        self.states += 1
        if self.states > self.limit:
            raise OracleLimitExceeded(f"More than {self.limit} oracle states")


def _pool(schema: Schema, avoid: Iterable[TypedValue], limits: OracleLimits) -> Universe:
    fresh = FreshValues(avoid, prefix="o")
    return {d: [fresh(d, i) for i in range(limits.max_fresh)] for d in schema.domains}


def _universe(base: Iterable[TypedValue], pool: Universe, facts: Iterable[Fact]) -> Universe:
    """Base values, the fresh values already used and the next unused one"""
    used = {v for f in facts for v in f.values}
    base = set(base)
    universe = {}
    for domain, fresh in pool.items():
        values = sorted(v for v in base if v.domain == domain)
        values += [v for v in fresh if v in used]
        values += [v for v in fresh if v not in used][:1]
        universe[domain] = values
    return universe


def _full_universe(base: Iterable[TypedValue], pool: Universe) -> Universe:
    base = set(base)
    return {d: sorted(v for v in base if v.domain == d) + fresh for d, fresh in pool.items()}


def _facts(
    schema: Schema,
    relation: RelationName,
    universe: Universe,
    fixed: dict[Position, TypedValue] | None = None,
) -> Iterator[Fact]:
    fixed = fixed or {}
    choices = [
        [fixed[p]] if p in fixed else universe[a.domain]
        for p, a in enumerate(schema.relation(relation).attributes)
    ]
    for values in product(*choices):
        yield Fact(relation, tuple(values))


def _available(
    schema: Schema, method: AccessMethod, fact: Fact, adom: frozenset[TypedValue]
) -> bool:
    """Whether the access on `method` returning `fact` is well-formed for this active domain"""
    if not method.is_dependent:
        return True
    return all(fact.values[p] in adom for p in schema.input_positions(method.name))


def _moves(
    schema: Schema, conf: Configuration, universe: Universe
) -> Iterator[tuple[AccessMethod, Fact]]:
    """Every well-formed access with a singleton response over the universe"""
    for method in schema.methods:
        for fact in _facts(schema, method.relation, universe):
            if _available(schema, method, fact, conf.adom):
                yield method, fact


def _canonical(facts: Iterable[Fact], pool: Universe) -> frozenset[Fact]:
    """Smallest renaming of the fresh values, compared as sorted fact tuples"""
    facts = list(facts)
    groups = [pool[d] for d in sorted(pool) if pool[d]]
    best: tuple[Fact, ...] | None = None
    for images in product(*(permutations(g) for g in groups)):
        renaming = {v: w for group, image in zip(groups, images) for v, w in zip(group, image)}
        key = tuple(
            sorted(Fact(f.relation, tuple(renaming.get(v, v) for v in f.values)) for f in facts)
        )
        if best is None or key < best:
            best = key
    return frozenset(best if best is not None else facts)


def oracle_reachable(
    schema: Schema,
    conf: Configuration,
    limits: OracleLimits | None = None,
    extra: Iterable[TypedValue] = (),
) -> set[Configuration]:
    """
    Configurations reachable from `conf` with at most `max_path_length`
    accesses. Every access returns one fact over the active domain, the
    `extra` values and the fresh pool. Configurations are deduplicated up to
    a renaming of the fresh values.

    :param schema: the schema
    :param conf: the starting configuration
    :param limits: the oracle limits
    :param extra: additional values independent accesses may use (query constants)
    :return: the reachable configurations, `conf` included
    :raises OracleLimitExceeded: beyond `max_states` configurations
    """

    limits = (limits or OracleLimits()).validate()
    counter = _Counter(limits)
    base = conf.adom | set(extra)
    pool = _pool(schema, base, limits)
    seen = {_canonical(conf.facts, pool)}
    reached = {conf}
    queue = deque([(conf, 0)])
    while queue:
        current, depth = queue.popleft()
        if depth == limits.max_path_length:
            continue
        for _, fact in _moves(schema, current, _universe(base, pool, current.facts)):
            if fact in current:
                continue
            following = current.with_facts([fact])
            key = _canonical(following.facts, pool)
            if key in seen:
                continue
            counter.tick()
            seen.add(key)
            reached.add(following)
            queue.append((following, depth + 1))
    logging.debug(f"[+] {len(reached)} reachable configuration(s)")
    return reached


def oracle_containment(
    schema: Schema,
    conf: Configuration,
    q1: Query,
    q2: Query,
    limits: OracleLimits | None = None,
) -> bool:
    """True if no reachable configuration satisfies `q1` and violates `q2`"""
    extra = constants(q1) | constants(q2)
    return not any(
        holds(q1, c) and not holds(q2, c) for c in oracle_reachable(schema, conf, limits, extra)
    )


def _answers(
    schema: Schema, q: Query, head: tuple[Variable, ...], conf: Configuration
) -> set[tuple[TypedValue, ...]]:
    """Answers of a k-ary query over the active domain"""
    domains = variable_domains(q, schema)
    values = conf.adom | constants(q)
    choices = [sorted(v for v in values if v.domain == domains[x.name]) for x in head]
    return {
        answer
        for answer in product(*choices)
        if holds(substitute(q, {x.name: Constant(v) for x, v in zip(head, answer)}), conf)
    }


def oracle_ir(
    schema: Schema,
    conf: Configuration,
    q: Query,
    access: Access,
    limits: OracleLimits | None = None,
    head: tuple[Variable, ...] = (),
) -> bool:
    """
    True if some response of at most `max_response_size` facts changes the
    certain answers of the query. Boolean queries must go from false to true.

    :param head: head variables of a k-ary query
    """

    limits = (limits or OracleLimits()).validate()
    counter = _Counter(limits)
    relation = schema.method(access.method).relation
    base = conf.adom | set(access.binding) | constants(q)
    universe = _full_universe(base, _pool(schema, base, limits))
    candidates = [
        f for f in _facts(schema, relation, universe, access.pattern(schema)) if f not in conf
    ]
    before = _answers(schema, q, head, conf)
    for size in range(1, limits.max_response_size + 1):
        for response in combinations(candidates, size):
            counter.tick()
            if _answers(schema, q, head, conf.with_facts(response)) != before:
                return True
    return False


def oracle_ltr(
    schema: Schema,
    conf: Configuration,
    q: Query,
    access: Access,
    limits: OracleLimits | None = None,
) -> bool:
    """
    True if some path starting with `access` makes the query true while its
    truncation leaves it false. The first response has at most
    `max_response_size` facts, later responses are single facts, or empty
    when the empty response is what ends the truncation.

    :return: whether the access is long-term relevant within the limits
    """

    limits = (limits or OracleLimits()).validate()
    counter = _Counter(limits)
    first = schema.method(access.method)
    if first.is_dependent and not set(access.binding) <= conf.adom:
        return False
    if holds(q, conf):
        return False

    base = conf.adom | set(access.binding) | constants(q)
    pool = _pool(schema, base, limits)
    visited: dict[tuple[frozenset[Fact], frozenset[Fact], bool], int] = {}

    def explore(full: Configuration, trunc: Configuration, alive: bool, left: int) -> bool:
        key = (full.facts, trunc.facts, alive)
        if visited.get(key, -1) >= left:
            return False
        visited[key] = left
        counter.tick()
        if holds(q, full) and not holds(q, trunc):
            return True
        if left == 0:
            return False
        cut = False
        for method, fact in _moves(schema, full, _universe(base, pool, full.facts)):
            kept = alive and _available(schema, method, fact, trunc.adom)
            cut = cut or (alive and not kept)
            following = trunc.with_facts([fact]) if kept else trunc
            if explore(full.with_facts([fact]), following, kept, left - 1):
                return True
        return cut and explore(full, trunc, False, left - 1)

    universe = _full_universe(base, pool)
    candidates = list(_facts(schema, first.relation, universe, access.pattern(schema)))
    for size in range(limits.max_response_size + 1):
        for response in combinations(candidates, size):
            if explore(conf.with_facts(response), conf, True, limits.max_path_length - 1):
                return True
    return False


def oracle_certain(
    schema: Schema,
    conf: Configuration,
    q: Query,
    limits: OracleLimits | None = None,
) -> bool:
    """
    True if the query holds on every extension of the configuration by at
    most `max_extension_facts` facts over the bounded universe
    """

    limits = (limits or OracleLimits()).validate()
    counter = _Counter(limits)
    base = conf.adom | constants(q)
    universe = _full_universe(base, _pool(schema, base, limits))
    candidates = [
        f for rel in schema.relations for f in _facts(schema, rel.name, universe) if f not in conf
    ]
    for size in range(limits.max_extension_facts + 1):
        for extension in combinations(candidates, size):
            counter.tick()
            if not holds(q, conf.with_facts(extension)):
                return False
    return True
