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

"""Bounded containment under access limitations

A query `q1` is contained in `q2` from a configuration when every
configuration reachable through well-formed accesses that satisfies `q1`
also satisfies `q2`. Non-containment is searched for: a disjunct of `q1` is
mapped over the active domain and canonical fresh values, the missing facts
are completed with tree-like support chains, and candidates on which `q2`
becomes true are discarded.
"""

from __future__ import annotations
import logging
from typing import TYPE_CHECKING

from qrelevance.model import FreshValues, Path
from qrelevance.query import HomomorphismSearch, constants, dnf, holds, variable_domains
from qrelevance.relevance import SearchStats, Verdict, check_containment_certificate
from qrelevance.types import Cutoff
from qrelevance.witness.budget import Budget
from qrelevance.witness.support import (
    Candidate,
    SupportSearch,
    generating_domains,
    producible_closure,
)

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping
    from qrelevance.model import Configuration, Schema, TypedValue
    from qrelevance.query import Atom, Query
    from qrelevance.types import DomainName, VariableName


def canonical_mappings(
    schema: Schema,
    conf: Configuration,
    disjunct: tuple[Atom, ...],
    domains: Mapping[VariableName, DomainName],
    fresh: FreshValues,
    budget: Budget,
    stats: SearchStats,
    extra: Iterable[TypedValue] = (),
) -> Iterator[tuple[dict[VariableName, TypedValue], dict[DomainName, int]]]:
    """
    Mappings of a disjunct over the active domain (plus `extra` values) and
    canonical fresh values: the fresh value of index i of a domain is used only
    once the ones of lower index are. Subgoals on relations without access
    method are mapped into the configuration, and variables of a domain no
    access can extend only take known values.

    :return: iterator over (assignment, number of fresh values used per domain)
    """

    fixed = [a for a in disjunct if not schema.has_method(a.relation)]
    order = list(dict.fromkeys(v for a in disjunct for v in a.variables()))
    extra = set(extra)
    generating = generating_domains(schema)
    pools: dict[DomainName, list[TypedValue]] = {}

    def pool(domain: DomainName) -> list[TypedValue]:
        if domain not in pools:
            values = set(conf.adom_of(domain)) | {v for v in extra if v.domain == domain}
            pools[domain] = sorted(values)
        return pools[domain]

    def assign(
        remaining: list[VariableName],
        h: dict[VariableName, TypedValue],
        used: dict[DomainName, int],
    ) -> Iterator[tuple[dict[VariableName, TypedValue], dict[DomainName, int]]]:
        if not remaining:
            yield dict(h), dict(used)
            return
        v, rest = remaining[0], remaining[1:]
        domain = domains[v]
        n = used.get(domain, 0)
        for value in pool(domain) + [fresh(domain, i) for i in range(n)]:
            yield from assign(rest, {**h, v: value}, used)
        if domain not in generating:
            return
        if n < budget.max_fresh:
            yield from assign(rest, {**h, v: fresh(domain, n)}, {**used, domain: n + 1})
        else:
            stats.cut(Cutoff.fresh)

    for h0 in HomomorphismSearch(conf.index).all(fixed):
        yield from assign([v for v in order if v not in h0], h0, {})


def decide_containment_bounded(
    schema: Schema,
    conf: Configuration,
    q1: Query,
    q2: Query,
    budget: Budget | None = None,
) -> Verdict:
    """
    Search a reachable configuration where `q1` holds and `q2` does not.

    The outcome is `no` (not contained) with the witnessing path when one is
    found, `yes` when the search ended without any budget cut-off (the
    canonical space is exhausted) and `unknown_within_budget` otherwise.

    :param schema: the schema
    :param conf: the starting configuration
    :param q1: the contained query
    :param q2: the containing query
    :param budget: the search budget, derived from `q1` when missing
    :return: the verdict
    :raises BudgetError: on a negative budget
    """

    budget = (budget or Budget.for_query(q1)).validate()
    stats = SearchStats()
    if holds(q1, conf) and not holds(q2, conf):
        return Verdict.no(stats, Path(conf))

    fresh = FreshValues(conf.adom | constants(q1) | constants(q2))
    support = SupportSearch(
        schema, conf, budget, stats, fresh, blocking=q2, deadline=budget.deadline()
    )
    domains = variable_domains(q1, schema)

    def witness(start: Candidate) -> Path | None:
        support.level_cut = False
        for found in support.completions(start):
            plan = producible_closure(conf, schema, found.rest)
            assert plan is not None
            path = plan.path(conf)
            assert check_containment_certificate(schema, conf, q1, q2, path)
            logging.debug(f"Non-containment witness with {len(found.rest)} fact(s)")
            return path
        if support.level_cut:
            deferred.append(start)
        return None

    # Iterative deepening on the number of support facts: the mappings are
    # first tried without support, and only those stopped by the level are
    # searched again one level deeper
    deferred: list[Candidate] = []
    support.level = 0
    for disjunct in dnf(q1):
        for h, used in canonical_mappings(schema, conf, disjunct, domains, fresh, budget, stats):
            if support.expired():
                return Verdict.unknown(stats)
            stats.nodes += 1
            needed = frozenset(a.ground(h) for a in disjunct) - conf.facts
            if len(needed) > budget.max_facts:
                stats.cut(Cutoff.facts)
                continue
            if holds(q2, conf.with_facts(needed)):
                continue
            if (path := witness(Candidate(frozenset(), needed, used))) is not None:
                return Verdict.no(stats, path)

    while deferred:
        support.level += 1
        logging.debug(f"{len(deferred)} candidate(s) searched with {support.level} support(s)")
        pending, deferred = deferred, []
        for start in pending:
            if support.expired():
                return Verdict.unknown(stats)
            if (path := witness(start)) is not None:
                return Verdict.no(stats, path)

    if stats.exhaustive:
        return Verdict.yes(None, stats)
    return Verdict.unknown(stats)
