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

"""Bounded long-term relevance with dependent accesses

A witness path starts with the distinguished access and makes the query
true, while its truncation (the path without its first access, cut at the
first access that is no longer well-formed) leaves it false. Candidates are
built from a mapping of a disjunct: the facts returned by the distinguished
access, the facts fetched afterwards with their supports, and a prefix of the
latter that survives the truncation. The truncation stops right after that
prefix, either because the next access needs a value only the distinguished
access provided or because an access with an empty response is inserted
there.
"""

from __future__ import annotations
import logging
from typing import TYPE_CHECKING

from qrelevance.model import Access, Fact, FreshValues, Path, Step, is_well_formed
from qrelevance.query import atoms, constants, dnf, holds, variable_domains
from qrelevance.relevance import SearchStats, Verdict, check_ltr_certificate
from qrelevance.types import Cutoff
from qrelevance.utils import powerset
from qrelevance.witness.budget import Budget
from qrelevance.witness.containment import canonical_mappings
from qrelevance.witness.support import Candidate, SupportSearch, producible_closure

if TYPE_CHECKING:
    from collections.abc import Iterator
    from qrelevance.model import Configuration, Schema, TypedValue
    from qrelevance.query import Query
    from qrelevance.types import DomainName


def breaker(schema: Schema, full: Configuration, truncated: Configuration) -> Access | None:
    """
    A dependent access well-formed in `full` but not in `truncated`. It is
    performed with an empty response to end the truncation.

    :param schema: the schema
    :param full: configuration reached by the path
    :param truncated: configuration reached by its truncation
    :return: the first such access in declaration order, None if none exists
    """

    for m in schema.methods:
        if not m.is_dependent or not m.inputs:
            continue
        relation = schema.relation(m.relation)
        positions = schema.input_positions(m.name)
        for i, p in enumerate(positions):
            domain = relation.attributes[p].domain
            new = [v for v in full.adom_of(domain) if v not in truncated.adom]
            if not new:
                continue
            binding: list[TypedValue] = []
            for j, other in enumerate(positions):
                if j == i:
                    binding.append(new[0])
                    continue
                values = full.adom_of(relation.attributes[other].domain)
                if not values:
                    break
                binding.append(values[0])
            else:
                return Access(m.name, tuple(binding))
    return None


def canonical_first_fact(
    schema: Schema, access: Access, fresh: FreshValues, used: dict[DomainName, int]
) -> Fact:
    """Fact agreeing with the binding whose output attributes take new fresh values"""
    relation = schema.relation(schema.method(access.method).relation)
    pattern = access.pattern(schema)
    used = dict(used)
    values: list[TypedValue] = []
    for p, attr in enumerate(relation.attributes):
        if p in pattern:
            values.append(pattern[p])
        else:
            values.append(fresh(attr.domain, used.get(attr.domain, 0)))
            used[attr.domain] = used.get(attr.domain, 0) + 1
    return Fact(relation.name, tuple(values))


def witness_path(
    schema: Schema,
    conf: Configuration,
    q: Query,
    access: Access,
    first: frozenset[Fact],
    rest: frozenset[Fact],
) -> Path | None:
    """
    Order a candidate into a witness path, trying the surviving prefixes by
    increasing size

    :return: the path, None if no prefix gives a witness
    """

    full_base = conf.with_facts(first)
    for prefix in powerset(sorted(rest)):
        kept = frozenset(prefix)
        head = producible_closure(conf, schema, kept)
        if head is None:
            continue
        truncated = conf.with_facts(kept)
        if holds(q, truncated):
            continue
        tail = producible_closure(full_base.with_facts(kept), schema, rest - kept)
        assert tail is not None
        steps = [Step(access, first), *head.steps]
        if tail.steps and not is_well_formed(tail.steps[0].access, truncated, schema):
            steps.extend(tail.steps)
        elif kept == rest:
            steps.extend(tail.steps)
        else:
            cut = breaker(schema, full_base.with_facts(kept), truncated)
            if cut is None:
                continue
            steps.append(Step(cut))
            steps.extend(tail.steps)
        return Path(conf, tuple(steps))
    return None


def decide_ltr_dependent_bounded(
    schema: Schema,
    conf: Configuration,
    q: Query,
    access: Access,
    budget: Budget | None = None,
) -> Verdict:
    """
    Search a long-term relevance witness for any mix of dependent and
    independent methods.

    The outcome is `yes` with the witnessing path, `no` when the canonical
    space was exhausted without budget cut-off, `unknown_within_budget`
    otherwise. Accesses with output attributes make the first response
    unbounded in shape, so their search is never reported as exhaustive.

    :param schema: the schema
    :param conf: the starting configuration
    :param q: the query
    :param access: the distinguished access
    :param budget: the search budget, derived from `q` when missing
    :return: the verdict
    :raises BudgetError: on a negative budget
    """

    budget = (budget or Budget.for_query(q)).validate()
    stats = SearchStats()
    if holds(q, conf):
        return Verdict.no(stats)
    if not is_well_formed(access, conf, schema):
        logging.debug(f"{access.describe(schema)} is not well-formed")
        return Verdict.no(stats)
    boolean = schema.is_boolean(access.method)
    if not boolean:
        stats.cut(Cutoff.shape)

    domains = variable_domains(q, schema)
    fresh = FreshValues(conf.adom | set(access.binding) | constants(q))
    support = SupportSearch(
        schema,
        conf,
        budget,
        stats,
        fresh,
        first=access,
        chain_limit=len(atoms(q)),
        deadline=budget.deadline(),
    )

    def candidates(needed: frozenset[Fact], used: dict[DomainName, int]) -> Iterator[Candidate]:
        agreeing = sorted(f for f in needed if access.agrees(f, schema))
        extra = canonical_first_fact(schema, access, fresh, used)
        more = dict(used)
        for v in set(extra.values) - set(access.binding):
            more[v.domain] = more.get(v.domain, 0) + 1
        for chosen in powerset(agreeing, max_size=budget.max_first_response):
            first = frozenset(chosen)
            yield Candidate(first, needed - first, dict(used))
            # A first response that only brings new values can still end the truncation
            if len(first) >= budget.max_first_response or extra in first or extra in conf:
                continue
            if all(n <= budget.max_fresh for n in more.values()):
                yield Candidate(first | {extra}, needed - first, dict(more))
            else:
                stats.cut(Cutoff.fresh)

    for disjunct in dnf(q):
        mappings = canonical_mappings(
            schema, conf, disjunct, domains, fresh, budget, stats, extra=access.binding
        )
        for h, used in mappings:
            if support.expired():
                return Verdict.unknown(stats)
            stats.nodes += 1
            needed = frozenset(a.ground(h) for a in disjunct) - conf.facts
            if len(needed) > budget.max_facts:
                stats.cut(Cutoff.facts)
                continue
            for start in candidates(needed, used):
                for found in support.completions(start):
                    if not found.first:
                        continue
                    path = witness_path(schema, conf, q, access, found.first, found.rest)
                    if path is None:
                        continue
                    assert check_ltr_certificate(schema, conf, q, access, path)
                    return Verdict.yes(path, stats)

    if stats.exhaustive:
        return Verdict.no(stats)
    return Verdict.unknown(stats)
