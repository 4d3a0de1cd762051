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

"""From k-ary to Boolean immediate relevance

An access is immediately relevant for a query with a head when some response
makes a new tuple a certain answer. The tuples to consider are over the
active domain, the binding of the access and as many fresh constants as
the head has positions, so the question splits into one Boolean question
per candidate tuple.
"""

from __future__ import annotations
import logging
from dataclasses import replace
from typing import TYPE_CHECKING

from qrelevance.exceptions import QueryError
from qrelevance.model import FreshValues
from qrelevance.query import Constant, constants, substitute, variable_domains

if TYPE_CHECKING:
    from collections.abc import Iterator
    from qrelevance.model import ProblemInstance, TypedValue
    from qrelevance.types import DomainName


def _head_tuples(
    domains: list[DomainName], pools: dict[DomainName, list[TypedValue]], fresh: FreshValues
) -> Iterator[tuple[TypedValue, ...]]:
    # fresh constant i of a domain only after the ones of lower index
    def extend(i: int, prefix: tuple[TypedValue, ...], used: dict[DomainName, int]):
        if i == len(domains):
            yield prefix
            return
        d = domains[i]
        n = used.get(d, 0)
        for v in pools[d] + [fresh(d, j) for j in range(n)]:
            yield from extend(i + 1, prefix + (v,), used)
        yield from extend(i + 1, prefix + (fresh(d, n),), {**used, d: n + 1})

    yield from extend(0, (), {})


def boolean_arity_reduction(inst: ProblemInstance, name: str = "Q") -> list[ProblemInstance]:
    """
    One Boolean instance per candidate answer tuple of a k-ary query. The head
    variables are replaced by the tuple, the fresh constants of the tuple are
    admitted in the configuration and the head is dropped. The original
    access is relevant iff it is relevant for one of the produced instances.

    :param inst: instance holding the query
    :param name: name of the k-ary query
    :return: the Boolean instances, `[inst]` when the query is already Boolean
    :raises QueryError: if a head variable does not occur in the query
    """

    head = inst.head(name)
    if not head:
        return [inst]
    q = inst.query(name)
    domains = variable_domains(q, inst.schema)
    missing = [v.name for v in head if v.name not in domains]
    if missing:
        raise QueryError(f"Head variable(s) {', '.join(missing)} do not occur in {name}")

    conf = inst.configuration
    head_domains = [domains[v.name] for v in head]
    pools = {d: conf.adom_of(d) for d in head_domains}
    access = inst.target
    bound = set(access.binding) if access is not None else set()
    # a response brings the binding into the active domain
    for v in sorted(bound - conf.adom):
        if v.domain in pools:
            pools[v.domain].append(v)
    fresh = FreshValues(conf.adom | constants(q) | bound, prefix="c")
    heads = {k: v for k, v in inst.heads.items() if k != name}

    result = []
    for values in _head_tuples(head_domains, pools, fresh):
        mapping = {v.name: Constant(t) for v, t in zip(head, values)}
        new = [t for t in values if t not in conf.adom]
        result.append(
            replace(
                inst,
                configuration=conf.with_constants(new),
                queries={**inst.queries, name: substitute(q, mapping)},
                heads=heads,
            )
        )
    logging.debug(f"{name}: {len(result)} Boolean instance(s) for a head of size {len(head)}")
    return result
