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

"""Query evaluation, certain answers and classical containment"""

from __future__ import annotations
import logging
from typing import TYPE_CHECKING

from qrelevance.exceptions import QueryError
from qrelevance.model import Configuration, Fact, FactIndex, TypedValue
from qrelevance.query.homomorphism import Homomorphism, HomomorphismSearch
from qrelevance.query.query import And, Atom, Constant, Or, dnf

if TYPE_CHECKING:
    from collections.abc import Iterable
    from qrelevance.query.query import Query
    from qrelevance.types import VariableName


def _as_index(target: Configuration | FactIndex | Iterable[Fact]) -> FactIndex:
    if isinstance(target, Configuration):
        return target.index
    if isinstance(target, FactIndex):
        return target
    return FactIndex(target)


def evaluate(q: Query, target: Configuration | FactIndex | Iterable[Fact]) -> Homomorphism | None:
    """
    Evaluate a Boolean positive query. The DNF disjuncts are tried in order
    and the first homomorphism found is returned as the witness.

    :param q: the query
    :param target: configuration, fact index or plain fact set
    :return: a homomorphism of some disjunct into the facts, None if the query is false
    """

    index = _as_index(target)
    search = HomomorphismSearch(index)
    for disjunct in dnf(q):
        assignment = search.find(disjunct)
        if assignment is not None:
            logging.debug(f"Query satisfied after {search.nodes} node(s)")
            return Homomorphism(assignment, disjunct)
    return None


def holds(q: Query, target: Configuration | FactIndex | Iterable[Fact]) -> bool:
    return evaluate(q, target) is not None


def _seed(atom: Atom, fact: Fact) -> dict[VariableName, TypedValue] | None:
    if atom.relation != fact.relation or len(atom.terms) != len(fact.values):
        return None
    seed: dict[VariableName, TypedValue] = {}
    for t, v in zip(atom.terms, fact.values):
        if isinstance(t, Constant):
            if t.value != v:
                return None
        elif seed.setdefault(t.name, v) != v:
            return None
    return seed


def holds_through(
    q: Query, target: Configuration | FactIndex | Iterable[Fact], fact: Fact
) -> bool:
    """
    Whether some homomorphism of the query into the target maps an atom onto
    `fact`. When the query is false on the target without `fact`, this is
    the same as :py:func:`holds` on the target, at the cost of searches
    seeded by the new fact only.

    :param q: the query
    :param target: configuration, fact index or plain fact set, `fact` included
    :param fact: the fact every homomorphism must use
    :return: True if such a homomorphism exists
    """

    search = HomomorphismSearch(_as_index(target))
    for disjunct in dnf(q):
        for atom in dict.fromkeys(disjunct):
            seed = _seed(atom, fact)
            if seed is not None and search.find(disjunct, seed) is not None:
                return True
    return False


def _check_positive(q: object) -> None:
    if isinstance(q, Atom):
        return
    if not isinstance(q, (And, Or)):
        raise QueryError(f"Not a positive query: {q!r}")
    for c in q.children:
        _check_positive(c)


def certain(q: Query, conf: Configuration) -> bool:
    """
    Certain answer of a Boolean positive query. The configuration is itself
    an instance consistent with what is known and positive queries are
    monotone, so the query is certain exactly when it holds on the
    configuration.

    :param q: the query
    :param conf: the configuration
    :return: True if the query holds in every consistent instance
    :raises QueryError: on a non-positive query
    """

    _check_positive(q)
    return holds(q, conf)


def freeze(disjunct: Iterable[Atom]) -> frozenset[Fact]:
    """
    Canonical database of a conjunction: every variable becomes a frozen
    constant ``?name`` that cannot clash with a real token
    """

    return frozenset(
        Fact(
            a.relation,
            tuple(
                t.value if isinstance(t, Constant) else TypedValue(f"?{t.name}", "")
                for t in a.terms
            ),
        )
        for a in disjunct
    )


def classical_contains(q1: Query, q2: Query) -> bool:
    """
    Containment without access limitations: every DNF disjunct of `q1` must
    be the target of a homomorphism from some DNF disjunct of `q2`.

    :param q1: the contained query
    :param q2: the containing query
    :return: True if q1 implies q2 on every instance
    """

    targets = dnf(q2)
    for disjunct in dnf(q1):
        search = HomomorphismSearch(FactIndex(freeze(disjunct)))
        if not any(search.find(d) is not None for d in targets):
            return False
    return True
