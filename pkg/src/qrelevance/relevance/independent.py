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

"""Long-term relevance with independent accesses

With independent access methods every access of a path stays well-formed
after truncation, so a path is a witness exactly when the facts returned by
the later accesses do not make the query true on their own. The procedure
guesses, for one disjunct, which subgoals are matched in the configuration,
which ones are returned by the distinguished access and which ones by later
accesses.
"""

from __future__ import annotations
import itertools
import logging
from typing import TYPE_CHECKING

from qrelevance.exceptions import UnsupportedFeatureException
from qrelevance.model import FreshValues, Path, Step, access_for, check_access, producing_method
from qrelevance.query import HomomorphismSearch, constants, dnf, holds, variable_domains
from qrelevance.relevance.unify import unify_all
from qrelevance.relevance.verdict import GuessCertificate, SearchStats, SubgoalGuess, Verdict
from qrelevance.types import SubgoalClass
from qrelevance.utils import is_debug

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping
    from qrelevance.model import Access, Configuration, Fact, Schema, TypedValue
    from qrelevance.query import Atom, Query
    from qrelevance.types import DomainName, VariableName

WITNESS_CLASSES = (
    SubgoalClass.by_config,
    SubgoalClass.by_first_access,
    SubgoalClass.by_further_access,
)


def iter_guesses(
    q: Query, access: Access, schema: Schema
) -> Iterator[tuple[SubgoalGuess, dict[VariableName, TypedValue]]]:
    """
    Valid subgoal guesses in lexicographic order, with the unifier of the
    subgoals witnessed by the distinguished access. A guess is valid if at
    least one subgoal is returned by the distinguished access, all those
    subgoals unify with the binding and every subgoal left to later accesses
    is on a relation that has an access method.

    :param q: the query
    :param access: the distinguished access
    :param schema: the schema
    :return: iterator of (guess, unifier) pairs
    """

    for disjunct in dnf(q):
        for classes in itertools.product(WITNESS_CLASSES, repeat=len(disjunct)):
            guess = SubgoalGuess(disjunct, classes)
            first = guess.of(SubgoalClass.by_first_access)
            if not first:
                continue
            further = guess.of(SubgoalClass.by_further_access)
            if any(not schema.has_method(a.relation) for a in further):
                continue
            sigma = unify_all(first, access, schema)
            if sigma is not None:
                yield guess, sigma


def materialize(
    subgoals: Iterable[Atom],
    assignment: Mapping[VariableName, TypedValue],
    domains: Mapping[VariableName, DomainName],
    fresh: FreshValues,
) -> tuple[dict[VariableName, TypedValue], list[Fact]]:
    """
    Ground subgoals, giving every variable not covered by `assignment` its own
    fresh value

    :return: the completed assignment and the ground facts, in subgoal order
    """

    full = dict(assignment)
    counters: dict[DomainName, int] = {}
    for atom in subgoals:
        for v in atom.variables():
            if v not in full:
                index = counters.get(domains[v], 0)
                counters[domains[v]] = index + 1
                full[v] = fresh(domains[v], index)
    return full, list(dict.fromkeys(a.ground(full) for a in subgoals))


def further_steps(facts: Iterable[Fact], schema: Schema) -> list[Step]:
    """One singleton access per fact, on its preferred method"""
    steps = []
    for fact in facts:
        method = producing_method(fact.relation, schema)
        assert method is not None
        steps.append(Step(access_for(fact, method, schema), frozenset([fact])))
    return steps


def decide_ltr_independent(
    schema: Schema, conf: Configuration, q: Query, access: Access
) -> Verdict:
    """
    Decide long-term relevance when every access method is independent.

    For a valid guess, every homomorphism of the configuration subgoals into
    the configuration (compatible with the binding) is tried. The other
    subgoals are grounded with distinct fresh values and the guess succeeds
    when the query is false on the configuration extended with the facts
    left to later accesses: those accesses survive the truncation, the
    distinguished one does not.

    :param schema: the schema, with independent methods only
    :param conf: the configuration
    :param q: the query
    :param access: the distinguished access
    :return: a verdict, `yes` carrying a :py:class:`GuessCertificate`
    :raises UnsupportedFeatureException: if a dependent method is declared
    """

    if not schema.all_independent:
        raise UnsupportedFeatureException(
            "Exact long-term relevance needs independent access methods only"
        )
    check_access(access, schema)
    stats = SearchStats()
    if holds(q, conf):
        return Verdict.no(stats)

    domains = variable_domains(q, schema)
    fresh = FreshValues(conf.adom | set(access.binding) | constants(q))
    search = HomomorphismSearch(conf.index)

    for guess, sigma in iter_guesses(q, access, schema):
        first = guess.of(SubgoalClass.by_first_access)
        further = guess.of(SubgoalClass.by_further_access)
        for h in search.all(guess.of(SubgoalClass.by_config), sigma):
            stats.nodes += 1
            full, _ = materialize(first + further, h, domains, fresh)
            response = frozenset(a.ground(full) for a in first) - conf.facts
            later = [f for f in (a.ground(full) for a in further) if f not in conf]
            if holds(q, conf.with_facts(later)):
                continue
            if is_debug():
                logging.debug(f"Witnessing guess: {guess.classes}")
            path = Path(conf, (Step(access, response), *further_steps(later, schema)))
            return Verdict.yes(GuessCertificate(guess, path), stats)
    return Verdict.no(stats)
