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

"""Contains all the type alias/definitions used by the module

This module contains all definitions of the type aliases and the generic enums
used by qrelevance.
"""

from __future__ import annotations
from enum import IntEnum
from typing import TypeAlias, Protocol, TYPE_CHECKING

import enum_tools.documentation

if TYPE_CHECKING:
    from qrelevance.model import Configuration, Fact, Schema
    from qrelevance.query import Query
    from qrelevance.relevance import Verdict
    from qrelevance.witness import Budget

Token: TypeAlias = str
"""
Lexical token of a constant. Two constants are equal only if they share both
the token and the abstract domain.
"""

DomainName: TypeAlias = str  #: Name of an abstract domain

RelationName: TypeAlias = str  #: Name of a relation

MethodName: TypeAlias = str  #: Name of an access method

VariableName: TypeAlias = str  #: Name of a query variable

Response: TypeAlias = "frozenset[Fact]"
"""
The set of facts returned by an access. Every fact agrees with the binding on
the input attributes of the method.
"""

Position: TypeAlias = int  #: Zero-based attribute position inside a relation


@enum_tools.documentation.document_enum
class AccessMode(IntEnum):
    """
    Whether the binding of an access must come from the active domain of the
    current configuration
    """

    dependent = 0  # doc: binding values must already be known
    independent = 1  # doc: any value of the right domain may be used


@enum_tools.documentation.document_enum
class Outcome(IntEnum):
    """
    Three-valued outcome of every decision procedure
    """

    yes = 0  # doc: the property holds, a certificate is attached when one exists
    no = 1  # doc: the property does not hold
    unknown_within_budget = 2  # doc: the search ended on a budget cut-off


@enum_tools.documentation.document_enum
class SubgoalClass(IntEnum):
    """
    How a subgoal of a disjunct is witnessed by a path starting with the
    distinguished access
    """

    not_witnessed = 0  # doc: the subgoal belongs to another disjunct
    by_config = 1  # doc: mapped into the initial configuration
    by_first_access = 2  # doc: returned by the distinguished access
    by_further_access = 3  # doc: returned by a later access


@enum_tools.documentation.document_enum
class QueryLanguage(IntEnum):
    """
    Query fragment targeted by a reduction
    """

    pq = 0  # doc: positive queries (conjunctions and disjunctions)
    cq = 1  # doc: conjunctive queries


@enum_tools.documentation.document_enum
class Cutoff(IntEnum):
    """
    Budget limits that may interrupt a bounded search. A search that never hit
    any of them has explored its whole canonical space.
    """

    facts = 0  # doc: too many extra facts
    fresh = 1  # doc: too many fresh values in one domain
    depth = 2  # doc: support chain too deep
    first_response = 3  # doc: first response too large
    time = 4  # doc: time limit reached
    chains = 5  # doc: pruned by the chain heuristic
    shape = 6  # doc: access shape outside the exhaustive fragment


class ContainmentDecider(Protocol):
    """Callback type for the containment procedure used by the relevance-to-containment loop"""

    def __call__(
        self,
        schema: Schema,
        conf: Configuration,
        q1: Query,
        q2: Query,
        budget: Budget | None = None,
    ) -> Verdict:
        """
        Decide whether `q1` is contained in `q2` under the access limitations of `schema`
        starting from `conf`

        :param schema: schema with its access methods
        :param conf: initial configuration
        :param q1: contained query
        :param q2: containing query
        :param budget: search budget, derived from `q1` when missing
        :returns: a verdict whose `no` outcome carries a witness path
        """
        raise NotImplementedError()


@enum_tools.documentation.document_enum
class DiagnosticKind(IntEnum):
    """
    Kind of problem reported by the query validator
    """

    relation = 0  # doc: the atom uses an undeclared relation
    arity = 1  # doc: wrong number of terms
    domain = 2  # doc: a variable or constant is used at positions of different domains
    constant = 3  # doc: a constant is not admitted in the configuration
