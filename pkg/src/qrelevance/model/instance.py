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

"""Problem instances

A problem instance bundles a schema, a configuration, named queries and an
optional distinguished access. It is what the problem format describes and
what the reductions transform.
"""

from __future__ import annotations
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

from qrelevance.exceptions import QueryError

if TYPE_CHECKING:
    from collections.abc import Mapping
    from qrelevance.model.access import Access
    from qrelevance.model.configuration import Configuration
    from qrelevance.model.schema import Schema
    from qrelevance.query import Query, Variable


@dataclass(frozen=True)
class ProblemInstance:
    schema: Schema
    configuration: Configuration
    queries: Mapping[str, Query] = field(default_factory=dict)
    #: Head variables of the k-ary queries, Boolean queries have no entry
    heads: Mapping[str, tuple[Variable, ...]] = field(default_factory=dict)
    target: Access | None = None

    def query(self, name: str) -> Query:
        try:
            return self.queries[name]
        except KeyError:
            raise QueryError(f"Unknown query '{name}'") from None

    def head(self, name: str) -> tuple[Variable, ...]:
        self.query(name)
        return tuple(self.heads.get(name, ()))

    def boolean_query(self, name: str) -> Query:
        """Returns the query, rejecting queries declared with a head"""
        if self.head(name):
            raise QueryError(f"Query '{name}' is not Boolean")
        return self.query(name)

    def with_queries(
        self, queries: Mapping[str, Query], heads: Mapping[str, tuple[Variable, ...]] | None = None
    ) -> ProblemInstance:
        return replace(self, queries=dict(queries), heads=dict(heads or {}))
