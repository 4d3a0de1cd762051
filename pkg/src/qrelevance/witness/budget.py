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

"""Search budgets"""

from __future__ import annotations
from dataclasses import asdict, dataclass, replace
from time import perf_counter
from typing import Any, TYPE_CHECKING

from qrelevance.exceptions import BudgetError
from qrelevance.query import atoms, variables

if TYPE_CHECKING:
    from qrelevance.query import Query


@dataclass(frozen=True)
class Budget:
    """
    Limits of the bounded witness searches. A search that never reaches any
    of these limits has explored its whole canonical space.
    """

    max_facts: int  #: Extra facts of a candidate witness (needed facts and supports)
    max_fresh: int  #: Fresh values per domain
    max_depth: int  #: Length of a chain of fresh values supporting each other
    max_first_response: int  #: Facts returned by the distinguished access
    time_limit_ms: int | None = None
    chain_heuristic: bool = False
    deterministic: bool = True

    @classmethod
    def for_query(cls, q: Query, **overrides: Any) -> Budget:
        """
        Default budget derived from the size of a query. Overrides set to None
        are ignored.

        :param q: the query whose witnesses are searched
        :param overrides: fields to set explicitly
        :return: the budget
        """

        depth = len(variables(q))
        n_atoms = len(atoms(q))
        budget = cls(
            max_facts=n_atoms * (1 + depth),
            max_fresh=max(2, depth),
            max_depth=depth,
            max_first_response=max(1, n_atoms),
        )
        return budget.merged(**overrides)

    def merged(self, **overrides: Any) -> Budget:
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def validate(self) -> Budget:
        """
        :raises BudgetError: if a limit is negative
        """

        for name in ("max_facts", "max_fresh", "max_depth", "max_first_response"):
            if getattr(self, name) < 0:
                raise BudgetError(f"Budget field {name} must be non-negative")
        if self.time_limit_ms is not None and self.time_limit_ms < 0:
            raise BudgetError("The time limit must be non-negative")
        return self

    def deadline(self) -> float | None:
        """Absolute perf_counter deadline of a search starting now"""
        if not self.time_limit_ms:
            return None
        return perf_counter() + self.time_limit_ms / 1000

    def to_json(self) -> dict[str, Any]:
        return asdict(self)
