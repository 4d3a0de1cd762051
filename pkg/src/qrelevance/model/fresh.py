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

"""Canonical fresh values"""

from __future__ import annotations
from typing import TYPE_CHECKING

from qrelevance.model.schema import TypedValue

if TYPE_CHECKING:
    from collections.abc import Iterable
    from qrelevance.types import DomainName


class FreshValues:
    """
    Supply of canonical fresh values named ``<prefix><domain><index>``. Tokens
    clashing with a value to avoid get an extra ``_`` until they are free, so
    the same index always gives the same value for one supply.
    """

    def __init__(self, avoid: Iterable[TypedValue] = (), prefix: str = "f"):
        self._taken = {(v.token, v.domain) for v in avoid}
        self._prefix = prefix
        self._cache: dict[tuple[DomainName, int], TypedValue] = {}

    def __call__(self, domain: DomainName, index: int) -> TypedValue:
        key = (domain, index)
        if key not in self._cache:
            token = f"{self._prefix}{domain}{index}"
            while (token, domain) in self._taken:
                token += "_"
            self._cache[key] = TypedValue(token, domain)
        return self._cache[key]

    def is_fresh(self, value: TypedValue) -> bool:
        return value in self._cache.values()
