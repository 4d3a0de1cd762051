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

"""Collection of utilities

Collection of utilities used internally.
"""

from __future__ import annotations
from functools import cache
from itertools import chain, combinations
import logging
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Collection, Iterator, Sequence
    from typing import Any


def is_debug() -> bool:
    """Returns True if the current logging level is set to debug"""
    return logging.root.level <= logging.DEBUG


@cache
def log_once(level: int, message: str) -> None:
    """
    Log a message with the corresponding level only once.

    :param level: The severity level of the logging
    :param message: The message to log
    """

    logging.log(level, message)


def powerset(
    items: Sequence[Any], *, min_size: int = 0, max_size: int | None = None
) -> Iterator[tuple[Any, ...]]:
    """
    Iterate over the subsets of a sequence by increasing cardinality. Within
    one cardinality the subsets come in lexicographic order of positions.

    :param items: The sequence
    :param min_size: Smallest subset size returned
    :param max_size: Largest subset size returned (defaults to len(items))
    :return: iterator over tuples
    """

    upper = len(items) if max_size is None else min(max_size, len(items))
    return chain.from_iterable(combinations(items, k) for k in range(min_size, upper + 1))


def fresh_name(base: str, taken: Collection[str]) -> str:
    """
    Returns `base` if it is not taken, otherwise the first `base_<i>` that is free.

    :param base: preferred name
    :param taken: names already in use
    :return: a name not in `taken`
    """

    if base not in taken:
        return base
    i = 1
    while f"{base}_{i}" in taken:
        i += 1
    return f"{base}_{i}"
