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

"""Independent re-validation of certificates

Every certificate produced by a decision procedure can be checked from
scratch with the functions of this module. They only rely on the data model
and on query evaluation.
"""

from __future__ import annotations
import logging
from typing import TYPE_CHECKING

from qrelevance.exceptions import QRelevanceError
from qrelevance.model import apply_response, truncate_path, validate_path
from qrelevance.query import holds

if TYPE_CHECKING:
    from collections.abc import Iterable
    from qrelevance.model import Access, Configuration, Fact, Path, Schema
    from qrelevance.query import Query


def check_ir_certificate(
    schema: Schema, conf: Configuration, q: Query, access: Access, response: Iterable[Fact]
) -> bool:
    """
    The query is false before and true after applying the response

    :return: True if the response witnesses immediate relevance
    """

    try:
        after = apply_response(conf, access, response, schema)
    except QRelevanceError as e:
        logging.debug(f"Invalid response: {e}")
        return False
    return not holds(q, conf) and holds(q, after)


def check_ltr_certificate(
    schema: Schema, conf: Configuration, q: Query, access: Access, path: Path
) -> bool:
    """
    The path starts from `conf` with `access`, is valid, and the query holds at
    its end but not at the end of its truncation

    :return: True if the path witnesses long-term relevance
    """

    if path.initial != conf or not path.steps or path.steps[0].access != access:
        return False
    diagnostic = validate_path(path, schema)
    if not diagnostic:
        logging.debug(f"Invalid path at step {diagnostic.step}: {diagnostic.reason}")
        return False
    return holds(q, path.final) and not holds(q, truncate_path(path, schema).final)


def check_containment_certificate(
    schema: Schema, conf: Configuration, q1: Query, q2: Query, path: Path
) -> bool:
    """
    The path starts from `conf`, is valid and ends in a configuration where
    `q1` holds and `q2` does not

    :return: True if the path witnesses non-containment
    """

    if path.initial != conf:
        return False
    diagnostic = validate_path(path, schema)
    if not diagnostic:
        logging.debug(f"Invalid path at step {diagnostic.step}: {diagnostic.reason}")
        return False
    final = path.final
    return holds(q1, final) and not holds(q2, final)
