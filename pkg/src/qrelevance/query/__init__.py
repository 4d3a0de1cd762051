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

"""Positive queries

Representation of positive Boolean queries, validation against a schema,
DNF conversion, evaluation with homomorphism witnesses, certain answers and
classical containment.
"""

from qrelevance.query.query import (
    And,
    Atom,
    Constant,
    Diagnostic,
    FALSE,
    Or,
    Query,
    QueryDiagnostics,
    TRUE,
    Term,
    Variable,
    atoms,
    conjoin,
    constants,
    disjoin,
    dnf,
    format_token,
    is_cq,
    iter_atoms,
    map_atoms,
    relations,
    rename_variables,
    simplify,
    size,
    substitute,
    to_dnf,
    validate_query,
    variable_domains,
    variables,
)
from qrelevance.query.homomorphism import Homomorphism, HomomorphismSearch
from qrelevance.query.evaluation import (
    certain,
    classical_contains,
    evaluate,
    freeze,
    holds,
    holds_through,
)
