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

"""Unification of subgoals with an access binding"""

from __future__ import annotations
from typing import TYPE_CHECKING

from qrelevance.query import Constant

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping
    from qrelevance.model import Access, Schema, TypedValue
    from qrelevance.query import Atom
    from qrelevance.types import VariableName


def unify_binding(
    atom: Atom,
    access: Access,
    schema: Schema,
    into: Mapping[VariableName, TypedValue] | None = None,
) -> dict[VariableName, TypedValue] | None:
    """
    Most general unifier of a subgoal with the binding of an access: the
    subgoal must be on the accessed relation, its constants at input positions
    must equal the binding values and its variables at input positions are
    mapped to them.

    :param atom: the subgoal
    :param access: the access
    :param schema: the schema
    :param into: an existing unifier to extend
    :return: the extended unifier, None on conflict
    """

    if atom.relation != schema.method(access.method).relation:
        return None
    sigma = dict(into or {})
    for p, v in access.pattern(schema).items():
        t = atom.terms[p]
        if isinstance(t, Constant):
            if t.value != v:
                return None
        elif sigma.setdefault(t.name, v) != v:
            return None
    return sigma


def unify_all(
    atoms: Iterable[Atom], access: Access, schema: Schema
) -> dict[VariableName, TypedValue] | None:
    """Simultaneous unifier of several subgoals with the same binding"""
    sigma: dict[VariableName, TypedValue] | None = {}
    for atom in atoms:
        sigma = unify_binding(atom, access, schema, sigma)
        if sigma is None:
            return None
    return sigma


def as_constants(sigma: Mapping[VariableName, TypedValue]) -> dict[VariableName, Constant]:
    return {v: Constant(value) for v, value in sigma.items()}
