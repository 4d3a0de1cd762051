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

"""Problem file printer"""

from __future__ import annotations
import hashlib
from typing import TYPE_CHECKING

from qrelevance.query import format_token

if TYPE_CHECKING:
    from qrelevance.model import Access, Fact, ProblemInstance, Schema


def _values(values) -> str:
    return ", ".join(format_token(v.token, in_query=False) for v in values)


def format_fact(fact: Fact) -> str:
    return f"{fact.relation}({_values(fact.values)})"


def format_access(access: Access, schema: Schema) -> str:
    """Access as ``R(v, ?) via M``, the form read by :py:func:`parse_access`"""
    method = schema.method(access.method)
    pattern = access.pattern(schema)
    slots = [
        format_token(pattern[p].token, in_query=False) if p in pattern else "?"
        for p in range(schema.relation(method.relation).arity)
    ]
    return f"{method.relation}({', '.join(slots)}) via {access.method}"


def print_problem(inst: ProblemInstance) -> str:
    """
    Textual form of a problem. Parsing the output gives back an equal instance.

    :param inst: the problem
    :return: the ``.alp`` text
    """

    schema = inst.schema
    lines = [f"domain {d}" for d in schema.domains]
    for rel in schema.relations:
        attrs = ", ".join(f"{a.name}:{a.domain}" for a in rel.attributes)
        lines.append(f"relation {rel.name}({attrs})")
    for m in schema.methods:
        lines.append(f"access {m.name} on {m.relation} inputs({', '.join(m.inputs)}) {m.mode.name}")
    conf = inst.configuration
    lines.extend(f"fact {format_fact(f)}" for f in conf)
    for v in sorted(conf.constants):
        lines.append(f"const {format_token(v.token, in_query=False)}:{v.domain}")
    for name, q in inst.queries.items():
        head = inst.heads.get(name, ())
        signature = f"{name}({', '.join(v.name for v in head)})" if head else name
        lines.append(f"query {signature} = {q}")
    if inst.target is not None:
        lines.append(f"target {format_access(inst.target, schema)}")
    return "\n".join(lines) + "\n"


def digest(inst: ProblemInstance) -> str:
    """Short hash of the printed problem"""
    return hashlib.sha256(print_problem(inst).encode()).hexdigest()[:16]
