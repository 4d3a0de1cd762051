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

"""Corridor tiling generator

A corridor of width n is tiled row after row, left to right. Every tile is a
fact ``C_<type>_<column>(previous, current)`` linking it to the tile placed
just before, and the only method of each relation inputs the previous tile.
A path that fetches a correct final row without exhibiting any violation
exists iff the corridor can be tiled.
"""

from __future__ import annotations
import logging
from itertools import product
from typing import TYPE_CHECKING

from qrelevance.generators.tiling import TilingSpecError
from qrelevance.model import (
    AccessMethod,
    Attribute,
    Configuration,
    Fact,
    ProblemInstance,
    Relation,
    Schema,
    TypedValue,
)
from qrelevance.query import And, Atom, Constant, Variable, conjoin, disjoin, dnf
from qrelevance.reductions.gadgets import Circuit, bit, bool_values, gate_relation, truth_table
from qrelevance.types import AccessMode

if TYPE_CHECKING:
    from qrelevance.generators.tiling import TilingSpec
    from qrelevance.query import Query

CELL, BIT = "Cell", "Bit"


def tile_relation(tile: str, column: int) -> str:
    return f"C_{tile}_{column}"


def _column(m: int, n: int) -> int:
    """Column index wrapped into 1..n"""
    return (m - 1) % n + 1


def _atom(tile: str, column: int, prev: str, cur: str) -> Atom:
    return Atom(tile_relation(tile, column), (Variable(prev), Variable(cur)))


def violations(spec: TilingSpec) -> list[Query]:
    """
    The violation patterns of a corridor: a tile with two types or columns,
    a wrong column progression inside a row or from one row to the next, and
    a violated horizontal or vertical constraint. Vertical patterns walk `n`
    tiles forward from a tile to the one below it.
    """

    n, tiles = spec.n, spec.tiles
    cells = list(product(tiles, range(1, n + 1)))
    found: list[Query] = []
    for a, b in product(cells, repeat=2):
        if a < b:
            found.append(And((_atom(*a, "x", "y"), _atom(*b, "x", "w"))))
            found.append(And((_atom(*a, "x", "y"), _atom(*b, "w", "y"))))
    for (i, m), (k, m2) in product(cells, repeat=2):
        expected = m + 1 if m < n else 1
        if m2 != expected:
            found.append(And((_atom(i, m, "x", "y"), _atom(k, m2, "y", "z"))))
    for m in range(1, n):
        for i, j in product(tiles, repeat=2):
            if (i, j) not in spec.horizontal:
                found.append(And((_atom(i, m, "x", "y"), _atom(j, m + 1, "y", "z"))))
    for m in range(1, n + 1):
        for i, j in product(tiles, repeat=2):
            if (i, j) in spec.vertical:
                continue
            steps = [
                disjoin(*(_atom(k, _column(m + s, n), f"y{s}", f"y{s + 1}") for k in tiles))
                for s in range(1, n)
            ]
            found.append(
                conjoin(_atom(i, m, "x", "y1"), *steps, _atom(j, m, f"y{n}", "z"))
            )
    return found


def _flagged(atom: Atom, suffix: str, flag: str) -> Atom:
    terms = tuple(Variable(f"{t.name}_{suffix}") for t in atom.terms if isinstance(t, Variable))
    return Atom(atom.relation, terms + (Variable(flag),))


def _violations_cq(spec: TilingSpec, relations: list[str]) -> tuple[Query, int]:
    """
    Conjunctive form of the violations. Every pattern gets its own copy of
    the variables and an `And` of the flags of its atoms; padding facts let
    every pattern match with zero flags, and the `Or` chain requires one
    pattern to match real facts only. Extra patterns catch a real tile
    whose previous tile carries a zero flag.
    """

    c = Circuit(BIT)
    body: list[Atom] = []
    outs = []
    patterns = [d for v in violations(spec) for d in dnf(v)]
    for k, pattern in enumerate(patterns):
        flags = []
        for idx, atom in enumerate(pattern):
            flags.append(Variable(f"fl{k}_{idx}"))
            body.append(_flagged(atom, str(k), flags[-1].name))
        outs.append(c.chain("And", flags, f"v{k}"))
    base = len(patterns)
    for offset, (a, b) in enumerate(product(relations, repeat=2)):
        k = base + offset
        f, g = Variable(f"fl{k}_0"), Variable(f"fl{k}_1")
        body.append(Atom(a, (Variable(f"x_{k}"), Variable(f"y_{k}"), f)))
        body.append(Atom(b, (Variable(f"y_{k}"), Variable(f"z_{k}"), g)))
        outs.append(c.gate("And", c.negate(f, f"v{k}_zero"), g, f"v{k}"))

    one = bit(1, BIT)
    if len(outs) == 1:
        c.require(outs[0], 1)
    else:
        acc = outs[0]
        for idx, out in enumerate(outs[1:], start=1):
            acc = c.gate("Or", acc, out, one if idx == len(outs) - 1 else f"any{idx}")
    return And(tuple(body + c.atoms)), len(outs)


def gen_tiling_corridor(spec: TilingSpec, as_cq: bool = False) -> ProblemInstance:
    """
    Instance whose witness condition is a reachable configuration where the
    final row query `Q1` holds and the violation query `Q2` does not, that is
    a non-containment certificate of `Q1` in `Q2`. The configuration holds
    the initial row chained over the constants ``c0 ... cn``.

    With `as_cq`, every relation gets a third Boolean place that is an input
    of its method. Known tiles carry 1, a padding fact ``C(pad, pad, 0)`` is
    added per relation and the violations become one conjunctive query over
    `And`, `Or` and `Eq` truth tables.

    :param spec: the corridor, with initial and final rows of width `n`
    :param as_cq: produce conjunctive queries
    :return: instance with the queries `Q1` and `Q2`
    :raises TilingSpecError: on a malformed specification
    """

    spec.validate()
    n = spec.n
    if n < 2:
        raise TilingSpecError("The corridor width must be at least 2")
    if len(spec.initial) != n or len(spec.final) != n:
        raise TilingSpecError(f"Initial and final rows must have {n} tiles")

    names = [tile_relation(t, j) for t, j in product(spec.tiles, range(1, n + 1))]
    links = [TypedValue(f"c{i}", CELL) for i in range(n + 1)]
    extra = (Attribute("flag", BIT),) if as_cq else ()
    inputs = ("prev", "flag") if as_cq else ("prev",)
    relations = [
        Relation(name, (Attribute("prev", CELL), Attribute("cur", CELL)) + extra) for name in names
    ]
    methods = [AccessMethod(f"m{name}", name, inputs, AccessMode.dependent) for name in names]
    final = [_atom(t, j, f"y{j - 1}", f"y{j}") for j, t in enumerate(spec.final, start=1)]
    initial = [
        Fact(tile_relation(t, j), (links[j - 1], links[j]))
        for j, t in enumerate(spec.initial, start=1)
    ]

    if not as_cq:
        schema = Schema((CELL,), tuple(relations), tuple(methods))
        q1: Query = And(tuple(final))
        q2: Query = disjoin(*violations(spec))
        conf = Configuration(frozenset(initial))
        return ProblemInstance(schema, conf, {"Q1": q1, "Q2": q2})

    zero, one = bool_values(BIT)
    pad = TypedValue("pad", CELL)
    schema = Schema(
        (CELL, BIT),
        tuple(relations) + tuple(gate_relation(g, BIT) for g in ("And", "Or", "Eq")),
        tuple(methods),
    )
    facts = [Fact(f.relation, f.values + (one,)) for f in initial]
    facts += [Fact(name, (pad, pad, zero)) for name in names]
    for g in ("And", "Or", "Eq"):
        facts += truth_table(g, g, BIT)
    q1 = And(tuple(Atom(a.relation, a.terms + (Constant(one),)) for a in final))
    q2, count = _violations_cq(spec, names)
    logging.debug(f"Corridor CQ with {count} pattern(s)")
    return ProblemInstance(schema, Configuration(frozenset(facts)), {"Q1": q1, "Q2": q2})
