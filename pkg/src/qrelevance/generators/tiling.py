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

"""Tiling specifications and the exponential grid generator

A tiling problem places tile types on a grid so that horizontally and
vertically adjacent tiles respect two compatibility relations, starting from
a given initial sequence. The grid generator turns a ``2^n x 2^n`` tiling
problem into a containment question over a single access-limited `Tile`
relation whose facts are chained through link values.
"""

from __future__ import annotations
import logging
from dataclasses import dataclass, field
from itertools import product
from typing import TYPE_CHECKING

from qrelevance.exceptions import QRelevanceError
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
from qrelevance.query import And, Atom, Constant, Variable
from qrelevance.reductions.gadgets import (
    Circuit,
    bit,
    bool_values,
    gate_relation,
    truth_table,
)
from qrelevance.types import AccessMode

if TYPE_CHECKING:
    from qrelevance.query import Term

BIT, TYPE, LINK = "Bit", "Type", "Link"


class TilingSpecError(QRelevanceError):
    """Malformed tiling specification"""


@dataclass(frozen=True)
class TilingSpec:
    """
    Tiling problem. Tile types are plain tokens; `horizontal` holds the pairs
    allowed left to right and `vertical` the pairs allowed top to bottom.

    :param n: grid exponent, or corridor width
    :param tiles: the tile types
    :param horizontal: allowed horizontal pairs
    :param vertical: allowed vertical pairs
    :param initial: first tiles of the first row
    :param final: last row (corridor only)
    """

    n: int
    tiles: tuple[str, ...]
    horizontal: frozenset[tuple[str, str]] = field(default_factory=frozenset)
    vertical: frozenset[tuple[str, str]] = field(default_factory=frozenset)
    initial: tuple[str, ...] = ()
    final: tuple[str, ...] = ()

    @classmethod
    def build(
        cls,
        n: int,
        k: int,
        horizontal: str | set[tuple[str, str]] = "all",
        vertical: str | set[tuple[str, str]] = "all",
        initial: tuple[str, ...] | None = None,
        final: tuple[str, ...] | None = None,
        *,
        width: int = 2,
    ) -> TilingSpec:
        """
        Convenience constructor with tiles ``t1 ... tk``. A constraint given as
        ``"all"`` or ``"none"`` allows every pair or no pair. Missing initial
        and final sequences repeat the first tile `width` times.
        """

        tiles = tuple(f"t{i}" for i in range(1, k + 1))

        def pairs(value: str | set[tuple[str, str]]) -> frozenset[tuple[str, str]]:
            if value == "all":
                return frozenset(product(tiles, repeat=2))
            if value == "none":
                return frozenset()
            return frozenset(value)  # type: ignore[arg-type]

        return cls(
            n,
            tiles,
            pairs(horizontal),
            pairs(vertical),
            initial if initial is not None else (tiles[0],) * width,
            final if final is not None else (),
        )

    def validate(self) -> TilingSpec:
        if self.n < 1:
            raise TilingSpecError("n must be positive")
        if not self.tiles or len(set(self.tiles)) != len(self.tiles):
            raise TilingSpecError("Tile types must be non-empty and unique")
        known = set(self.tiles)
        for name, pairs in (("horizontal", self.horizontal), ("vertical", self.vertical)):
            for a, b in pairs:
                if a not in known or b not in known:
                    raise TilingSpecError(f"Unknown tile type in the {name} relation: ({a}, {b})")
        for t in self.initial + self.final:
            if t not in known:
                raise TilingSpecError(f"Unknown tile type '{t}'")
        return self


def bits(value: int, width: int) -> list[int]:
    """Fixed-width binary encoding, most significant bit first"""
    return [(value >> (width - 1 - j)) & 1 for j in range(width)]


@dataclass(frozen=True)
class _TileAtom:
    type: Term
    row: list[Term]
    col: list[Term]
    link: Term
    out: Term

    def atom(self) -> Atom:
        return Atom("Tile", (self.type, *self.row, *self.col, self.link, self.out))


def _tile(type_: str, row: str, col: str, link: str, out: str, n: int) -> _TileAtom:
    return _TileAtom(
        Variable(type_),
        [Variable(f"{row}{j}") for j in range(1, n + 1)],
        [Variable(f"{col}{j}") for j in range(1, n + 1)],
        Variable(link),
        Variable(out),
    )


def _adjacency(c: Circuit, left: _TileAtom, right: _TileAtom, label: str) -> list[Term]:
    """Ok bits of the horizontal and vertical constraints for one ordered tile pair"""
    h_adj = c.gate(
        "And",
        c.equal(left.row, right.row, f"{label}_hrow"),
        c.successor(left.col, right.col, f"{label}_hcol"),
        f"{label}_hadj",
    )
    h_allowed = c.lookup("Horiz", (left.type, right.type), f"{label}_hz")
    h_ok = c.gate("Or", c.negate(h_adj, f"{label}_hnot"), h_allowed, f"{label}_hok")

    v_adj = c.gate(
        "And",
        c.successor(left.row, right.row, f"{label}_vrow"),
        c.equal(left.col, right.col, f"{label}_vcol"),
        f"{label}_vadj",
    )
    v_allowed = c.lookup("Vert", (left.type, right.type), f"{label}_vt")
    v_ok = c.gate("Or", c.negate(v_adj, f"{label}_vnot"), v_allowed, f"{label}_vok")
    return [h_ok, v_ok]


def gen_tiling_grid(spec: TilingSpec) -> ProblemInstance:
    """
    Containment instance whose non-containment is equivalent to the
    existence of a tiling of the ``2^n x 2^n`` grid.

    The tiles are facts ``Tile(t, row bits, column bits, x, y)``; a tile is
    linked to the next one in row-major order by its output `y`. The only
    method of `Tile` inputs every attribute but `y` and is dependent, so a
    path builds the grid tile after tile from the two seed facts. `Q1` asks
    for the last tile, `Q2` holds when four tile atoms exhibit something wrong:
    two tiles sharing a link but not their coordinates, two linked tiles with
    non consecutive coordinates, a violated adjacency constraint or a wrong
    initial tile.

    :param spec: the tiling problem, with at least two initial tiles
    :return: instance with the queries `Q1` and `Q2`
    :raises TilingSpecError: on a malformed specification
    """

    spec.validate()
    n, m = spec.n, len(spec.initial)
    if not 2 <= m <= 2**n:
        raise TilingSpecError(f"The grid needs between 2 and {2 ** n} initial tiles, got {m}")

    tile_rel = Relation(
        "Tile",
        (Attribute("t", TYPE),)
        + tuple(Attribute(f"b{j}", BIT) for j in range(1, n + 1))
        + tuple(Attribute(f"c{j}", BIT) for j in range(1, n + 1))
        + (Attribute("x", LINK), Attribute("y", LINK)),
    )
    lookup = tuple(
        Relation(name, (Attribute("s", TYPE), Attribute("t", TYPE), Attribute("r", BIT)))
        for name in ("SameTile", "Horiz", "Vert")
    )
    schema = Schema(
        (BIT, TYPE, LINK),
        (
            Relation("Bool", (Attribute("v", BIT),)),
            Relation("TileType", (Attribute("t", TYPE),)),
            *lookup,
            *(gate_relation(g, BIT) for g in ("And", "Or", "Eq")),
            tile_rel,
        ),
        (AccessMethod("mTile", "Tile", tuple(a.name for a in tile_rel.attributes[:-1])),),
    )

    zero, one = bool_values(BIT)
    types = {t: TypedValue(t, TYPE) for t in spec.tiles}
    links = [TypedValue(f"c{i}", LINK) for i in range(3)]
    facts = [Fact("Bool", (zero,)), Fact("Bool", (one,))]
    facts += [Fact("TileType", (types[t],)) for t in spec.tiles]
    for s, t in product(spec.tiles, repeat=2):
        facts.append(Fact("SameTile", (types[s], types[t], one if s == t else zero)))
        horizontal = one if (s, t) in spec.horizontal else zero
        vertical = one if (s, t) in spec.vertical else zero
        facts.append(Fact("Horiz", (types[s], types[t], horizontal)))
        facts.append(Fact("Vert", (types[s], types[t], vertical)))
    for g in ("And", "Or", "Eq"):
        facts += truth_table(g, g, BIT)
    for i in range(2):
        row = [TypedValue(str(v), BIT) for v in bits(0, n)]
        col = [TypedValue(str(v), BIT) for v in bits(i, n)]
        facts.append(Fact("Tile", (types[spec.initial[i]], *row, *col, links[i], links[i + 1])))

    last = [bit(v, BIT) for v in bits(2**n - 1, n)]
    q1 = Atom("Tile", (Variable("u"), *last, *last, Variable("x"), Variable("y")))

    t1 = _tile("u", "b", "c", "x", "y", n)
    t2 = _tile("v", "d", "e", "y", "z", n)
    t3 = _tile("w", "f", "g", "yp", "zp", n)
    t4 = _tile("q", "vb", "h", "yp", "zpp", n)
    c = Circuit(BIT)
    # functional dependency from the link to the coordinates
    i1 = c.equal(t3.row + t3.col, t4.row + t4.col, "fd")
    # linked tiles have consecutive coordinates
    i2 = c.successor(t1.row + t1.col, t2.row + t2.col, "succ")
    checks = _adjacency(c, t2, t3, "fwd") + _adjacency(c, t3, t2, "bwd")
    for i, t in enumerate(spec.initial):
        at = c.equal(
            t3.row + t3.col,
            [bit(v, BIT) for v in bits(0, n) + bits(i, n)],
            f"init{i}_at",
        )
        same = c.lookup("SameTile", (t3.type, Constant(types[t])), f"init{i}_same")
        checks.append(c.gate("Or", c.negate(at, f"init{i}_not"), same, f"init{i}_ok"))
    i3 = c.chain("And", checks, "ok")
    j = c.gate("And", i1, i2, "j")
    c.gate("And", j, i3, bit(0, BIT))
    q2 = And((t1.atom(), t2.atom(), t3.atom(), t4.atom(), *c.atoms))

    logging.debug(f"Grid instance with {len(q2.children)} atom(s) in Q2")
    conf = Configuration(frozenset(facts))
    return ProblemInstance(schema, conf, {"Q1": q1, "Q2": q2})
