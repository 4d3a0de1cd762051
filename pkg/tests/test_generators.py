"""
Copyright 2023 Quarkslab

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""

import re
from itertools import product

import pytest

from qrelevance.exceptions import BudgetError
from qrelevance.generators import (
    RandomLimits,
    TilingSpec,
    TilingSpecError,
    bits,
    gen_random_instance,
    gen_tiling_corridor,
    gen_tiling_grid,
    tile_relation,
    violations,
)
from qrelevance.model import check_access
from qrelevance.query import Variable, atoms, holds, is_cq, validate_query
from qrelevance.relevance import check_containment_certificate
from qrelevance.types import Outcome, QueryLanguage
from qrelevance.witness import Budget, decide_containment_bounded

ALTERNATING = {("t1", "t2"), ("t2", "t1")}


def tileable(spec: TilingSpec) -> bool:
    """Brute force over the 2 x 2 grid whose first row is the initial one"""
    for lower in product(spec.tiles, repeat=2):
        grid = [spec.initial, lower]
        if all((row[0], row[1]) in spec.horizontal for row in grid) and all(
            (grid[0][c], grid[1][c]) in spec.vertical for c in range(2)
        ):
            return True
    return False


class TestTilingSpec:
    """Tiling problem construction"""

    def test_build(self):
        spec = TilingSpec.build(1, 2).validate()
        assert spec.tiles == ("t1", "t2")
        assert len(spec.horizontal) == 4
        assert spec.initial == ("t1", "t1")
        assert TilingSpec.build(1, 2, vertical="none").vertical == frozenset()

    @pytest.mark.parametrize(
        "spec",
        [
            TilingSpec.build(0, 1),
            TilingSpec.build(1, 1, horizontal={("t1", "t3")}),
            TilingSpec.build(1, 1, initial=("t9",)),
        ],
    )
    def test_invalid(self, spec):
        with pytest.raises(TilingSpecError):
            spec.validate()

    @pytest.mark.parametrize("value, width, expected", [(5, 4, [0, 1, 0, 1]), (1, 1, [1])])
    def test_bits(self, value, width, expected):
        assert bits(value, width) == expected


class TestGrid:
    """Exponential grid encoded as a containment"""

    def test_queries_are_valid(self):
        inst = gen_tiling_grid(TilingSpec.build(1, 2))
        for name in ("Q1", "Q2"):
            assert validate_query(inst.query(name), inst.schema, inst.configuration).ok
        assert is_cq(inst.query("Q2"))
        assert len(inst.schema.methods) == 1

    def test_seed_row_is_consistent(self):
        inst = gen_tiling_grid(TilingSpec.build(1, 2))
        assert not holds(inst.query("Q1"), inst.configuration)
        assert not holds(inst.query("Q2"), inst.configuration)

    def test_forbidden_seed_pair_is_a_violation(self):
        inst = gen_tiling_grid(TilingSpec.build(1, 2, horizontal="none"))
        assert holds(inst.query("Q2"), inst.configuration)

    def test_too_few_initial_tiles(self):
        with pytest.raises(TilingSpecError):
            gen_tiling_grid(TilingSpec.build(1, 1, initial=("t1",)))

    @pytest.mark.parametrize("n", [1, 2])
    def test_fd_comparison_size(self, n):
        q2 = gen_tiling_grid(TilingSpec.build(n, 1)).query("Q2")

        def outputs(relation: str, pattern: str) -> list[str]:
            return [
                a.terms[-1].name
                for a in atoms(q2)
                if a.relation == relation
                and isinstance(a.terms[-1], Variable)
                and re.fullmatch(pattern, a.terms[-1].name)
            ]

        assert len(outputs("Eq", r"fd_e\d+")) == 2 * n
        assert len(outputs("And", r"fd(_r\d+)?")) == 2 * n - 1

    def test_single_tile_grid(self):
        inst = gen_tiling_grid(TilingSpec.build(1, 1, initial=("t1", "t1")))
        q1, q2 = inst.query("Q1"), inst.query("Q2")
        budget = Budget.for_query(q1, time_limit_ms=60_000)
        verdict = decide_containment_bounded(inst.schema, inst.configuration, q1, q2, budget)
        assert verdict.outcome == Outcome.no
        assert len(verdict.certificate.steps) == 2
        assert check_containment_certificate(
            inst.schema, inst.configuration, q1, q2, verdict.certificate
        )

    @pytest.mark.slow
    @pytest.mark.parametrize(
        "spec",
        [
            TilingSpec.build(1, 1, "all", "none", ("t1", "t1")),
            TilingSpec.build(1, 1, "none", "all", ("t1", "t1")),
            TilingSpec.build(1, 2, "all", {("t1", "t1")}, ("t1", "t2")),
            TilingSpec.build(1, 1, "all", "all", ("t1", "t1")),
            TilingSpec.build(1, 2, "all", "all", ("t1", "t2")),
            TilingSpec.build(1, 2, ALTERNATING, ALTERNATING, ("t1", "t2")),
        ],
    )
    def test_tileable_iff_not_contained(self, spec):
        inst = gen_tiling_grid(spec)
        q1, q2 = inst.query("Q1"), inst.query("Q2")
        budget = Budget.for_query(q1, time_limit_ms=60_000)
        verdict = decide_containment_bounded(inst.schema, inst.configuration, q1, q2, budget)
        assert verdict.outcome != Outcome.unknown_within_budget
        assert (verdict.outcome == Outcome.no) == tileable(spec)


class TestCorridor:
    """Corridor tiling encoded as a containment"""

    def spec(self, **kwargs) -> TilingSpec:
        return TilingSpec.build(2, 1, initial=("t1", "t1"), final=("t1", "t1"), width=2, **kwargs)

    def test_relations(self):
        inst = gen_tiling_corridor(self.spec())
        assert {r.name for r in inst.schema.relations} == {"C_t1_1", "C_t1_2"}
        assert all(m.is_dependent for m in inst.schema.methods)
        assert tile_relation("t1", 2) == "C_t1_2"

    def test_violations(self):
        assert len(violations(self.spec())) == 4
        assert len(violations(self.spec(horizontal="none"))) == 5

    def test_initial_row_is_final(self):
        inst = gen_tiling_corridor(self.spec())
        assert holds(inst.query("Q1"), inst.configuration)
        assert not holds(inst.query("Q2"), inst.configuration)
        verdict = decide_containment_bounded(
            inst.schema, inst.configuration, inst.query("Q1"), inst.query("Q2")
        )
        assert verdict.outcome == Outcome.no
        assert verdict.certificate.steps == ()

    def test_conjunctive_encoding(self):
        inst = gen_tiling_corridor(self.spec(), as_cq=True)
        assert is_cq(inst.query("Q1")) and is_cq(inst.query("Q2"))
        assert all(r.attributes[-1].domain == "Bit" for r in inst.schema.relations[:2])
        assert all(m.inputs == ("prev", "flag") for m in inst.schema.methods)

    def test_rows_must_fill_the_corridor(self):
        with pytest.raises(TilingSpecError):
            gen_tiling_corridor(TilingSpec.build(2, 1, initial=("t1",), final=("t1", "t1")))
        with pytest.raises(TilingSpecError):
            gen_tiling_corridor(TilingSpec.build(1, 1, initial=("t1",), final=("t1",)))


class TestRandom:
    """Seeded random instances"""

    @pytest.mark.parametrize("seed", range(10))
    def test_well_typed(self, seed):
        inst = gen_random_instance(seed)
        inst.configuration.check(inst.schema)
        for name in ("Q1", "Q2"):
            assert validate_query(inst.query(name), inst.schema, inst.configuration).ok
        if inst.target is not None:
            check_access(inst.target, inst.schema)

    def test_deterministic(self):
        assert gen_random_instance(42) == gen_random_instance(42)

    @pytest.mark.parametrize("seed", range(5))
    def test_conjunctive(self, seed):
        inst = gen_random_instance(seed, RandomLimits(language=QueryLanguage.cq))
        assert is_cq(inst.query("Q1")) and is_cq(inst.query("Q2"))

    def test_independent_only(self):
        limits = RandomLimits(dependent_ratio=0.0)
        assert all(gen_random_instance(s, limits).schema.all_independent for s in range(5))

    @pytest.mark.parametrize(
        "limits", [RandomLimits(relations=0), RandomLimits(dependent_ratio=1.5)]
    )
    def test_invalid_limits(self, limits):
        with pytest.raises(BudgetError):
            gen_random_instance(0, limits)
