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

import pytest
from pathlib import Path

from qrelevance.cli import parse_problem
from qrelevance.exceptions import BudgetError, OracleLimitExceeded
from qrelevance.generators import RandomLimits, gen_random_instance
from qrelevance.model import Fact, TypedValue
from qrelevance.oracle import (
    OracleLimits,
    oracle_certain,
    oracle_containment,
    oracle_ir,
    oracle_ltr,
    oracle_reachable,
)
from qrelevance.oracle.differential import CHECKS, compare, fresh_per_domain
from qrelevance.types import Outcome, QueryLanguage
from qrelevance.witness import producible_closure

BASE_TEST_PATH = Path("tests/data")


def load(name):
    return parse_problem((BASE_TEST_PATH / name).read_text()).instance


def as_q1(name):
    inst = load(name)
    return inst.with_queries({"Q1": inst.query("Q")})


def d(token):
    return TypedValue(token, "D")


class TestReachability:
    """Bounded reachable configurations"""

    def test_dependent_chain(self):
        inst = load("f1.alp")
        reached = oracle_reachable(
            inst.schema, inst.configuration, OracleLimits(max_path_length=2, max_fresh=1)
        )
        assert {frozenset(c.facts) for c in reached} == {
            frozenset(),
            frozenset({Fact("S", (d("oD0"),))}),
            frozenset({Fact("S", (d("oD0"),)), Fact("R", (d("oD0"),))}),
        }

    @pytest.mark.parametrize("name", ["f1.alp", "f1_variant.alp", "f2a.alp", "f4.alp"])
    def test_reached_facts_are_producible(self, name):
        inst = load(name)
        conf = inst.configuration
        for reached in oracle_reachable(inst.schema, conf, OracleLimits(max_path_length=2)):
            plan = producible_closure(conf, inst.schema, reached.facts - conf.facts)
            assert plan is not None
            assert plan.path(conf).final.facts == reached.facts

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(50))
    def test_random_reached_facts_are_producible(self, seed):
        limits = RandomLimits(relations=2, arity=2, domains=1, methods=2, facts=2, values=2)
        inst = gen_random_instance(seed, limits)
        conf = inst.configuration
        reached = oracle_reachable(inst.schema, conf, OracleLimits(max_path_length=2))
        for c in reached:
            assert producible_closure(conf, inst.schema, c.facts - conf.facts) is not None, seed

    def test_state_limit(self):
        inst = load("f1.alp")
        with pytest.raises(OracleLimitExceeded):
            oracle_reachable(
                inst.schema,
                inst.configuration,
                OracleLimits(max_path_length=2, max_fresh=1, max_states=1),
            )

    def test_negative_limits(self):
        with pytest.raises(BudgetError):
            OracleLimits(max_fresh=-1).validate()


class TestOracles:
    """Brute-force decisions on the reference instances"""

    def test_containment(self):
        inst = load("f1.alp")
        q1, q2 = inst.query("Q1"), inst.query("Q2")
        assert oracle_containment(inst.schema, inst.configuration, q1, q2)
        assert not oracle_containment(inst.schema, inst.configuration, q2, q1)

    @pytest.mark.parametrize(
        "name, expected",
        [("f1_variant.alp", True), ("f2a.alp", False), ("f2b.alp", True), ("f3.alp", False)],
    )
    def test_ltr(self, name, expected):
        inst = load(name)
        assert oracle_ltr(inst.schema, inst.configuration, inst.query("Q"), inst.target) == expected

    def test_ir(self):
        inst = load("f4.alp")
        assert oracle_ir(inst.schema, inst.configuration, inst.query("Q"), inst.target)

    def test_certain(self):
        text = (BASE_TEST_PATH / "f2a.alp").read_text() + "query P = R(x, 5)\n"
        inst = parse_problem(text).instance
        schema, conf = inst.schema, inst.configuration
        assert oracle_certain(schema, conf, inst.query("P"))
        assert not oracle_certain(schema, conf, inst.query("Q"))

    def test_fresh_per_domain(self):
        facts = [Fact("R", (d("3"), d("x"))), Fact("S", (d("y"), d("x")))]
        assert fresh_per_domain(facts, {d("3")}) == 2
        assert fresh_per_domain([], set()) == 0


class TestDifferential:
    """Procedures compared with the oracles"""

    @pytest.mark.parametrize(
        "check, name",
        [
            ("ir", "f4.alp"),
            ("ltr", "f2a.alp"),
            ("ltr", "f2b.alp"),
            ("ltr", "f3.alp"),
            ("single", "f2b.alp"),
            ("certain", "f2a.alp"),
        ],
    )
    def test_reference_instances(self, check, name):
        assert compare(check, as_q1(name)).agree

    @pytest.mark.parametrize("swap", [False, True])
    def test_containment(self, swap):
        inst = load("f1.alp")
        if swap:
            inst = inst.with_queries({"Q1": inst.query("Q2"), "Q2": inst.query("Q1")})
        result = compare("contain", inst)
        assert result.agree
        assert result.main == (Outcome.yes if swap else Outcome.no)

    def test_skipped(self):
        assert compare("ir", load("f1.alp")).agree is None
        assert compare("single", as_q1("f3.alp")).agree is None

    def test_unknown_check(self):
        with pytest.raises(ValueError):
            compare("bogus", as_q1("f2b.alp"))

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(200))
    @pytest.mark.parametrize("check", CHECKS)
    def test_random(self, check, seed):
        conjunctive = check in ("single", "via-containment")
        limits = RandomLimits(
            relations=2,
            arity=2,
            domains=1,
            methods=1,
            facts=2,
            atoms=3,
            values=2,
            language=QueryLanguage.cq if conjunctive else QueryLanguage.pq,
            dependent_ratio=0.0 if check in ("ltr", "single") else 0.5,
        )
        inst = gen_random_instance(seed, limits)
        oracle_limits = OracleLimits(max_path_length=2, max_fresh=1, max_response_size=1)
        result = compare(check, inst, oracle_limits)
        assert result.agree is not False, f"seed {seed}: {result.reason}"
        if check == "certain":
            assert result.agree
