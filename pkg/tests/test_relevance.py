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
from itertools import combinations, product
from pathlib import Path

from qrelevance.cli import parse_problem
from qrelevance.exceptions import QueryError, UnsupportedFeatureException
from qrelevance.model import Access, Fact, TypedValue
from qrelevance.query import Atom, Constant, Variable, atoms, holds, variables
from qrelevance.relevance import (
    GuessCertificate,
    check_ir_certificate,
    check_ltr_certificate,
    decide_ir,
    decide_ltr_independent,
    decide_ltr_single_occurrence,
    ir_by_rewriting,
    ir_rewriting,
    iter_guesses,
    query_graph,
    unify_binding,
)
from qrelevance.types import Outcome, SubgoalClass


BASE_TEST_PATH = Path("tests/data")


def load(name: str):
    return parse_problem((BASE_TEST_PATH / name).read_text()).instance


def d(token: str) -> TypedValue:
    return TypedValue(token, "D")


class TestImmediateRelevance:
    """Immediate relevance and its rewriting"""

    def test_boolean_access_completes_the_query(self):
        inst = load("f4.alp")
        q = inst.query("Q")
        verdict = decide_ir(inst.schema, inst.configuration, q, inst.target)
        assert verdict.outcome == Outcome.yes
        assert verdict.certificate == frozenset([Fact("S", (d("0"),))])
        response = verdict.certificate
        assert check_ir_certificate(inst.schema, inst.configuration, q, inst.target, response)

    def test_unrelated_access(self):
        inst = load("bank.alp")
        verdict = decide_ir(inst.schema, inst.configuration, inst.query("Q"), inst.target)
        assert verdict.outcome == Outcome.no
        assert verdict.certificate is None

    def test_query_already_true(self):
        inst = load("f2a.alp")
        conf = inst.configuration.with_facts([Fact("S", (d("5"), d("1")))])
        verdict = decide_ir(inst.schema, conf, inst.query("Q"), inst.target)
        assert verdict.outcome == Outcome.no

    def test_response_with_fresh_values(self):
        inst = load("f2b.alp")
        conf = inst.configuration.with_facts([Fact("S", (d("5"), d("1")))])
        verdict = decide_ir(inst.schema, conf, inst.query("Q"), inst.target)
        assert verdict.outcome == Outcome.yes
        (fact,) = verdict.certificate
        assert fact.relation == "R" and fact.values[1] == d("5")
        assert fact.values[0] not in conf.adom
        assert check_ir_certificate(inst.schema, conf, inst.query("Q"), inst.target, {fact})

    def test_binding_conflicts_with_constant(self):
        inst = load("f3.alp")
        q = Atom("R", (Variable("x"), Constant(d("5"))))
        verdict = decide_ir(inst.schema, inst.configuration, q, inst.target)
        assert verdict.outcome == Outcome.no

    def test_rewriting(self):
        inst = load("f4.alp")
        rewriting = ir_rewriting(inst.query("Q"), inst.target, inst.schema)
        assert len(rewriting.positive.children) == 3
        assert rewriting.evaluate(inst.configuration)
        assert ir_by_rewriting(inst.schema, inst.configuration, inst.query("Q"), inst.target)

    def test_rewriting_agrees_with_search(self):
        inst = load("f4.alp")
        q = inst.query("Q")
        for token in ("0", "a", "b"):
            access = Access("mS", (d(token),))
            expected = decide_ir(inst.schema, inst.configuration, q, access).outcome == Outcome.yes
            assert ir_by_rewriting(inst.schema, inst.configuration, q, access) == expected

    def test_rewriting_needs_boolean_method(self):
        inst = load("f2a.alp")
        with pytest.raises(UnsupportedFeatureException):
            ir_rewriting(inst.query("Q"), inst.target, inst.schema)


class TestLongTermRelevance:
    """Long-term relevance with independent accesses"""

    def test_known_fact_makes_the_access_useless(self):
        inst = load("f2a.alp")
        verdict = decide_ltr_independent(
            inst.schema, inst.configuration, inst.query("Q"), inst.target
        )
        assert verdict.outcome == Outcome.no

    def test_relevant_access(self):
        inst = load("f2b.alp")
        q = inst.query("Q")
        verdict = decide_ltr_independent(inst.schema, inst.configuration, q, inst.target)
        assert verdict.outcome == Outcome.yes
        certificate = verdict.certificate
        assert isinstance(certificate, GuessCertificate)
        assert certificate.guess.of(SubgoalClass.by_first_access) == [q.children[0]]
        path = certificate.path
        assert check_ltr_certificate(inst.schema, inst.configuration, q, inst.target, path)

    def test_later_access_subsumes_the_first(self):
        inst = load("f3.alp")
        verdict = decide_ltr_independent(
            inst.schema, inst.configuration, inst.query("Q"), inst.target
        )
        assert verdict.outcome == Outcome.no

    def test_dependent_methods_are_rejected(self):
        inst = load("f1_variant.alp")
        with pytest.raises(UnsupportedFeatureException):
            decide_ltr_independent(inst.schema, inst.configuration, inst.query("Q"), inst.target)

    def test_guesses_need_a_first_access_subgoal(self):
        inst = load("f2b.alp")
        for guess, sigma in iter_guesses(inst.query("Q"), inst.target, inst.schema):
            assert guess.of(SubgoalClass.by_first_access)
            assert all(a.relation == "R" for a in guess.of(SubgoalClass.by_first_access))
            assert sigma == {}

    @pytest.mark.parametrize("name, expected", [("f2a.alp", Outcome.no), ("f2b.alp", Outcome.yes)])
    def test_single_occurrence(self, name, expected):
        inst = load(name)
        q = inst.query("Q")
        verdict = decide_ltr_single_occurrence(inst.schema, inst.configuration, q, inst.target)
        assert verdict.outcome == expected
        exact = decide_ltr_independent(inst.schema, inst.configuration, q, inst.target)
        assert exact.outcome == expected
        if expected == Outcome.yes:
            path = verdict.certificate
            assert check_ltr_certificate(inst.schema, inst.configuration, q, inst.target, path)

    def test_single_occurrence_needs_one_occurrence(self):
        inst = load("f3.alp")
        with pytest.raises(QueryError):
            decide_ltr_single_occurrence(
                inst.schema, inst.configuration, inst.query("Q"), inst.target
            )

    def test_query_graph(self):
        subgoals = [
            Atom("R", (Variable("x"), Variable("y"))),
            Atom("S", (Variable("y"),)),
            Atom("T", (Variable("z"),)),
        ]
        graph = query_graph(subgoals)
        assert set(graph.nodes) == {0, 1, 2}
        assert graph.has_edge(0, 1)
        assert graph.degree(2) == 0


class TestUnification:
    """Binding unification"""

    def test_variable_is_bound(self):
        inst = load("f2a.alp")
        atom = Atom("R", (Variable("x"), Variable("y")))
        assert unify_binding(atom, inst.target, inst.schema) == {"y": d("5")}

    def test_constant_conflict(self):
        inst = load("f3.alp")
        atom = Atom("R", (Variable("x"), Constant(d("5"))))
        assert unify_binding(atom, inst.target, inst.schema) is None

    def test_other_relation(self):
        inst = load("f2a.alp")
        atom = Atom("S", (Variable("x"), Variable("y")))
        assert unify_binding(atom, inst.target, inst.schema) is None

    def test_certificate_rejects_other_start(self):
        inst = load("f2b.alp")
        q = inst.query("Q")
        verdict = decide_ltr_independent(inst.schema, inst.configuration, q, inst.target)
        other = Access("mR", (d("6"),))
        assert not check_ltr_certificate(
            inst.schema, inst.configuration, q, other, verdict.certificate.path
        )
        assert holds(q, verdict.certificate.path.final)


CRITICAL = """
domain D
relation R(a:D, b:D)
access mR on R inputs(a, b) independent
const 0:D
const 1:D
const 2:D
"""

SMALL_QUERIES = [
    "R(x, y)",
    "R(x, x)",
    "R(0, x)",
    "R(x, 0)",
    "R(0, 0)",
    "R(0, 1)",
    "R(x, y) & R(y, x)",
    "R(x, y) & R(y, z)",
    "R(x, x) & R(x, 0)",
    "R(x, y) & R(y, 0)",
    "R(0, x) & R(x, 1)",
    "R(x, y) & R(x, 1)",
    "R(x, 0) & R(x, 1)",
    "R(x, y) & R(y, y)",
    "R(0, x) & R(x, x)",
    "R(x, 1) & R(1, x)",
    "R(x, y) & R(z, y)",
    "R(x, 2) & R(2, x)",
    "R(x, y) & R(0, y)",
    "R(1, x) & R(x, 2)",
    "R(x, x) & R(y, y)",
    "R(0, 1) & R(1, x)",
    "R(x, y) & R(y, z) & R(z, x)",
    "R(x, 0) & R(0, y) & R(y, x)",
]


def critical(q, t: Fact, universe: list[TypedValue]) -> bool:
    """Some instance of at most |q| facts where adding `t` makes the query true"""
    others = [f for f in (Fact("R", vs) for vs in product(universe, repeat=2)) if f != t]
    for size in range(len(atoms(q)) + 1):
        for facts in combinations(others, size):
            if holds(q, (*facts, t)) and not holds(q, facts):
                return True
    return False


class TestCriticality:
    """Long-term relevance from the constants only is criticality of the tuple"""

    @pytest.mark.slow
    @pytest.mark.parametrize("text", SMALL_QUERIES)
    def test_relevance_is_criticality(self, text):
        inst = parse_problem(CRITICAL + f"query Q = {text}\n").instance
        q = inst.query("Q")
        values = [d(v) for v in "012"]
        # one value per variable beyond the constants
        universe = values + [d(f"f{i}") for i in range(len(variables(q)))]
        for t in product(values, repeat=2):
            access = Access("mR", t)
            verdict = decide_ltr_independent(inst.schema, inst.configuration, q, access)
            expected = critical(q, Fact("R", t), universe)
            assert (verdict.outcome == Outcome.yes) == expected, f"R{t}"
