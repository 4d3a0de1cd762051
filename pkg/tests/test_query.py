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
from qrelevance.exceptions import QueryError
from qrelevance.model import Configuration, Fact, TypedValue
from qrelevance.query import (
    FALSE,
    TRUE,
    And,
    Atom,
    Constant,
    Or,
    Variable,
    certain,
    classical_contains,
    conjoin,
    disjoin,
    dnf,
    evaluate,
    format_token,
    holds,
    is_cq,
    simplify,
    size,
    substitute,
    to_dnf,
    validate_query,
    variable_domains,
    variables,
)
from qrelevance.types import DiagnosticKind


BASE_TEST_PATH = Path("tests/data")


def load(name: str):
    return parse_problem((BASE_TEST_PATH / name).read_text()).instance


def d(token: str) -> TypedValue:
    return TypedValue(token, "D")


def atom(relation: str, *terms: str | int) -> Atom:
    return Atom(
        relation,
        tuple(Constant(d(str(t))) if isinstance(t, int) else Variable(t) for t in terms),
    )


class TestStructure:
    """Connectives, DNF and textual form"""

    def test_conjoin_flattens(self):
        q = conjoin(And((atom("R", "x"), atom("S", "x"))), atom("T", "x"), TRUE)
        assert q == And((atom("R", "x"), atom("S", "x"), atom("T", "x")))

    def test_conjoin_absorbs_false(self):
        assert conjoin(atom("R", "x"), FALSE) == FALSE

    def test_disjoin_absorbs_true(self):
        assert disjoin(atom("R", "x"), TRUE) == TRUE

    def test_single_child_is_unwrapped(self):
        assert conjoin(atom("R", "x")) == atom("R", "x")
        assert simplify(Or((And((atom("R", "x"),)),))) == atom("R", "x")

    def test_dnf(self):
        q = And((Or((atom("R", "x"), atom("S", "x"))), atom("T", "x")))
        assert dnf(q) == (
            (atom("R", "x"), atom("T", "x")),
            (atom("S", "x"), atom("T", "x")),
        )
        assert not is_cq(q)
        assert size(q) == 5

    def test_dnf_merges_duplicates(self):
        q = Or((atom("R", "x"), atom("R", "x")))
        assert dnf(q) == ((atom("R", "x"),),)

    def test_dnf_of_constants(self):
        assert dnf(TRUE) == ((),)
        assert dnf(FALSE) == ()

    def test_to_dnf_keeps_conjunctions(self):
        q = And((atom("R", "x"), atom("S", "x")))
        assert to_dnf(q) == [q]

    def test_text(self):
        q = And((Or((atom("R", "x"), atom("S", "x"))), atom("T", "x", 5)))
        assert str(q) == "(R(x) | S(x)) & T(x, 5)"
        assert str(TRUE) == "true"
        assert str(FALSE) == "false"

    def test_variables_in_order(self):
        q = And((atom("R", "y", "x"), atom("S", "x", "z")))
        assert variables(q) == ["y", "x", "z"]

    def test_substitute(self):
        q = substitute(atom("R", "x", "y"), {"x": Constant(d("1"))})
        assert q == atom("R", 1, "y")

    @pytest.mark.parametrize(
        "token, in_query, expected",
        [
            ("12", True, "12"),
            ("abc", False, "abc"),
            ("abc", True, '"abc"'),
            ("loan officer", False, '"loan officer"'),
            ('a"b', False, '"a\\"b"'),
        ],
    )
    def test_format_token(self, token, in_query, expected):
        assert format_token(token, in_query=in_query) == expected


class TestValidation:
    """Query validation against a schema"""

    def test_valid(self):
        inst = load("f2a.alp")
        assert validate_query(inst.query("Q"), inst.schema, inst.configuration).ok

    def test_unknown_relation_and_arity(self):
        inst = load("f2a.alp")
        q = And((atom("T", "x"), atom("R", "x")))
        kinds = validate_query(q, inst.schema, inst.configuration).kinds()
        assert kinds == {DiagnosticKind.relation, DiagnosticKind.arity}

    def test_constant_not_admitted(self):
        inst = load("f2a.alp")
        q = atom("R", "x", 7)
        diagnostics = validate_query(q, inst.schema, inst.configuration)
        assert diagnostics.kinds() == {DiagnosticKind.constant}
        assert validate_query(q, inst.schema, inst.configuration, admit_constants=True).ok

    def test_domain_clash(self):
        inst = load("bank.alp")
        q = And(
            (
                Atom("Manager", (Variable("x"), Variable("y"))),
                Atom("Approval", (Variable("x"), Variable("z"))),
            )
        )
        kinds = validate_query(q, inst.schema, inst.configuration).kinds()
        assert DiagnosticKind.domain in kinds
        with pytest.raises(QueryError):
            variable_domains(q, inst.schema)


class TestEvaluation:
    """Evaluation, certain answers and classical containment"""

    def test_false_on_missing_subgoal(self):
        inst = load("f2a.alp")
        assert evaluate(inst.query("Q"), inst.configuration) is None

    def test_homomorphism_witness(self):
        inst = load("f2a.alp")
        conf = inst.configuration.with_facts([Fact("S", (d("5"), d("8")))])
        h = evaluate(inst.query("Q"), conf)
        assert h is not None
        assert h.assignment == {"x": d("3"), "z": d("8")}
        assert h.check(conf)
        assert not h.check(inst.configuration)

    def test_disjunction(self):
        conf = Configuration(frozenset([Fact("S", (d("1"),))]))
        q = Or((atom("R", "x"), atom("S", "x")))
        h = evaluate(q, conf)
        assert h is not None and h.disjunct == (atom("S", "x"),)

    def test_shared_variable(self):
        conf = Configuration(frozenset([Fact("R", (d("1"),)), Fact("S", (d("2"),))]))
        assert not holds(And((atom("R", "x"), atom("S", "x"))), conf)
        assert holds(And((atom("R", "x"), atom("S", "y"))), conf)

    def test_truth_constants(self):
        assert holds(TRUE, Configuration())
        assert not holds(FALSE, Configuration())

    def test_certain_is_evaluation(self):
        inst = load("f4.alp")
        assert not certain(inst.query("Q"), inst.configuration)
        assert certain(atom("R", "x", "y"), inst.configuration)

    def test_certain_rejects_non_queries(self):
        with pytest.raises(QueryError):
            certain("R(x)", Configuration())  # type: ignore[arg-type]

    def test_classical_containment(self):
        both = And((atom("R", "x"), atom("S", "x")))
        assert classical_contains(both, atom("R", "y"))
        assert not classical_contains(atom("R", "y"), both)

    def test_classical_containment_of_unrelated_queries(self):
        inst = load("f1.alp")
        assert not classical_contains(inst.query("Q1"), inst.query("Q2"))

    def test_classical_containment_with_disjunction(self):
        q1 = Or((atom("R", "x"), atom("S", "x")))
        assert classical_contains(atom("R", "x"), q1)
        assert not classical_contains(q1, atom("R", "x"))
