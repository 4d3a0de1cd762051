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

import json
import pytest
from pathlib import Path
from click.testing import CliRunner

from qrelevance.__main__ import main
from qrelevance.cli import (
    certificate_from_json,
    certificate_to_json,
    digest,
    parse_access,
    parse_problem,
    print_problem,
    summary_rows,
)
from qrelevance.exceptions import ParseError, QRelevanceError
from qrelevance.generators import gen_random_instance
from qrelevance.model import Fact, TypedValue
from qrelevance.relevance import decide_ltr_independent

BASE_TEST_PATH = Path("tests/data")


def data(name):
    return str(BASE_TEST_PATH / name)


def run(*args, **kwargs):
    return CliRunner().invoke(main, [str(a) for a in args], **kwargs)


def verdict(*args, **kwargs):
    result = run(*args, "-q", **kwargs)
    return result, json.loads(result.stdout)


class TestParser:
    """Problem files"""

    def test_bank(self):
        problem = parse_problem((BASE_TEST_PATH / "bank.alp").read_text())
        inst = problem.instance
        assert len(inst.schema.relations) == 4
        assert inst.target.method == "EmpManAcc"
        assert TypedValue("loan officer", "Title") in inst.configuration.constants
        assert "relation:Employee" in problem.spans

    def test_arity_error_position(self):
        with pytest.raises(ParseError) as e:
            parse_problem((BASE_TEST_PATH / "bad_arity.alp").read_text())
        assert e.value.line == 4
        assert "arity" in str(e.value)

    def test_every_error_is_reported(self):
        text = "domain D\nrelation R(a:E)\naccess m on T inputs() independent\n"
        with pytest.raises(ParseError) as e:
            parse_problem(text)
        assert len(e.value.diagnostics) == 2

    def test_syntax_error(self):
        with pytest.raises(ParseError):
            parse_problem("domain D\nrelation R(a:D\n")

    def test_query_constants(self):
        text = "domain D\nrelation R(a:D)\nquery Q = R(7)\n"
        with pytest.raises(ParseError):
            parse_problem(text)
        inst = parse_problem(text, admit_query_constants=True).instance
        assert TypedValue("7", "D") in inst.configuration.constants

    def test_access(self):
        inst = parse_problem((BASE_TEST_PATH / "f2a.alp").read_text()).instance
        assert parse_access("R(?, 5) via mR", inst.schema) == inst.target
        with pytest.raises(ParseError):
            parse_access("R(5, ?) via mR", inst.schema)

    @pytest.mark.parametrize("name", ["bank.alp", "f1.alp", "f2a.alp", "f3.alp", "f4.alp"])
    def test_printed_problem_is_equivalent(self, name):
        inst = parse_problem((BASE_TEST_PATH / name).read_text()).instance
        assert parse_problem(print_problem(inst)).instance == inst
        assert digest(parse_problem(print_problem(inst)).instance) == digest(inst)

    @pytest.mark.parametrize("seed", range(5))
    def test_printed_random_problem(self, seed):
        inst = gen_random_instance(seed)
        assert parse_problem(print_problem(inst)).instance == inst


class TestSerialization:
    """JSON certificates"""

    def test_guess_certificate(self):
        inst = parse_problem((BASE_TEST_PATH / "f2b.alp").read_text()).instance
        result = decide_ltr_independent(
            inst.schema, inst.configuration, inst.query("Q"), inst.target
        )
        encoded = certificate_to_json(result.certificate)
        assert encoded["kind"] == "guess"
        decoded = certificate_from_json(encoded, inst.configuration, inst.schema)
        assert decoded == result.certificate.path

    def test_response(self):
        inst = parse_problem((BASE_TEST_PATH / "f4.alp").read_text()).instance
        response = frozenset({Fact("S", (TypedValue("0", "D"),))})
        encoded = certificate_to_json(response)
        assert encoded == {"kind": "response", "facts": [{"relation": "S", "values": ["0"]}]}
        assert certificate_from_json(encoded, inst.configuration, inst.schema) == response

    def test_homomorphism_is_not_checkable(self):
        inst = parse_problem((BASE_TEST_PATH / "f4.alp").read_text()).instance
        with pytest.raises(QRelevanceError):
            certificate_from_json({"kind": "homomorphism"}, inst.configuration, inst.schema)

    def test_summary(self):
        rows = dict(summary_rows({"command": "ir", "result": "yes"}))
        assert rows == {"Command": "ir", "Result": "yes"}


class TestCommands:
    """Command line verdicts and exit codes"""

    def test_eval(self):
        result, payload = verdict("eval", data("f4.alp"))
        assert result.exit_code == 0
        assert payload["result"] == "no"
        assert payload["command"] == "eval"
        assert set(payload["stats"]) == {"nodes", "millis", "exhaustive", "cutoffs"}

    def test_certain(self):
        result, payload = verdict("certain", data("f2a.alp"))
        assert payload["result"] == "no"

    def test_ir(self):
        result, payload = verdict("ir", data("f4.alp"), "--rewriting")
        assert result.exit_code == 0
        assert payload["result"] == "yes"
        assert payload["certificate"]["kind"] == "response"
        assert payload["access"] == "S(0) via mS"
        assert "rewriting" in payload

    @pytest.mark.parametrize(
        "name, expected", [("f2a.alp", "no"), ("f2b.alp", "yes"), ("f3.alp", "no")]
    )
    def test_ltr_independent(self, name, expected):
        result, payload = verdict("ltr", data(name))
        assert result.exit_code == 0
        assert payload["result"] == expected
        assert payload["algorithm"] == "independent"

    def test_ltr_dependent(self):
        result, payload = verdict("ltr", data("f1_variant.alp"), "--deterministic")
        assert payload["algorithm"] == "dependent"
        assert payload["result"] == "yes"
        assert payload["certificate"]["kind"] == "path"
        assert payload["stats"]["millis"] == 0
        assert payload["budgets"] is not None

    def test_ltr_explicit_access(self):
        result, payload = verdict("ltr", data("f2b.alp"), "--access", "R(?, 6) via mR")
        assert payload["access"] == "R(?, 6) via mR"

    def test_ltr_single_occurrence_rejected(self):
        assert run("ltr", data("f3.alp"), "-a", "single", "-q").exit_code == 2

    def test_contain(self):
        result, payload = verdict("contain", data("f1.alp"))
        assert result.exit_code == 0
        assert payload["result"] == "yes"
        assert payload["stats"]["exhaustive"]

        result, payload = verdict("contain", data("f1.alp"), "--q1", "Q2", "--q2", "Q1")
        assert payload["result"] == "no"
        assert [s["method"] for s in payload["certificate"]["steps"]] == ["mS"]

    def test_contain_out_of_budget(self):
        budget = ["--budget-facts", 0, "--budget-fresh", 0, "--budget-depth", 0]
        result, payload = verdict("contain", data("f1.alp"), *budget)
        assert result.exit_code == 1
        assert payload["result"] == "unknown_within_budget"

    def test_classic_contain(self):
        result, payload = verdict("classic-contain", data("f1.alp"))
        assert payload["result"] == "no"

    def test_invalid_input(self):
        assert run("eval", data("bad_arity.alp"), "-q").exit_code == 2
        assert run("eval", data("f1.alp"), "--query", "Nope", "-q").exit_code == 2
        assert run("ir", data("f1.alp"), "--query", "Q1", "-q").exit_code == 2

    def test_stdin(self):
        text = (BASE_TEST_PATH / "f2b.alp").read_text()
        result, payload = verdict("ltr", "-", input=text)
        assert payload["result"] == "yes"

    def test_check_certificate(self, tmp_path):
        _, payload = verdict("ltr", data("f2b.alp"))
        saved = tmp_path / "verdict.json"
        saved.write_text(json.dumps(payload))
        result, checked = verdict("check-certificate", data("f2b.alp"), saved)
        assert checked["result"] == "yes"
        assert checked["checked"] == "ltr"

        _, payload = verdict("ltr", data("f2a.alp"))
        saved.write_text(json.dumps(payload))
        assert run("check-certificate", data("f2a.alp"), saved, "-q").exit_code == 2


class TestProblemCommands:
    """Reductions, generators and oracles"""

    @pytest.mark.parametrize(
        "args",
        [
            ("reduce", "ltr-to-containment", data("f2a.alp")),
            ("reduce", "containment-to-ltr", data("f1.alp")),
            ("reduce", "containment-to-ltr", data("f1.alp"), "--lang", "cq"),
            ("reduce", "config-to-cm", data("f1.alp")),
            ("gen", "tiling-grid", "--n", 1, "--tiles", 2),
            ("gen", "tiling-corridor", "--n", 2, "--h", "none"),
            ("gen", "random", "--seed", 7),
        ],
    )
    def test_output_is_a_problem(self, args):
        result = run(*args)
        assert result.exit_code == 0
        parse_problem(result.stdout)

    def test_random_is_reproducible(self):
        assert run("gen", "random", "--seed", 3).stdout == run("gen", "random", "--seed", 3).stdout

    def test_bad_tile_pairs(self):
        assert run("gen", "tiling-grid", "--h", "t1t2").exit_code == 2

    def test_pipeline(self):
        generated = run("gen", "tiling-corridor", "--n", 2).stdout
        result, payload = verdict("contain", "-", input=generated)
        assert payload["result"] == "no"
        assert payload["certificate"]["steps"] == []

    def test_documented_pipeline(self):
        assert "qrelevance gen tiling-grid --n 1 --tiles 1 | qrelevance contain -" in main.help
        generated = run("gen", "tiling-grid", "--n", 1, "--tiles", 1).stdout
        result, payload = verdict("contain", "-", input=generated)
        assert result.exit_code == 0
        assert payload["result"] == "no"
        assert len(payload["certificate"]["steps"]) == 2

    @pytest.mark.parametrize(
        "args, expected",
        [
            (("contain", data("f1.alp")), "yes"),
            (("contain", data("f1.alp"), "--q1", "Q2", "--q2", "Q1"), "no"),
            (("ltr", data("f2b.alp")), "yes"),
            (("ltr", data("f2a.alp")), "no"),
            (("ir", data("f4.alp")), "yes"),
            (("certain", data("f2a.alp")), "no"),
        ],
    )
    def test_oracle(self, args, expected):
        result, payload = verdict("oracle", *args)
        assert payload["result"] == expected
        assert payload["limits"]["max_fresh"] == 1

    def test_reachable(self):
        result, payload = verdict("oracle", "reachable", data("f1.alp"), "--max-path-length", 2)
        assert len(payload["configurations"]) == 3

    def test_fuzz(self):
        result = run("fuzz", "--check", "certain", "--runs", 5, "--relations", 2, "-q")
        payload = json.loads(result.stdout)
        assert result.exit_code == 0
        assert payload["runs"] == 5
        assert payload["result"] == "yes"
        assert payload["agreements"] + payload["skipped"] == 5
