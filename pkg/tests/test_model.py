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
from qrelevance.exceptions import SchemaError, TypingError, UnknownMethodError
from qrelevance.model import (
    Access,
    AccessMethod,
    Attribute,
    Configuration,
    Fact,
    FreshValues,
    Path as AccessPath,
    Relation,
    Schema,
    Step,
    TypedValue,
    apply_response,
    attrs_of,
    is_well_formed,
    truncate_path,
    validate_path,
)
from qrelevance.types import AccessMode


BASE_TEST_PATH = Path("tests/data")


def load(name: str):
    return parse_problem((BASE_TEST_PATH / name).read_text()).instance


def d(token: str) -> TypedValue:
    return TypedValue(token, "D")


class TestSchema:
    """Schema construction checks"""

    def test_undeclared_domain(self):
        with pytest.raises(SchemaError):
            Schema(("D",), (Relation("R", (Attribute("a", "E"),)),))

    def test_duplicate_relation(self):
        rel = Relation("R", (Attribute("a", "D"),))
        with pytest.raises(SchemaError):
            Schema(("D",), (rel, rel))

    def test_foreign_input(self):
        rel = Relation("R", (Attribute("a", "D"),))
        with pytest.raises(SchemaError):
            Schema(("D",), (rel,), (AccessMethod("m", "R", ("b",)),))

    def test_positions(self):
        inst = load("f2a.alp")
        schema = inst.schema
        assert schema.input_positions("mR") == (1,)
        assert schema.output_positions("mR") == (0,)
        assert not schema.is_boolean("mR")
        assert schema.all_independent
        assert load("f4.alp").schema.is_boolean("mS")

    def test_free_access(self):
        schema = load("f1.alp").schema
        assert schema.is_free("mS")
        assert not schema.is_free("mR")
        assert schema.method("mR").mode == AccessMode.dependent
        assert schema.dependent_positions("R") == {0}

    def test_unknown_method(self):
        with pytest.raises(UnknownMethodError):
            load("f1.alp").schema.method("mT")

    def test_attribute_names(self):
        rel = load("f2a.alp").schema.relation("R")
        assert attrs_of(rel) == [a.name for a in rel.attributes]
        assert attrs_of(Relation("T", (Attribute("x", "D"), Attribute("y", "D")))) == ["x", "y"]

    def test_typed_values_differ_by_domain(self):
        assert TypedValue("1", "D") != TypedValue("1", "E")


class TestConfiguration:
    """Active domain and well-formedness of accesses"""

    def test_adom(self):
        conf = load("f2a.alp").configuration
        assert conf.adom == {d("3"), d("5")}

    def test_adom_counts_constants(self):
        conf = Configuration(frozenset(), frozenset([d("7")]))
        assert conf.adom_of("D") == [d("7")]

    def test_check_rejects_ill_typed_fact(self):
        schema = load("f1.alp").schema
        conf = Configuration(frozenset([Fact("R", (d("1"), d("2")))]))
        with pytest.raises(TypingError):
            conf.check(schema)

    def test_dependent_binding_unavailable(self):
        inst = load("f1.alp")
        assert not is_well_formed(Access("mR", (d("v"),)), inst.configuration, inst.schema)

    def test_free_access_always_available(self):
        inst = load("f1.alp")
        assert is_well_formed(Access("mS"), inst.configuration, inst.schema)

    def test_dependent_binding_available(self):
        inst = load("f1.alp")
        conf = Configuration(frozenset([Fact("S", (d("v"),))]))
        assert is_well_formed(Access("mR", (d("v"),)), conf, inst.schema)

    def test_ill_typed_binding(self):
        inst = load("f1.alp")
        with pytest.raises(TypingError):
            is_well_formed(Access("mR", (TypedValue("v", "E"),)), inst.configuration, inst.schema)

    def test_from_mapping(self):
        schema = load("f2a.alp").schema
        assert Access.from_mapping(schema, "mR", {"b": d("5")}) == Access("mR", (d("5"),))
        with pytest.raises(TypingError):
            Access.from_mapping(schema, "mR", {"a": d("5")})


class TestPaths:
    """Responses, path validation and truncation"""

    def test_apply_response(self):
        schema = load("f1.alp").schema
        conf = Configuration(frozenset([Fact("S", (d("v"),))]))
        after = apply_response(conf, Access("mR", (d("v"),)), [Fact("R", (d("v"),))], schema)
        assert after.facts == {Fact("S", (d("v"),)), Fact("R", (d("v"),))}
        assert conf.issubset(after)

    def test_response_disagreeing_with_binding(self):
        schema = load("f1.alp").schema
        with pytest.raises(TypingError):
            apply_response(
                Configuration(), Access("mR", (d("v"),)), [Fact("R", (d("w"),))], schema
            )

    def test_response_on_other_relation(self):
        schema = load("f1.alp").schema
        with pytest.raises(TypingError):
            apply_response(Configuration(), Access("mS"), [Fact("R", (d("w"),))], schema)

    def test_valid_path(self):
        inst = load("f1.alp")
        path = AccessPath(
            inst.configuration,
            (
                Step(Access("mS"), frozenset([Fact("S", (d("v"),))])),
                Step(Access("mR", (d("v"),)), frozenset([Fact("R", (d("v"),))])),
            ),
        )
        assert validate_path(path, inst.schema)
        assert path.final.facts == {Fact("S", (d("v"),)), Fact("R", (d("v"),))}
        assert len(list(path.configurations())) == 3

    def test_unavailable_binding_in_path(self):
        inst = load("f1.alp")
        path = AccessPath(
            inst.configuration,
            (Step(Access("mR", (d("v"),)), frozenset([Fact("R", (d("v"),))])),),
        )
        diagnostic = validate_path(path, inst.schema)
        assert not diagnostic
        assert diagnostic.step == 0

    def test_truncation_drops_dependent_steps(self):
        inst = load("f1.alp")
        path = AccessPath(
            inst.configuration,
            (
                Step(Access("mS"), frozenset([Fact("S", (d("v"),))])),
                Step(Access("mR", (d("v"),)), frozenset([Fact("R", (d("v"),))])),
            ),
        )
        truncated = truncate_path(path, inst.schema)
        assert truncated.steps == ()
        assert truncated.final.facts <= path.final.facts

    def test_truncation_keeps_independent_steps(self):
        inst = load("f2b.alp")
        first = Step(inst.target, frozenset([Fact("R", (d("1"), d("5")))]))
        second = Step(Access("mS", (d("5"),)), frozenset([Fact("S", (d("5"), d("2")))]))
        path = AccessPath(inst.configuration, (first, second))
        assert truncate_path(path, inst.schema).steps == (second,)


class TestFreshValues:
    """Canonical fresh values"""

    def test_avoids_taken_tokens(self):
        fresh = FreshValues([TypedValue("fD0", "D")])
        value = fresh("D", 0)
        assert value != TypedValue("fD0", "D")
        assert value.domain == "D"
        assert fresh("D", 0) == value
        assert fresh.is_fresh(value)

    def test_distinct_indices(self):
        fresh = FreshValues()
        assert fresh("D", 0) != fresh("D", 1)
