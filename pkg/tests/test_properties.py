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

from hypothesis import assume, given, settings, strategies as st

from qrelevance.generators import RandomLimits, gen_random_instance
from qrelevance.model import FreshValues, TypedValue, truncate_path
from qrelevance.query import And, classical_contains, disjoin, dnf, holds
from qrelevance.relevance import (
    check_ir_certificate,
    check_ltr_certificate,
    decide_ir,
    decide_ltr_independent,
)
from qrelevance.types import Outcome

SMALL = RandomLimits(relations=2, arity=2, domains=2, facts=3, atoms=3, values=2)
INDEPENDENT = RandomLimits(
    relations=2, arity=2, domains=1, facts=2, atoms=3, values=2, dependent_ratio=0.0
)

seeds = st.integers(min_value=0, max_value=10_000)


class TestQueryProperties:
    """Evaluation invariants on random instances"""

    @settings(max_examples=40, deadline=None)
    @given(seeds)
    def test_monotone(self, seed):
        inst = gen_random_instance(seed, SMALL)
        q = inst.query("Q1")
        facts = sorted(inst.configuration.facts)
        for dropped in facts:
            if holds(q, [f for f in facts if f != dropped]):
                assert holds(q, facts)

    @settings(max_examples=40, deadline=None)
    @given(seeds)
    def test_disjunctive_normal_form(self, seed):
        inst = gen_random_instance(seed, SMALL)
        q = inst.query("Q1")
        expected = any(holds(And(d), inst.configuration) for d in dnf(q) if d)
        assert holds(q, inst.configuration) == expected

    @settings(max_examples=40, deadline=None)
    @given(seeds)
    def test_disjunction(self, seed):
        inst = gen_random_instance(seed, SMALL)
        q1, q2 = inst.query("Q1"), inst.query("Q2")
        conf = inst.configuration
        assert holds(disjoin(q1, q2), conf) == (holds(q1, conf) or holds(q2, conf))
        assert classical_contains(q1, disjoin(q1, q2))


class TestCertificateProperties:
    """Positive verdicts carry certificates that check"""

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_ir(self, seed):
        inst = gen_random_instance(seed, SMALL)
        assume(inst.target is not None)
        schema, conf, q = inst.schema, inst.configuration, inst.query("Q1")
        verdict = decide_ir(schema, conf, q, inst.target)
        if verdict.outcome == Outcome.yes:
            assert check_ir_certificate(schema, conf, q, inst.target, verdict.certificate)

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_ltr(self, seed):
        inst = gen_random_instance(seed, INDEPENDENT)
        assume(inst.target is not None)
        schema, conf, q = inst.schema, inst.configuration, inst.query("Q1")
        verdict = decide_ltr_independent(schema, conf, q, inst.target)
        if verdict.outcome == Outcome.yes:
            path = verdict.certificate.path
            assert check_ltr_certificate(schema, conf, q, inst.target, path)
        else:
            assert verdict.outcome == Outcome.no

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_immediate_implies_long_term(self, seed):
        inst = gen_random_instance(seed, INDEPENDENT)
        assume(inst.target is not None)
        schema, conf, q = inst.schema, inst.configuration, inst.query("Q1")
        if decide_ir(schema, conf, q, inst.target).outcome == Outcome.yes:
            assert decide_ltr_independent(schema, conf, q, inst.target).outcome == Outcome.yes

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_truncation_is_a_subset(self, seed):
        inst = gen_random_instance(seed, INDEPENDENT)
        assume(inst.target is not None)
        schema, conf, q = inst.schema, inst.configuration, inst.query("Q1")
        verdict = decide_ltr_independent(schema, conf, q, inst.target)
        if verdict.outcome == Outcome.yes:
            path = verdict.certificate.path
            assert truncate_path(path, schema).final.facts <= path.final.facts


class TestFreshValues:
    """Fresh value generation"""

    @given(
        st.sets(st.text(alphabet="fD0123_", min_size=1, max_size=4), max_size=8),
        st.integers(min_value=0, max_value=20),
    )
    def test_never_collides(self, tokens, index):
        avoid = {TypedValue(t, "D") for t in tokens}
        fresh = FreshValues(avoid)
        value = fresh("D", index)
        assert value not in avoid
        assert value.domain == "D"
        assert fresh("D", index) == value
