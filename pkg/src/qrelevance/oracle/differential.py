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

"""Differential comparisons

One decision procedure against its brute-force oracle on one instance. A
comparison is skipped when the instance is outside the precondition of the
procedure, or when the evidence of the procedure does not fit the oracle
limits while the oracle found nothing.
"""

from __future__ import annotations
from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING

from qrelevance.exceptions import QueryError, UnsupportedFeatureException
from qrelevance.oracle.brute_force import (
    OracleLimits,
    oracle_certain,
    oracle_containment,
    oracle_ir,
    oracle_ltr,
)
from qrelevance.query import certain, constants, is_cq
from qrelevance.relevance import (
    check_containment_certificate,
    check_ir_certificate,
    check_ltr_certificate,
    decide_ir,
    decide_ltr_independent,
    decide_ltr_single_occurrence,
)
from qrelevance.types import Outcome
from qrelevance.reductions import ltr_via_containment_cq
from qrelevance.witness import decide_containment_bounded, decide_ltr_dependent_bounded

if TYPE_CHECKING:
    from collections.abc import Iterable
    from qrelevance.model import Fact, Path, ProblemInstance, TypedValue
    from qrelevance.witness import Budget

CHECKS = ("ir", "ltr", "dependent", "via-containment", "single", "contain", "certain")


@dataclass(frozen=True)
class Comparison:
    check: str
    main: Outcome | None = None
    oracle: bool | None = None
    agree: bool | None = None  #: None when the comparison was skipped
    reason: str = ""


def fresh_per_domain(facts: Iterable[Fact], known: set[TypedValue]) -> int:
    """Largest number of values outside `known` used in one domain"""
    unknown = {v for f in facts for v in f.values if v not in known}
    counts = Counter(v.domain for v in unknown)
    return max(counts.values(), default=0)


def path_fits(path: Path, limits: OracleLimits, known: set[TypedValue], *, first: bool) -> bool:
    """
    Whether the oracles explore this path: the first response is bounded by
    `max_response_size` when `first` is set, every other response is a single
    fact, and the path is short enough and uses few enough fresh values
    """

    steps = list(path.steps)
    facts = [f for s in steps for f in s.response]
    if len(steps) > limits.max_path_length:
        return False
    if first and steps and len(steps[0].response) > limits.max_response_size:
        return False
    if any(len(s.response) > 1 for s in steps[1 if first else 0 :]):
        return False
    return fresh_per_domain(facts, known) <= limits.max_fresh


def _verdict(
    check: str, oracle: bool, main: Outcome, fits: bool, valid: bool = True
) -> Comparison:
    if not valid:
        return Comparison(check, main, oracle, False, "invalid certificate")
    if oracle and main != Outcome.yes:
        return Comparison(check, main, oracle, False, "missed witness")
    if main == Outcome.yes and not oracle:
        if fits:
            return Comparison(check, main, oracle, False, "witness unseen by the oracle")
        return Comparison(check, main, oracle, None, "witness beyond the oracle limits")
    return Comparison(check, main, oracle, True)


def compare(
    check: str,
    inst: ProblemInstance,
    limits: OracleLimits | None = None,
    budget: Budget | None = None,
) -> Comparison:
    """
    Run one procedure and its oracle on an instance with the queries `Q1`
    and `Q2` (`Q1` is the query of the single-query checks)

    :param check: one of :py:data:`CHECKS`
    :param inst: the instance
    :param limits: oracle limits
    :param budget: budget of the containment search
    :return: the comparison
    """

    limits = limits or OracleLimits()
    schema, conf = inst.schema, inst.configuration
    q = inst.boolean_query("Q1")
    access = inst.target
    known = set(conf.adom) | constants(q)

    if check == "certain":
        main, found = certain(q, conf), oracle_certain(schema, conf, q, limits)
        return Comparison(check, Outcome.yes if main else Outcome.no, found, main == found)

    if check == "contain":
        q2 = inst.boolean_query("Q2")
        verdict = decide_containment_bounded(schema, conf, q, q2, budget)
        if verdict.outcome == Outcome.unknown_within_budget:
            return Comparison(check, verdict.outcome, None, None, "undecided within budget")
        # non-containment is the witnessed side
        outcome = Outcome.yes if verdict.outcome == Outcome.no else Outcome.no
        found = not oracle_containment(schema, conf, q, q2, limits)
        path = verdict.certificate
        fits = path is not None and path_fits(path, limits, known | constants(q2), first=False)
        valid = path is None or check_containment_certificate(schema, conf, q, q2, path)
        return _verdict(check, found, outcome, fits, valid)

    if access is None:
        return Comparison(check, reason="no target access")
    known |= set(access.binding)

    if check == "ir":
        verdict = decide_ir(schema, conf, q, access)
        response = verdict.certificate
        fits = response is not None and len(response) <= limits.max_response_size
        fits = fits and fresh_per_domain(response, known) <= limits.max_fresh
        valid = response is None or check_ir_certificate(schema, conf, q, access, response)
        found = oracle_ir(schema, conf, q, access, limits)
        return _verdict(check, found, verdict.outcome, fits, valid)

    if check in ("dependent", "via-containment"):
        if check == "dependent":
            verdict = decide_ltr_dependent_bounded(schema, conf, q, access, budget)
        elif not is_cq(q):
            return Comparison(check, reason="not a conjunctive query")
        else:
            verdict = ltr_via_containment_cq(schema, conf, q, access, budget=budget)
        if verdict.outcome == Outcome.unknown_within_budget:
            return Comparison(check, verdict.outcome, None, None, "undecided within budget")
        path = verdict.certificate
        fits = path is not None and path_fits(path, limits, known, first=True)
        valid = path is None or check_ltr_certificate(schema, conf, q, access, path)
        found = oracle_ltr(schema, conf, q, access, limits)
        return _verdict(check, found, verdict.outcome, fits, valid)

    if not schema.all_independent:
        return Comparison(check, reason="dependent access methods")

    if check == "single":
        try:
            fast = decide_ltr_single_occurrence(schema, conf, q, access)
        except (QueryError, UnsupportedFeatureException) as e:
            return Comparison(check, reason=str(e))
        exact = decide_ltr_independent(schema, conf, q, access)
        agree = fast.outcome == exact.outcome
        return Comparison(check, fast.outcome, exact.outcome == Outcome.yes, agree)

    if check == "ltr":
        verdict = decide_ltr_independent(schema, conf, q, access)
        path = verdict.certificate.path if verdict.certificate is not None else None
        fits = path is not None and path_fits(path, limits, known, first=True)
        valid = path is None or check_ltr_certificate(schema, conf, q, access, path)
        found = oracle_ltr(schema, conf, q, access, limits)
        return _verdict(check, found, verdict.outcome, fits, valid)

    raise ValueError(f"Unknown check '{check}'")
