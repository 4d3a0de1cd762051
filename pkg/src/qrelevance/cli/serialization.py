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

"""JSON verdicts

Encoding of verdicts and certificates as JSON objects, and decoding of the
certificates so that a saved verdict can be checked again.
"""

from __future__ import annotations
import json
from typing import Any, TYPE_CHECKING

from qrelevance.cli.printer import digest, format_fact
from qrelevance.exceptions import QRelevanceError, TypingError
from qrelevance.model import Access, Fact, Path, Step, TypedValue
from qrelevance.query import Homomorphism
from qrelevance.relevance import GuessCertificate

if TYPE_CHECKING:
    from qrelevance.model import Configuration, ProblemInstance, Schema
    from qrelevance.relevance import Certificate, Verdict
    from qrelevance.witness import Budget


def fact_to_json(fact: Fact) -> dict[str, Any]:
    return {"relation": fact.relation, "values": [v.token for v in fact.values]}


def path_to_json(path: Path) -> list[dict[str, Any]]:
    return [
        {
            "method": step.access.method,
            "binding": [v.token for v in step.access.binding],
            "response": [fact_to_json(f) for f in sorted(step.response)],
        }
        for step in path.steps
    ]


def certificate_to_json(certificate: Certificate | None) -> dict[str, Any] | None:
    """
    :param certificate: the evidence attached to a verdict
    :return: an object whose `kind` is response, path, homomorphism or guess
    """

    if certificate is None:
        return None
    if isinstance(certificate, Path):
        return {"kind": "path", "steps": path_to_json(certificate)}
    if isinstance(certificate, Homomorphism):
        return {
            "kind": "homomorphism",
            "assignment": {k: v.token for k, v in sorted(certificate.assignment.items())},
            "disjunct": [str(a) for a in certificate.disjunct],
        }
    if isinstance(certificate, GuessCertificate):
        return {
            "kind": "guess",
            "disjunct": [str(a) for a in certificate.guess.disjunct],
            "classes": [c.name for c in certificate.guess.classes],
            "steps": path_to_json(certificate.path),
        }
    return {"kind": "response", "facts": [fact_to_json(f) for f in sorted(certificate)]}


def verdict_to_json(
    command: str,
    inst: ProblemInstance,
    verdict: Verdict,
    budget: Budget | None = None,
    **extra: Any,
) -> dict[str, Any]:
    stats = verdict.stats
    payload = {
        "command": command,
        "digest": digest(inst),
        "result": verdict.outcome.name,
        "certificate": certificate_to_json(verdict.certificate),
        "budgets": budget.to_json() if budget is not None else None,
        "stats": {
            "nodes": stats.nodes,
            "millis": round(stats.millis, 3),
            "exhaustive": stats.exhaustive,
            "cutoffs": sorted(c.name for c in stats.cutoffs),
        },
    }
    payload.update(extra)
    return payload


def dumps(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _typed(schema: Schema, relation: str, positions, tokens: list[str]) -> tuple[TypedValue, ...]:
    rel = schema.relation(relation)
    if len(positions) != len(tokens):
        raise TypingError(f"Wrong number of values for {relation}")
    return tuple(TypedValue(t, rel.attributes[p].domain) for p, t in zip(positions, tokens))


def fact_from_json(data: dict[str, Any], schema: Schema) -> Fact:
    relation = data["relation"]
    arity = schema.relation(relation).arity
    return Fact(relation, _typed(schema, relation, range(arity), data["values"]))


def path_from_json(steps: list[dict[str, Any]], conf: Configuration, schema: Schema) -> Path:
    """
    Rebuild a path from its JSON steps, starting from `conf`

    :raises QRelevanceError: on malformed steps
    """

    decoded = []
    for step in steps:
        method = schema.method(step["method"])
        binding = _typed(
            schema, method.relation, schema.input_positions(method.name), step["binding"]
        )
        response = frozenset(fact_from_json(f, schema) for f in step["response"])
        decoded.append(Step(Access(method.name, binding), response))
    return Path(conf, tuple(decoded))


def certificate_from_json(
    data: dict[str, Any], conf: Configuration, schema: Schema
) -> Path | frozenset[Fact]:
    """
    Decode the checkable part of a certificate: the path of path and guess
    certificates, the facts of a response

    :raises QRelevanceError: for homomorphisms and malformed certificates
    """

    try:
        kind = data["kind"]
        if kind in ("path", "guess"):
            return path_from_json(data["steps"], conf, schema)
        if kind == "response":
            return frozenset(fact_from_json(f, schema) for f in data["facts"])
    except (KeyError, TypeError) as e:
        raise QRelevanceError(f"Malformed certificate: {e}") from None
    raise QRelevanceError(f"Cannot check a certificate of kind '{kind}'")


def summary_rows(payload: dict[str, Any]) -> list[tuple[str, str]]:
    """Human readable lines of a JSON verdict"""
    rows = [("Command", payload["command"]), ("Result", str(payload.get("result")))]
    stats = payload.get("stats")
    if stats:
        rows.append(("Nodes", str(stats["nodes"])))
        rows.append(("Time", f"{stats['millis']:.1f} ms"))
        rows.append(("Exhaustive", str(stats["exhaustive"])))
    certificate = payload.get("certificate")
    if certificate and certificate.get("kind") in ("path", "guess"):
        for i, step in enumerate(certificate["steps"]):
            facts = ", ".join(
                format_fact(Fact(f["relation"], tuple(TypedValue(t, "") for t in f["values"])))
                for f in step["response"]
            )
            binding = ", ".join(step["binding"])
            rows.append((f"Step {i}", f"{step['method']}({binding}) -> {{{facts}}}"))
    return rows
