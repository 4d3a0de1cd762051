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

"""Containment and long-term relevance reductions

Transformers between containment under access limitations and long-term
relevance, in both directions, plus the gadget that removes the disjunction
they introduce and the determinization of long-term relevance through a
containment procedure.
"""

from __future__ import annotations
import logging
from dataclasses import replace
from typing import TYPE_CHECKING

from qrelevance.exceptions import QueryError
from qrelevance.model import (
    Access,
    AccessMethod,
    Attribute,
    Configuration,
    Fact,
    FreshValues,
    Path,
    Relation,
    Schema,
    Step,
    TypedValue,
    attrs_of,
    check_access,
    is_well_formed,
)
from qrelevance.query import (
    Atom,
    Constant,
    Variable,
    And,
    atoms,
    conjoin,
    constants,
    disjoin,
    evaluate,
    holds,
    is_cq,
    iter_atoms,
    map_atoms,
    rename_variables,
    substitute,
    variable_domains,
    variables,
)
from qrelevance.reductions.gadgets import bool_values, or_facts, pad_values
from qrelevance.relevance import (
    SearchStats,
    Verdict,
    as_constants,
    check_ltr_certificate,
    materialize,
    unify_all,
    unify_binding,
)
from qrelevance.types import AccessMode, Cutoff, Outcome, QueryLanguage
from qrelevance.utils import fresh_name, log_once, powerset
from qrelevance.witness import decide_containment_bounded, generating_domains

if TYPE_CHECKING:
    from qrelevance.model import ProblemInstance
    from qrelevance.query import Query
    from qrelevance.types import ContainmentDecider
    from qrelevance.witness import Budget


def _apart(q: Query, avoid: set[str]) -> Query:
    """Rename the variables of `q` so that none is in `avoid`"""
    taken = set(avoid) | set(variables(q))
    renaming = {}
    for v in variables(q):
        if v in avoid:
            renaming[v] = fresh_name(v, taken)
            taken.add(renaming[v])
    return rename_variables(q, lambda v: renaming.get(v, v))


def _new_names(taken: set[str], *bases: str) -> list[str]:
    names = []
    for base in bases:
        names.append(fresh_name(base, taken))
        taken = taken | {names[-1]}
    return names


def containment_to_ltr(
    inst: ProblemInstance,
    q1: str = "Q1",
    q2: str = "Q2",
    lang: QueryLanguage = QueryLanguage.pq,
) -> ProblemInstance:
    """
    Encode the containment of two queries as the long-term relevance of a
    Boolean access. A new unary relation `A` with an independent Boolean
    method is added and the produced query is ``((A(x)) | q2) & q1``: `q1`
    is contained in `q2` iff the access `A(c)?` is not long-term relevant for
    it. In CQ mode the disjunction is removed with
    :py:func:`encode_disjunction_as_cq`.

    :param inst: instance holding both queries
    :param q1: name of the contained query
    :param q2: name of the containing query
    :param lang: target query language
    :return: instance with the query `Q` and the distinguished access
    :raises QueryError: on non conjunctive input in CQ mode
    """

    if lang == QueryLanguage.cq:
        return encode_disjunction_as_cq(inst, q1, q2)
    left, right = inst.boolean_query(q1), inst.boolean_query(q2)
    right = _apart(right, set(variables(left)))
    unit, a_name, m_name = _new_names(inst.schema.names(), "Unit", "A", "mA")
    schema = inst.schema.extend(
        domains=[unit],
        relations=[Relation(a_name, (Attribute("x", unit),))],
        methods=[AccessMethod(m_name, a_name, ("x",), AccessMode.independent)],
    )
    x = Variable(fresh_name("x", set(variables(left)) | set(variables(right))))
    # the domain is new, so is the constant
    c = TypedValue("c", unit)
    query = conjoin(disjoin(Atom(a_name, (x,)), right), left)
    return replace(
        inst,
        schema=schema,
        configuration=inst.configuration.with_constants([c]),
        queries={"Q": query},
        heads={},
        target=Access(m_name, (c,)),
    )


def _flag_leaks(schema: Schema, conf: Configuration) -> bool:
    """
    True if a value the accesses of the original schema cannot bring may feed
    a dependent input: a new value carried by a zero-flagged fact, or the
    padding value of a domain without known value
    """
    dependent = {
        schema.relation(m.relation).attributes[p].domain
        for m in schema.methods
        if m.is_dependent
        for p in schema.input_positions(m.name)
    }
    if any(not conf.adom_of(d) for d in dependent):
        return True
    return bool(dependent & generating_domains(schema))


def encode_disjunction_as_cq(
    inst: ProblemInstance, q1: str = "Q1", q2: str = "Q2"
) -> ProblemInstance:
    """
    Conjunctive version of :py:func:`containment_to_ltr`. Every relation gets
    an extra place over a new Boolean domain; the known facts carry 1 there
    and one padding fact per relation (and per constant-carrying subgoal of
    `q2`) carries 0. The produced query is
    ``A(b1) & q2(b2) & Or(b1, b2) & q1(b) & P(b)``: the `Or` facts let `q2`
    match the padding exactly when `A(1)` is known, and `P(1)` forces `q1`
    onto real facts.

    The encoding is exact when neither a new value carried by a zero-flagged
    fact nor a new padding value can feed a dependent input; a warning is
    logged otherwise.

    :param inst: instance holding both conjunctive queries
    :param q1: name of the contained query
    :param q2: name of the containing query
    :return: instance with the query `Q` and the distinguished access `A(1)?`
    :raises QueryError: if one of the queries is not conjunctive
    """

    left, right = inst.boolean_query(q1), inst.boolean_query(q2)
    if not (is_cq(left) and is_cq(right)):
        raise QueryError("The disjunction gadget needs two conjunctive queries")
    schema, conf = inst.schema, inst.configuration
    if _flag_leaks(schema, conf):
        log_once(
            logging.WARNING,
            "[!] Unknown values may feed dependent inputs, the CQ encoding may "
            "report spurious relevance",
        )

    taken = schema.names()
    boolean, or_name, p_name, a_name, m_name = _new_names(taken, "Bool", "Or", "P", "A", "mA")
    zero, one = bool_values(boolean)

    flagged = tuple(
        Relation(r.name, r.attributes + (Attribute(fresh_name("flag", attrs_of(r)), boolean),))
        for r in schema.relations
    )
    new_schema = Schema(
        schema.domains + (boolean,),
        flagged
        + (
            Relation(or_name, (Attribute("a", boolean), Attribute("b", boolean))),
            Relation(p_name, (Attribute("b", boolean),)),
            Relation(a_name, (Attribute("b", boolean),)),
        ),
        schema.methods + (AccessMethod(m_name, a_name, ("b",), AccessMode.independent),),
    )

    pads = pad_values(conf, schema.domains)
    facts = {Fact(f.relation, f.values + (one,)) for f in conf.facts}
    for r in schema.relations:
        facts.add(Fact(r.name, tuple(pads[d] for d in r.domains) + (zero,)))
    for atom in iter_atoms(right):
        if any(isinstance(t, Constant) for t in atom.terms):
            domains = schema.relation(atom.relation).domains
            values = tuple(
                t.value if isinstance(t, Constant) else pads[d] for t, d in zip(atom.terms, domains)
            )
            facts.add(Fact(atom.relation, values + (zero,)))
    facts.update(or_facts(or_name, boolean))
    facts.add(Fact(p_name, (one,)))
    facts.add(Fact(a_name, (zero,)))

    right = _apart(right, set(variables(left)))
    used = set(variables(left)) | set(variables(right))
    b1, b2, b = (Variable(fresh_name(n, used)) for n in ("b1", "b2", "b"))

    def flag(q: Query, term: Variable) -> Query:
        return map_atoms(q, lambda _, a: Atom(a.relation, a.terms + (term,)))

    query = conjoin(
        Atom(a_name, (b1,)),
        flag(right, b2),
        Atom(or_name, (b1, b2)),
        flag(left, b),
        Atom(p_name, (b,)),
    )
    return replace(
        inst,
        schema=new_schema,
        configuration=Configuration(frozenset(facts), conf.constants),
        queries={"Q": query},
        heads={},
        target=Access(m_name, (one,)),
    )


def ltr_to_containment(inst: ProblemInstance, query: str = "Q") -> ProblemInstance:
    """
    Encode the long-term relevance of the distinguished access as a
    non-containment. An access-free relation `IsBind` over the input
    attributes holds the binding, and every subgoal ``R(i, o)`` of the accessed
    relation becomes ``R(i, o) | IsBind(i)`` in `Q1`; `Q2` is the original
    query. The access is long-term relevant iff `Q1` is not contained in `Q2`.

    :param inst: instance with a Boolean query and a distinguished access
    :param query: name of the query
    :return: instance with the queries `Q1` and `Q2` and no distinguished access
    :raises QueryError: if the instance has no distinguished access
    """

    access = inst.target
    if access is None:
        raise QueryError("The instance has no distinguished access")
    q = inst.boolean_query(query)
    schema = inst.schema
    check_access(access, schema)
    relation = schema.relation(schema.method(access.method).relation)
    positions = schema.input_positions(access.method)
    is_bind = fresh_name("IsBind", schema.names())

    def widen(_: int, atom: Atom) -> Query:
        if atom.relation != relation.name:
            return atom
        return disjoin(atom, Atom(is_bind, tuple(atom.terms[p] for p in positions)))

    return replace(
        inst,
        schema=schema.extend(
            relations=[Relation(is_bind, tuple(relation.attributes[p] for p in positions))]
        ),
        configuration=inst.configuration.with_facts([Fact(is_bind, access.binding)]),
        queries={"Q1": map_atoms(q, widen), "Q2": q},
        heads={},
        target=None,
    )


def ltr_via_containment_cq(
    schema: Schema,
    conf: Configuration,
    q: Query,
    access: Access,
    decider: ContainmentDecider = decide_containment_bounded,
    budget: Budget | None = None,
) -> Verdict:
    """
    Decide long-term relevance of an access for a conjunctive query with a
    containment procedure. For every non-empty set `W` of subgoals unifying
    with the binding, by increasing size, the decider is asked whether the
    other subgoals (with the binding substituted) are contained in `q`. A
    non-containment witness `p` gives the relevance witness: the access
    returning the image of `W`, followed by `p`.

    Such witnesses never cut their truncation. This is enough when every
    method is independent, or when the access is Boolean and its binding
    already known, since the first response then brings no new value. In any
    other case a path may also use the values of the first response in
    dependent accesses that its truncation cannot perform, so the absence of
    witness only gives `unknown_within_budget` (cut-off `shape`).

    :param schema: the schema
    :param conf: the configuration
    :param q: a conjunctive query
    :param access: the distinguished access
    :param decider: containment procedure
    :param budget: budget handed to the decider
    :return: `yes` with the witnessing path, `unknown_within_budget` if some
        call was undecided or the encoding is not complete for this access,
        `no` otherwise
    :raises QueryError: if the query is not conjunctive
    """

    if not is_cq(q):
        raise QueryError("Relevance through containment needs a conjunctive query")
    check_access(access, schema)
    stats = SearchStats()
    if holds(q, conf) or not is_well_formed(access, conf, schema):
        return Verdict.no(stats)

    subgoals = list(dict.fromkeys(atoms(q)))
    compatible = [i for i, a in enumerate(subgoals) if unify_binding(a, access, schema) is not None]
    domains = variable_domains(q, schema)
    cutoffs: set[Cutoff] = set()
    if not schema.all_independent and not (
        schema.is_boolean(access.method) and set(access.binding) <= conf.adom
    ):
        cutoffs.add(Cutoff.shape)
    for chosen in powerset(compatible, min_size=1):
        sigma = unify_all([subgoals[i] for i in chosen], access, schema)
        if sigma is None:
            continue
        rest = substitute(
            And(tuple(a for i, a in enumerate(subgoals) if i not in chosen)), as_constants(sigma)
        )
        verdict = decider(schema, conf, rest, q, budget)
        stats.nodes += verdict.stats.nodes
        if verdict.outcome == Outcome.unknown_within_budget:
            cutoffs |= verdict.stats.cutoffs
            continue
        if verdict.outcome != Outcome.no:
            continue
        tail = verdict.certificate if isinstance(verdict.certificate, Path) else None
        if tail is None:
            logging.warning("[!] The containment procedure gave no witness path, skipping")
            continue
        h = evaluate(rest, tail.final)
        assert h is not None
        fresh = FreshValues(tail.final.adom | constants(q) | set(access.binding))
        _, first = materialize(
            [subgoals[i] for i in chosen], {**h.assignment, **sigma}, domains, fresh
        )
        path = Path(conf, (Step(access, frozenset(first)), *tail.steps))
        if check_ltr_certificate(schema, conf, q, access, path):
            logging.debug(f"Relevant through the containment of {rest} in the query")
            return Verdict.yes(path, stats)
        logging.debug(f"Discarding the witness built for {len(chosen)} subgoal(s)")
    if cutoffs:
        for cutoff in sorted(cutoffs):
            stats.cut(cutoff)
        return Verdict.unknown(stats)
    return Verdict.no(stats)
