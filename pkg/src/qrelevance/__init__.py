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

"""Relevance analysis under access limitations

Relational sources on the web are often reachable only through forms: a
relation can be read only by filling in some of its attributes, and the
values to fill in must sometimes have been seen before. qrelevance answers
the static questions such an interface raises for a positive query:

  - is an access *immediately relevant*, i.e. can its answer alone make
    the query certain?
  - is an access *long-term relevant*, i.e. can it change the answer of the
    query once it is followed by further accesses?
  - is a query contained in another one on every configuration reachable
    through the access methods?

Exact procedures cover immediate relevance and long-term relevance with
independent accesses. Long-term relevance with dependent accesses and
containment are searched within explicit budgets, with tree-like witnesses
and an exhaustiveness report. The package also ships the reductions between
these problems, generators of hard instances built from tiling problems,
and brute-force oracles used to test everything against the definitions.
"""

from qrelevance.version import __version__
from qrelevance.model import (
    Access,
    AccessMethod,
    Attribute,
    Configuration,
    Fact,
    Path,
    ProblemInstance,
    Relation,
    Schema,
    Step,
    TypedValue,
)
from qrelevance.query import And, Atom, Constant, Or, Variable, certain, evaluate
from qrelevance.relevance import (
    Verdict,
    decide_ir,
    decide_ltr_independent,
    decide_ltr_single_occurrence,
    ir_rewriting,
)
from qrelevance.witness import Budget, decide_containment_bounded, decide_ltr_dependent_bounded
from qrelevance.types import AccessMode, Outcome, QueryLanguage
