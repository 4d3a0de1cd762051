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

"""Exact relevance procedures

Immediate relevance, its first-order rewriting for Boolean accesses, and
long-term relevance when every access method is independent.
"""

from qrelevance.relevance.verdict import (
    Certificate,
    GuessCertificate,
    SearchStats,
    SubgoalGuess,
    Verdict,
)
from qrelevance.relevance.unify import as_constants, unify_all, unify_binding
from qrelevance.relevance.certificates import (
    check_containment_certificate,
    check_ir_certificate,
    check_ltr_certificate,
)
from qrelevance.relevance.immediate import IRRewriting, decide_ir, ir_by_rewriting, ir_rewriting
from qrelevance.relevance.independent import decide_ltr_independent, iter_guesses, materialize
from qrelevance.relevance.single_occurrence import decide_ltr_single_occurrence, query_graph
