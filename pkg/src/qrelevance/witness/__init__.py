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

"""Budget-bounded witness search

Non-containment under access limitations and long-term relevance with
dependent accesses. Both searches build tree-like witnesses: every fresh
value is introduced by one support fact.
"""

from qrelevance.witness.budget import Budget
from qrelevance.witness.support import (
    Candidate,
    SupportPlan,
    SupportSearch,
    closure,
    generating_domains,
    generating_positions,
    producible_closure,
)
from qrelevance.witness.containment import canonical_mappings, decide_containment_bounded
from qrelevance.witness.longterm import breaker, decide_ltr_dependent_bounded, witness_path
