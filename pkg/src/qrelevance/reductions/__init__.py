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

"""Reductions

Executable instance transformers: k-ary to Boolean immediate relevance,
containment to long-term relevance and back, the disjunction-elimination
gadget and the one-method containment variant.
"""

from qrelevance.model import ProblemInstance
from qrelevance.reductions.arity import boolean_arity_reduction
from qrelevance.reductions.containment import (
    containment_to_ltr,
    encode_disjunction_as_cq,
    ltr_to_containment,
    ltr_via_containment_cq,
)
from qrelevance.reductions.cm import CMInstance, cm_to_config, config_to_cm
