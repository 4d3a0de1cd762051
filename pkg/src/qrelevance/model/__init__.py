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

"""Data model

Schemas with typed attributes and access methods, configurations, accesses,
responses and paths, together with the well-formedness checks.
"""

from qrelevance.model.schema import Attribute, AccessMethod, Relation, Schema, TypedValue, attrs_of
from qrelevance.model.configuration import Configuration, Fact, FactIndex, adom
from qrelevance.model.access import (
    Access,
    access_for,
    Path,
    PathDiagnostic,
    Step,
    apply_response,
    check_access,
    check_response,
    is_well_formed,
    producing_method,
    truncate_path,
    validate_path,
)
from qrelevance.model.fresh import FreshValues
from qrelevance.model.instance import ProblemInstance
