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

"""Problem files and JSON verdicts

Parser and printer of the ``.alp`` problem format, and the JSON encoding of
verdicts used by the command line.
"""

from qrelevance.cli.parser import ProblemFile, parse_access, parse_problem
from qrelevance.cli.printer import digest, format_access, format_fact, print_problem
from qrelevance.cli.serialization import (
    certificate_from_json,
    certificate_to_json,
    dumps,
    path_from_json,
    summary_rows,
    verdict_to_json,
)
