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

"""Instance generators

Hard instances built from tiling problems, and seeded random instances.
"""

from qrelevance.generators.tiling import TilingSpec, TilingSpecError, bits, gen_tiling_grid
from qrelevance.generators.corridor import gen_tiling_corridor, tile_relation, violations
from qrelevance.generators.random_instances import RandomLimits, gen_random_instance
