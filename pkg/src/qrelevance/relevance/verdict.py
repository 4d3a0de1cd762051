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

"""Verdicts returned by every decision procedure"""

from __future__ import annotations
from dataclasses import dataclass, field
from time import perf_counter
from typing import TypeAlias, TYPE_CHECKING

from qrelevance.types import Cutoff, Outcome, SubgoalClass

if TYPE_CHECKING:
    from qrelevance.model import Fact, Path
    from qrelevance.query import Atom, Homomorphism


@dataclass
class SearchStats:
    """Search statistics. `exhaustive` is False as soon as a budget cut-off occurs."""

    nodes: int = 0
    millis: float = 0.0
    exhaustive: bool = True
    cutoffs: set[Cutoff] = field(default_factory=set)
    _start: float = field(default_factory=perf_counter, repr=False, compare=False)

    def cut(self, cutoff: Cutoff) -> None:
        """Record a budget cut-off"""
        self.cutoffs.add(cutoff)
        self.exhaustive = False

    def stop(self) -> SearchStats:
        self.millis = (perf_counter() - self._start) * 1000
        return self


@dataclass(frozen=True)
class SubgoalGuess:
    """
    Classification of the subgoals of one DNF disjunct. Subgoals of the other
    disjuncts are implicitly :py:attr:`SubgoalClass.not_witnessed`.
    """

    disjunct: tuple[Atom, ...]
    classes: tuple[SubgoalClass, ...]

    def of(self, cls: SubgoalClass) -> list[Atom]:
        """Subgoals of the disjunct in the given class"""
        return [a for a, c in zip(self.disjunct, self.classes) if c == cls]

    def classify(self, atom: Atom) -> SubgoalClass:
        for a, c in zip(self.disjunct, self.classes):
            if a == atom:
                return c
        return SubgoalClass.not_witnessed


@dataclass(frozen=True)
class GuessCertificate:
    """A valid subgoal guess together with the path it induces"""

    guess: SubgoalGuess
    path: Path


Certificate: TypeAlias = "frozenset[Fact] | Path | Homomorphism | GuessCertificate"
"""
Evidence attached to a verdict: a response (immediate relevance), a path
(non-containment or long-term relevance), a homomorphism (evaluation) or a
subgoal guess with its path (independent long-term relevance)
"""


@dataclass
class Verdict:
    outcome: Outcome
    certificate: Certificate | None = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def decided(self) -> bool:
        return self.outcome != Outcome.unknown_within_budget

    @classmethod
    def yes(cls, certificate: Certificate | None, stats: SearchStats) -> Verdict:
        return cls(Outcome.yes, certificate, stats.stop())

    @classmethod
    def no(cls, stats: SearchStats, certificate: Certificate | None = None) -> Verdict:
        return cls(Outcome.no, certificate, stats.stop())

    @classmethod
    def unknown(cls, stats: SearchStats) -> Verdict:
        return cls(Outcome.unknown_within_budget, None, stats.stop())
