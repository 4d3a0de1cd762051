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

"""Exceptions and errors

This module contains the custom exceptions and errors for qrelevance.
Every error raised on purpose by the library derives from
:py:class:`QRelevanceError`.
"""

from __future__ import annotations


class QRelevanceError(Exception):
    pass


class SchemaError(QRelevanceError):
    """Malformed schema: duplicate names, undeclared domains, foreign input attributes"""


class TypingError(QRelevanceError):
    """A fact, a binding or a response does not respect the relation signature"""


class QueryError(QRelevanceError):
    """Malformed query or query outside the fragment accepted by an operation"""


class UnknownMethodError(QRelevanceError):
    """An access names an access method that is not declared in the schema"""

    def __init__(self, method: str):
        super().__init__(f"Unknown access method '{method}'")
        self.method = method


class BudgetError(QRelevanceError):
    """Negative or inconsistent search budget / oracle limits"""


class OracleLimitExceeded(QRelevanceError):
    """The brute-force oracle explored more states than allowed"""


class UnsupportedFeatureException(QRelevanceError):
    pass


class ParseError(QRelevanceError):
    """
    Syntax or validation error in a problem file. The first diagnostic gives
    the position reported by the exception, all of them are kept in
    :py:attr:`diagnostics`.
    """

    def __init__(self, diagnostics: list[tuple[int, int, str]]):
        self.diagnostics = sorted(diagnostics)
        self.line, self.column, first = self.diagnostics[0]
        super().__init__(
            "\n".join(f"{line}:{column}: {message}" for line, column, message in self.diagnostics)
        )
