"""Automata definitions, bounded execution, equivalence testing and grading."""

import json
from pkgutil import extend_path

# The compiled module may live in a separate build tree on sys.path.
__path__ = extend_path(__path__, __name__)

from ._autograde import (  # noqa: E402
    AssignmentError,
    KindMismatch,
    LetterNotInAlphabet,
    Machine,
    ParseError,
    canonical,
    equiv,
    grade,
    load,
    validate,
)


def grade_report(assignment, submission, seed=None):
    """grade(), decoded into a dict."""
    return json.loads(grade(assignment, submission, seed))


__all__ = [
    "AssignmentError",
    "KindMismatch",
    "LetterNotInAlphabet",
    "Machine",
    "ParseError",
    "canonical",
    "equiv",
    "grade",
    "grade_report",
    "load",
    "validate",
]
