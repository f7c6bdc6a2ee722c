#!/usr/bin/env python3
"""
Exceptions and validation reports shared by every module.

Each exception carries a stable ``code`` string; the CLI prints it and tests match on it.
"""

from typing import Hashable, Iterable, List, Optional, Tuple


class Violation:
    """One failed law instance: a code, a message and the identifiers involved."""

    __slots__ = ('code', 'message', 'witnesses')

    def __init__(self, code: str, message: str, witnesses: Tuple[Hashable, ...] = ()):
        self.code = code
        self.message = message
        self.witnesses = tuple(witnesses)

    def __eq__(self, other):
        if not isinstance(other, Violation):
            return NotImplemented
        return (self.code, self.message, self.witnesses) == (other.code, other.message, other.witnesses)

    def __hash__(self):
        return hash((self.code, self.message, self.witnesses))

    def __repr__(self):
        return f"Violation({self.code!r}, {self.message!r})"

    def to_dict(self):
        return {
            'code': self.code,
            'message': self.message,
            'witnesses': [repr(w) for w in self.witnesses],
        }


class ValidationReport:
    """Ordered list of violations found by an exhaustive law scan."""

    def __init__(self, violations: Iterable[Violation] = ()):
        self.violations: List[Violation] = list(violations)

    def __bool__(self):
        return bool(self.violations)

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    @property
    def codes(self) -> List[str]:
        return [v.code for v in self.violations]

    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    def to_dict(self):
        return {'violations': [v.to_dict() for v in self.violations]}

    def summary(self, limit: int = 5) -> str:
        lines = [f"{v.code}: {v.message}" for v in self.violations[:limit]]
        if len(self.violations) > limit:
            lines.append(f"... and {len(self.violations) - limit} more")
        return "; ".join(lines)


class FincatError(Exception):
    """Base class for every engine error."""

    code = 'FincatError'

    def __init__(self, message: str = '', code: Optional[str] = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class ValidationError(FincatError):
    code = 'ValidationError'

    def __init__(self, what: str, report: ValidationReport):
        self.what = what
        self.report = report
        super().__init__(f"{what} failed validation: {report.summary()}")

    @property
    def codes(self) -> List[str]:
        return self.report.codes


class CompositionError(FincatError):
    code = 'TypeMismatch'


class UnknownMorphism(FincatError):
    code = 'UnknownMorphism'


class UnknownObject(FincatError):
    code = 'UnknownObject'


class SourceTargetMismatch(FincatError):
    code = 'SourceTargetMismatch'


class SearchSpaceExceeded(FincatError):
    code = 'SearchSpaceExceeded'

    def __init__(self, bound: int, cap: int, what: str = 'search'):
        self.bound = bound
        self.cap = cap
        super().__init__(f"{what} needs {bound} candidates, above the cap of {cap}")


class NotAnEquivalence(FincatError):
    code = 'NotAnEquivalence'


class PreconditionFailure(FincatError):
    code = 'PreconditionFailure'


class NotADaggerFunctor(FincatError):
    code = 'NotADaggerFunctor'


class NotIsometric(FincatError):
    code = 'NotIsometric'


class NotIso(FincatError):
    code = 'NotIso'


class InvalidSpec(FincatError):
    code = 'InvalidSpec'


class SizeExceeded(FincatError):
    code = 'SizeExceeded'


class InconsistentResult(FincatError):
    """Two independent computations of the same quantity disagree."""

    code = 'InconsistentResult'


class Diagnostic:
    """Positioned DSL diagnostic."""

    __slots__ = ('code', 'line', 'column', 'message')

    def __init__(self, code: str, line: int, column: int, message: str):
        self.code = code
        self.line = line
        self.column = column
        self.message = message

    def __repr__(self):
        return f"Diagnostic({self.code!r}, {self.line}:{self.column}, {self.message!r})"

    def __str__(self):
        return f"{self.line}:{self.column}: {self.code}: {self.message}"

    def to_dict(self):
        return {'code': self.code, 'line': self.line, 'column': self.column, 'message': self.message}


class DslError(FincatError):
    code = 'DslError'

    def __init__(self, diagnostics: List[Diagnostic]):
        self.diagnostics = list(diagnostics)
        if self.diagnostics:
            self.code = self.diagnostics[0].code
        super().__init__("\n".join(str(d) for d in self.diagnostics))
