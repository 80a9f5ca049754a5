"""Exception hierarchy shared by every module of the engine."""

from __future__ import annotations


class SyntaxEngineError(Exception):
    """Base class. ``loc`` is an optional ``(line, column)`` pair."""

    def __init__(self, message: str, loc: tuple[int, int] | None = None):
        super().__init__(message)
        self.message = message
        self.loc = loc

    def __str__(self) -> str:
        if self.loc is None:
            return self.message
        return f"{self.loc[0]}:{self.loc[1]}: {self.message}"


# signatures

class DuplicateOp(SyntaxEngineError):
    def __init__(self, name: str, loc=None):
        super().__init__(f"duplicate operation {name!r}", loc)
        self.name = name


class UnknownOp(SyntaxEngineError):
    def __init__(self, name: str, loc=None):
        super().__init__(f"unknown operation {name!r}", loc)
        self.name = name


class ArityConflict(SyntaxEngineError):
    def __init__(self, name: str, left, right, loc=None):
        super().__init__(f"arity conflict on {name!r}: {left} vs {right}", loc)
        self.name = name
        self.left = left
        self.right = right


class InvalidInclusion(SyntaxEngineError):
    pass


class EmptyNameSet(SyntaxEngineError):
    def __init__(self, loc=None):
        super().__init__("channel name set is empty", loc)


# terms

class OutOfScope(SyntaxEngineError):
    pass


class ArityMismatch(SyntaxEngineError):
    pass


class ScopeMismatch(SyntaxEngineError):
    pass


class MissingOp(SyntaxEngineError):
    def __init__(self, name: str, loc=None):
        super().__init__(f"representation has no interpretation for {name!r}", loc)
        self.name = name


class Uninhabited(SyntaxEngineError):
    pass


# modules and equations

class ShapeMismatch(SyntaxEngineError):
    pass


class TypeMismatch(SyntaxEngineError):
    def __init__(self, position: str, expected, got, loc=None):
        super().__init__(
            f"type mismatch at {position or 'root'}: expected {expected}, got {got}", loc
        )
        self.position = position
        self.expected = expected
        self.got = got


# rewriting

class InvalidRule(SyntaxEngineError):
    pass


class FuelExhausted(SyntaxEngineError):
    def __init__(self, last, steps: int):
        super().__init__(f"fuel exhausted after {steps} steps")
        self.last = last
        self.steps = steps


# surface syntax

class ParseError(SyntaxEngineError):
    pass


class ValidationError(SyntaxEngineError):
    pass
