"""Minimal s-expression reader and canonical printer.

Atoms are maximal runs of characters other than whitespace, parentheses and
``;`` (which starts a comment running to end of line). Every node remembers
the line and column where it starts so diagnostics can point at it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError


@dataclass(frozen=True)
class Atom:
    text: str
    loc: tuple[int, int] = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class SList:
    items: tuple
    loc: tuple[int, int] = field(default=(0, 0), compare=False)

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def head(self) -> str | None:
        if self.items and isinstance(self.items[0], Atom):
            return self.items[0].text
        return None

    def __str__(self) -> str:
        return "(" + " ".join(str(x) for x in self.items) + ")"


SExpr = Atom | SList

_DELIMS = set("();")


def _tokens(text: str):
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line, col = line + 1, 1
            i += 1
        elif c.isspace():
            col += 1
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield c, (line, col)
            col += 1
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in _DELIMS:
                j += 1
            yield text[i:j], (line, col)
            col += j - i
            i = j


def read_all(text: str) -> list[SExpr]:
    """Parse every top-level expression in ``text``."""
    stack: list[tuple[list, tuple[int, int]]] = []
    out: list[SExpr] = []
    for tok, loc in _tokens(text):
        if tok == "(":
            stack.append(([], loc))
        elif tok == ")":
            if not stack:
                raise ParseError("unexpected ')'", loc)
            items, start = stack.pop()
            node = SList(tuple(items), start)
            (stack[-1][0] if stack else out).append(node)
        else:
            (stack[-1][0] if stack else out).append(Atom(tok, loc))
    if stack:
        raise ParseError("unclosed '('", stack[-1][1])
    return out


def read_one(text: str) -> SExpr:
    exprs = read_all(text)
    if len(exprs) != 1:
        loc = exprs[1].loc if len(exprs) > 1 else (1, 1)
        raise ParseError(f"expected exactly one expression, found {len(exprs)}", loc)
    return exprs[0]
