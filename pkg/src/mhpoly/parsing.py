"""Hand-written recursive descent parsers.

Two small grammars live here:

* space expressions, ``P1 x S3^2``: ``^`` binds tighter than ``x``,
  whitespace is insignificant and parentheses group;
* relation polynomials, ``x^3 - 2 x*y``: integer-coefficient sums of
  products of generator powers.

Both produce plain tuples; callers turn them into domain objects and use
the recorded offsets for error messages.
"""

from __future__ import annotations

import re
from typing import Callable, Iterable

_SPACE_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_BUILTIN_ATOM = re.compile(r"pt|[PS][0-9]+")
_DIGITS = re.compile(r"[0-9]+")


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        self.message = message
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")

    def pointer(self) -> str:
        """Two-line rendering with a caret under the offending position."""
        return f"{self.text}\n{' ' * self.offset}^"


# AST nodes: ("atom", name, offset) | ("product", left, right)
#          | ("power", base, exponent, offset)


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def at_end(self) -> bool:
        return self.peek() == ""

    def error(self, message: str, offset: int | None = None) -> ParseError:
        return ParseError(message, self.pos if offset is None else offset, self.text)

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def digits(self, what: str) -> tuple[int, int]:
        self.skip_ws()
        m = _DIGITS.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        start = self.pos
        self.pos = m.end()
        return int(m.group()), start


def parse_space_ast(text: str, known_names: Iterable[str] = ()):
    """Parse a space expression into an AST.

    Atom names are matched greedily against ``known_names`` and the builtin
    families (``pt``, ``P<n>``, ``S<n>``) so that ``P1xS3`` splits at the
    product sign.
    """
    names = sorted(set(known_names), key=len, reverse=True)
    cur = _Cursor(text)

    def atom_name() -> tuple[str, int]:
        cur.skip_ws()
        start = cur.pos
        best = ""
        m = _BUILTIN_ATOM.match(text, start)
        if m:
            best = m.group()
        for name in names:
            if len(name) > len(best) and text.startswith(name, start):
                best = name
                break
        if not best:
            m = _SPACE_NAME.match(text, start)
            if not m or m.group() == "x":
                found = text[start] if start < len(text) else "end of input"
                raise cur.error(f"expected a space name, found {found!r}")
            best = m.group()
        cur.pos = start + len(best)
        return best, start

    def primary():
        if cur.peek() == "(":
            cur.pos += 1
            node = expr()
            cur.expect(")")
            return node
        name, start = atom_name()
        return ("atom", name, start)

    def term():
        base = primary()
        if cur.peek() == "^":
            cur.pos += 1
            n, start = cur.digits("an exponent")
            if n == 0:
                raise cur.error("exponent must be at least 1", start)
            return ("power", base, n, start)
        return base

    def expr():
        node = term()
        while cur.peek() in ("x", "×"):
            cur.pos += 1
            node = ("product", node, term())
        return node

    if cur.at_end():
        raise cur.error("empty space expression")
    tree = expr()
    if not cur.at_end():
        raise cur.error(f"unexpected {cur.peek()!r}")
    return tree


_REL_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


def parse_polynomial(text: str, lookup: Callable[[str, int], object], ops):
    """Evaluate an integer polynomial expression in named generators.

    ``lookup(name, offset)`` returns the algebra element for a generator;
    ``ops`` supplies ``const(int)``, ``add``, ``neg``, ``mul`` and ``pow``
    so the grammar stays independent of the algebra it builds in.
    ``lhs = rhs`` is read as ``lhs - rhs``.
    """
    cur = _Cursor(text)

    def factor():
        ch = cur.peek()
        if ch == "(":
            cur.pos += 1
            val = expr()
            cur.expect(")")
        elif ch.isdigit():
            n, _ = cur.digits("an integer")
            val = ops.const(n)
        elif ch and (ch.isalpha() or ch == "_"):
            m = _REL_NAME.match(text, cur.pos)
            start = cur.pos
            cur.pos = m.end()
            val = lookup(m.group(), start)
        else:
            raise cur.error(f"expected a generator or integer, found {ch or 'end of input'!r}")
        if cur.peek() == "^":
            cur.pos += 1
            n, _ = cur.digits("an exponent")
            val = ops.pow(val, n)
        return val

    def term():
        val = factor()
        while True:
            ch = cur.peek()
            if ch == "*":
                cur.pos += 1
                val = ops.mul(val, factor())
            elif ch and (ch.isalnum() or ch in "_("):
                val = ops.mul(val, factor())
            else:
                return val

    def expr():
        negate = False
        if cur.peek() in "+-" and cur.peek():
            negate = cur.peek() == "-"
            cur.pos += 1
        val = term()
        if negate:
            val = ops.neg(val)
        while cur.peek() in ("+", "-"):
            op = cur.peek()
            cur.pos += 1
            rhs = term()
            val = ops.add(val, rhs if op == "+" else ops.neg(rhs))
        return val

    if cur.at_end():
        raise cur.error("empty polynomial")
    val = expr()
    if cur.peek() == "=":
        cur.pos += 1
        val = ops.add(val, ops.neg(expr()))
    if not cur.at_end():
        raise cur.error(f"unexpected {cur.peek()!r}")
    return val
