"""Polynomials over an applicative structure, and their parser.

Syntax: juxtaposition is application and associates to the left;
parentheses group; ``·`` and ``.`` between terms are accepted as explicit
application dots.  Identifiers name variables or constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from ..errors import ParseError, UnknownName


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: object
    label: str = ""

    def __str__(self):
        return self.label or str(self.value)


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"

    def __str__(self):
        right = str(self.arg)
        if isinstance(self.arg, App):
            right = f"({right})"
        return f"{self.fun} {right}"


Term = Union[Var, Const, App]


def app(*terms) -> Term:
    """Left-associated application ``t0 t1 ... tn``."""
    out = terms[0]
    for t in terms[1:]:
        out = App(out, t)
    return out


def free_vars(t: Term) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        return free_vars(t.fun) | free_vars(t.arg)
    return set()


def constants(t: Term) -> list:
    if isinstance(t, Const):
        return [t.value]
    if isinstance(t, App):
        return constants(t.fun) + constants(t.arg)
    return []


def depth(t: Term) -> int:
    if isinstance(t, App):
        return 1 + max(depth(t.fun), depth(t.arg))
    return 0


def substitute(t: Term, env: dict) -> Term:
    """Replace variables bound in ``env`` by constants."""
    if isinstance(t, Var):
        return Const(env[t.name]) if t.name in env else t
    if isinstance(t, App):
        return App(substitute(t.fun, env), substitute(t.arg, env))
    return t


_TOKEN = re.compile(r"\s*(?:(\()|(\))|([·.])|([A-Za-z0-9_#*'{}\-]+))")


def tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} at {pos}")
        pos = m.end()
        if m.group(3):
            continue
        out.append(m.group(1) or m.group(2) or m.group(4))
    return out


def parse(text: str, resolve, variables=()) -> Term:
    """Parse ``text``; ``resolve(name)`` maps a constant name to its value.

    Names listed in ``variables`` become :class:`Var`; any other name must
    resolve, or :class:`UnknownName` is raised.
    """
    tokens = tokenize(text)
    variables = set(variables)
    pos = 0

    def atom():
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of term")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            inner = seq()
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ParseError("missing closing parenthesis")
            pos += 1
            return inner
        if tok == ")":
            raise ParseError("unexpected ')'")
        if tok in variables:
            return Var(tok)
        try:
            return Const(resolve(tok), tok)
        except (KeyError, UnknownName):
            raise UnknownName(tok) from None

    def seq():
        out = atom()
        while pos < len(tokens) and tokens[pos] != ")":
            out = App(out, atom())
        return out

    if not tokens:
        raise ParseError("empty term")
    t = seq()
    if pos != len(tokens):
        raise ParseError("unbalanced ')'")
    return t
