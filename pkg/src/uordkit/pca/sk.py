"""Closed SK terms under step-bounded normal-order reduction.

A term is ``"S"``, ``"K"`` (or another atom, which never reduces) or a pair
``(f, x)`` meaning ``f x``.  Pairs are shared, never copied, so duplication
by ``S`` costs nothing until a term is printed.  Reduction is leftmost
outermost to full normal form; normal forms are unique, so two elements are
equal exactly when their normal forms are identical.
"""

from __future__ import annotations

import itertools

S = "S"
K = "K"


class OutOfSteps(Exception):
    pass


class Budget:
    """Shared step counter; ``tick`` raises :class:`OutOfSteps` once exhausted."""

    __slots__ = ("left", "used")

    def __init__(self, steps):
        self.left = steps
        self.used = 0

    def tick(self):
        if self.left <= 0:
            raise OutOfSteps
        self.left -= 1
        self.used += 1


def _unwind(t):
    args = []
    while isinstance(t, tuple):
        args.append(t[1])
        t = t[0]
    args.reverse()
    return t, args


def _rebuild(head, args):
    for a in args:
        head = (head, a)
    return head


def whnf(t, budget: Budget):
    """Contract head redexes until the head is stuck; returns ``(head, args)``."""
    head, args = _unwind(t)
    while True:
        if head == K and len(args) >= 2:
            budget.tick()
            head, front = _unwind(args[0])
            args = front + args[2:]
        elif head == S and len(args) >= 3:
            budget.tick()
            a, b, c = args[:3]
            head, front = _unwind(a)
            args = front + [c, (b, c)] + args[3:]
        else:
            return head, args


def normalize(t, budget: Budget):
    """Full normal form by normal-order reduction; raises :class:`OutOfSteps`."""
    stack = []
    head, args = whnf(t, budget)
    stack.append([head, args, []])
    while True:
        frame = stack[-1]
        head, args, done = frame
        if len(done) < len(args):
            h, a = whnf(args[len(done)], budget)
            stack.append([h, a, []])
            continue
        stack.pop()
        value = _rebuild(head, done)
        if not stack:
            return value
        stack[-1][2].append(value)


def is_normal(t) -> bool:
    head, args = _unwind(t)
    if (head == K and len(args) >= 2) or (head == S and len(args) >= 3):
        return False
    return all(is_normal(a) for a in args)


def size(t) -> int:
    stack, n = [t], 0
    while stack:
        x = stack.pop()
        if isinstance(x, tuple):
            stack.extend(x)
        else:
            n += 1
    return n


def to_str(t) -> str:
    head, args = _unwind(t)
    parts = [head]
    for a in args:
        parts.append(f"({to_str(a)})" if isinstance(a, tuple) else a)
    return " ".join(parts)


def from_str(text: str):
    from .terms import parse

    return to_sk(parse(text, lambda name: name if name in (S, K) else _raise(name)))


def _raise(name):
    raise KeyError(name)


def to_sk(term):
    """Convert a closed :mod:`terms` AST with SK constants into nested pairs."""
    from .terms import App, Const, Var

    if isinstance(term, Const):
        return term.value
    if isinstance(term, App):
        return (to_sk(term.fun), to_sk(term.arg))
    if isinstance(term, Var):
        return term.name
    raise TypeError(term)


def all_terms(n_leaves: int):
    """Every binary tree with ``n_leaves`` S/K leaves."""
    if n_leaves == 1:
        yield S
        yield K
        return
    for left in range(1, n_leaves):
        for f, x in itertools.product(list(all_terms(left)), list(all_terms(n_leaves - left))):
            yield (f, x)


def random_term(rng, max_leaves: int, atoms=(S, K)):
    leaves = int(rng.integers(1, max_leaves + 1))

    def build(n):
        if n == 1:
            return atoms[int(rng.integers(0, len(atoms)))]
        left = int(rng.integers(1, n))
        return (build(left), build(n - left))

    return build(leaves)
