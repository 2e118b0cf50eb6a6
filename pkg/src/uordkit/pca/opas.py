"""Partial applicative structures and strict term evaluation.

Application returns an element, :data:`UNDEFINED` (the table has no entry)
or :data:`OUT_OF_BUDGET` (the SK reducer ran out of steps).  The two are
kept apart: only the first is a definite answer.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..errors import CarrierMismatch, UnboundVariable, UnknownName
from ..relcore import BinRel, Carrier
from . import sk
from .terms import App, Const, Term, Var


class _Sentinel:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name

    def __reduce__(self):
        return self.name


UNDEFINED = _Sentinel("UNDEFINED")
OUT_OF_BUDGET = _Sentinel("OUT_OF_BUDGET")


def is_value(x) -> bool:
    return x is not UNDEFINED and x is not OUT_OF_BUDGET


#: Default step budget for the SK instance.
DEFAULT_BUDGET = 10_000


class Opas:
    """Ordered partial applicative structure with optional designated ``k`` and ``s``."""

    k = None
    s = None

    def apply(self, a, b, budget: Optional[sk.Budget] = None):
        raise NotImplementedError

    def leq(self, a, b) -> bool:
        return a == b

    def name(self, a) -> str:
        return str(a)

    def resolve(self, name):
        raise UnknownName(name)


class TableOpas(Opas):
    """Finite structure: ``table[a, b]`` is ``a . b`` or -1 where undefined."""

    def __init__(self, carrier: Carrier, table, order: Optional[BinRel] = None, k=None, s=None):
        table = np.asarray(table, dtype=np.int64)
        n = carrier.size
        if table.shape != (n, n):
            raise CarrierMismatch(f"application table of shape {table.shape} for {n} elements")
        if ((table < -1) | (table >= n)).any():
            raise CarrierMismatch("application table value outside the carrier")
        self.carrier = carrier
        self.table = table
        self.table.setflags(write=False)
        self.order = BinRel.identity(carrier) if order is None else order
        self.k = k
        self.s = s

    @property
    def size(self):
        return self.carrier.size

    def elements(self):
        return range(self.carrier.size)

    def apply(self, a, b, budget=None):
        v = int(self.table[a, b])
        return UNDEFINED if v < 0 else v

    def leq(self, a, b):
        return bool(self.order.bits[a, b])

    def is_discrete(self) -> bool:
        return bool((self.order.bits == np.eye(self.size, dtype=np.bool_)).all())

    def name(self, a):
        return self.carrier.names[a]

    def resolve(self, name):
        return self.carrier.index(name)


class SKOpas(Opas):
    """Closed SK terms in normal form; application normalises ``a b``."""

    k = sk.K
    s = sk.S

    def __init__(self, budget: int = DEFAULT_BUDGET):
        self.budget = budget

    def apply(self, a, b, budget=None):
        budget = sk.Budget(self.budget) if budget is None else budget
        try:
            return sk.normalize((a, b), budget)
        except sk.OutOfSteps:
            return OUT_OF_BUDGET

    def name(self, a):
        return sk.to_str(a)

    def resolve(self, name):
        """``S``, ``K``, or a parenthesised SK term in normal form."""
        if name in (sk.S, sk.K):
            return name
        raise UnknownName(name)


def eval_term(o: Opas, t: Term, env: Optional[dict] = None, budget=None):
    """Strict left-to-right evaluation of ``t``; ``budget`` caps reduction steps in total."""
    env = env or {}
    if budget is None:
        budget = sk.Budget(getattr(o, "budget", DEFAULT_BUDGET))
    elif isinstance(budget, int):
        budget = sk.Budget(budget)

    def ev(term):
        if isinstance(term, Const):
            return term.value
        if isinstance(term, Var):
            if term.name not in env:
                raise UnboundVariable(term.name)
            return env[term.name]
        if isinstance(term, App):
            f = ev(term.fun)
            if not is_value(f):
                return f
            x = ev(term.arg)
            if not is_value(x):
                return x
            return o.apply(f, x, budget)
        raise TypeError(f"not a term: {term!r}")

    return ev(t)


def apply_all(o: Opas, head, args, budget=None):
    """``head . a1 . ... . an`` evaluated left to right."""
    if budget is None:
        budget = sk.Budget(getattr(o, "budget", DEFAULT_BUDGET))
    out = head
    for a in args:
        if not is_value(out):
            return out
        out = o.apply(out, a, budget)
    return out
