"""Bracket abstraction, filters, relative PCAs and the combinator-law checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import MissingCombinators
from . import sk
from .opas import (
    OUT_OF_BUDGET,
    UNDEFINED,
    Opas,
    SKOpas,
    TableOpas,
    apply_all,
    eval_term,
    is_value,
)
from .terms import App, Const, Term, Var, app, free_vars


def _ks(o: Opas):
    if o.k is None or o.s is None:
        raise MissingCombinators("bracket abstraction needs designated k and s")
    return Const(o.k, o.name(o.k)), Const(o.s, o.name(o.s))


def abstract(o: Opas, x: str, t: Term, compact: bool = False) -> Term:
    """``lambda* x. t``.

    By default the constant rule ``k t`` is applied only when ``t`` is a
    variable or constant, so partial applications of the result never force
    evaluation of a closed subterm.  ``compact=True`` applies it to every
    ``t`` without ``x``, giving shorter but possibly less defined code.
    """
    k, s = _ks(o)
    if isinstance(t, Var) and t.name == x:
        return app(s, k, k)
    if x not in free_vars(t) and (compact or not isinstance(t, App)):
        return App(k, t)
    if isinstance(t, App):
        return app(s, abstract(o, x, t.fun, compact), abstract(o, x, t.arg, compact))
    return App(k, t)


def bracket_abstract(o: Opas, p: Term, variables, compact: bool = False) -> Term:
    """Closed ``e = lambda* x1 ... xn. p``.

    Every partial application ``e a1 ... a(n-1)`` is defined, and
    ``e a1 ... an`` is defined and below ``p[a1, ..., an]`` whenever the
    latter is defined; :func:`check_obligations` tests both on a tuple.
    """
    e = p
    for x in reversed(list(variables)):
        e = abstract(o, x, e, compact)
    return e


@dataclass
class Obligation:
    """Outcome of checking the two guarantees of a compiled polynomial on one argument tuple."""

    args: tuple
    partial_defined: object  # True / False / OUT_OF_BUDGET
    full: object  # "ok", "vacuous", "violated", OUT_OF_BUDGET

    @property
    def violated(self):
        return self.partial_defined is False or self.full == "violated"

    @property
    def inconclusive(self):
        return self.partial_defined is OUT_OF_BUDGET or self.full is OUT_OF_BUDGET


def check_obligations(o: Opas, p: Term, variables, e: Term, args, budget=None) -> Obligation:
    """Both guarantees of a compiled ``e`` for one argument tuple (one entry per variable)."""
    variables = list(variables)
    head = eval_term(o, e, {}, budget)
    partial = apply_all(o, head, args[:-1], _fresh(o, budget)) if is_value(head) else head
    if partial is OUT_OF_BUDGET:
        partial_ok = OUT_OF_BUDGET
    else:
        partial_ok = is_value(partial)
    target = eval_term(o, p, dict(zip(variables, args)), _fresh(o, budget))
    if target is UNDEFINED:
        full = "vacuous"
    elif target is OUT_OF_BUDGET:
        full = OUT_OF_BUDGET
    elif not is_value(partial):
        full = OUT_OF_BUDGET if partial is OUT_OF_BUDGET else "violated"
    else:
        got = o.apply(partial, args[-1], _fresh(o, budget))
        if got is OUT_OF_BUDGET:
            full = OUT_OF_BUDGET
        elif got is UNDEFINED or not o.leq(got, target):
            full = "violated"
        else:
            full = "ok"
    return Obligation(tuple(args), partial_ok, full)


def _fresh(o, budget):
    if budget is None:
        return sk.Budget(getattr(o, "budget", 10_000))
    return sk.Budget(budget if isinstance(budget, int) else budget.left)


# -------------------------------------------------------------------- filters


@dataclass(frozen=True)
class Filter:
    """Designated realizers: a finite member set, or a membership predicate."""

    members: Optional[frozenset] = None
    predicate: Optional[Callable] = None

    def __contains__(self, x):
        if self.members is not None:
            return x in self.members
        return bool(self.predicate(x))

    @classmethod
    def of(cls, members):
        return cls(members=frozenset(members))

    @classmethod
    def everything(cls):
        return cls(predicate=lambda x: True)


@dataclass
class RelPca:
    opas: Opas
    filter: Filter
    strength: str = "weak"  # "weak" or "strong"


@dataclass
class LawCheck:
    law: str
    passed: bool
    counterexample: Optional[dict] = None
    inconclusive: int = 0
    checked: int = 0

    def to_dict(self):
        out = {"pass": self.passed, "checked": self.checked}
        if self.inconclusive:
            out["inconclusive"] = self.inconclusive
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class CombinatorReport:
    laws: dict = field(default_factory=dict)
    strong: Optional[bool] = None

    @property
    def passed(self):
        return all(c.passed for c in self.laws.values())

    def to_dict(self):
        out = {name: c.to_dict() for name, c in self.laws.items()}
        out["strong"] = {"pass": bool(self.strong)} if self.strong is not None else {"pass": False}
        return out


def _law(report, name, instances, check, render):
    """Run ``check`` over ``instances``; it returns True, False or OUT_OF_BUDGET."""
    res = LawCheck(name, True)
    for inst in instances:
        res.checked += 1
        got = check(*inst)
        if got is OUT_OF_BUDGET:
            res.inconclusive += 1
        elif not got:
            res.passed = False
            res.counterexample = render(inst)
            break
    report.laws[name] = res
    return res


def _k_law(o, k, budget):
    def check(a, b):
        v = apply_all(o, k, [a, b], _fresh(o, budget))
        if v is OUT_OF_BUDGET:
            return OUT_OF_BUDGET
        return is_value(v) and o.leq(v, a)

    return check


def _s_partial_law(o, s, budget):
    def check(a, b):
        v = apply_all(o, s, [a, b], _fresh(o, budget))
        return OUT_OF_BUDGET if v is OUT_OF_BUDGET else is_value(v)

    return check


def _rhs(o, a, b, c, budget):
    ac = o.apply(a, c, _fresh(o, budget))
    bc = o.apply(b, c, _fresh(o, budget))
    if not is_value(ac):
        return ac
    if not is_value(bc):
        return bc
    return o.apply(ac, bc, _fresh(o, budget))


def _s_law(o, s, budget):
    def check(a, b, c):
        rhs = _rhs(o, a, b, c, budget)
        if rhs is UNDEFINED:
            return True
        if rhs is OUT_OF_BUDGET:
            return OUT_OF_BUDGET
        lhs = apply_all(o, s, [a, b, c], _fresh(o, budget))
        if lhs is OUT_OF_BUDGET:
            return OUT_OF_BUDGET
        return is_value(lhs) and o.leq(lhs, rhs)

    return check


def _strong_law(o, s, budget):
    def check(a, b, c):
        lhs = apply_all(o, s, [a, b, c], _fresh(o, budget))
        if lhs is UNDEFINED:
            return True
        rhs = _rhs(o, a, b, c, budget)
        if OUT_OF_BUDGET in (lhs, rhs):
            return OUT_OF_BUDGET
        return is_value(rhs)

    return check


def random_elements(o: SKOpas, count: int, rng, max_leaves: int = 6, budget: int = 200):
    """Seeded sample of SK elements: normal forms of random S/K trees."""
    out = []
    while len(out) < count:
        t = sk.random_term(rng, max_leaves)
        try:
            out.append(sk.normalize(t, sk.Budget(budget)))
        except sk.OutOfSteps:
            continue
    return out


def check_combinators(r: RelPca, samples: int = 100, seed: int = 0, budget=None) -> CombinatorReport:
    """Combinator laws for the designated ``k``, ``s`` and, on finite tables, the filter axioms.

    Finite tables are checked exhaustively; the SK instance on ``samples``
    seeded triples.
    """
    o = r.opas
    rep = CombinatorReport()
    k, s = o.k, o.s
    if k is None or s is None:
        rep.laws["designated"] = LawCheck("designated", False, {"reason": "k or s missing"})
        return rep
    if isinstance(o, TableOpas):
        elems = list(o.elements())
        pairs = list(itertools.product(elems, repeat=2))
        triples = list(itertools.product(elems, repeat=3))
    else:
        rng = np.random.default_rng(seed)
        pool = random_elements(o, 3 * samples, rng)
        triples = [tuple(pool[3 * i : 3 * i + 3]) for i in range(samples)]
        pairs = [t[:2] for t in triples]
    name = o.name

    rep.laws["k_in_filter"] = LawCheck("k_in_filter", k in r.filter, None if k in r.filter else {"k": name(k)}, checked=1)
    rep.laws["s_in_filter"] = LawCheck("s_in_filter", s in r.filter, None if s in r.filter else {"s": name(s)}, checked=1)
    _law(rep, "k", pairs, _k_law(o, k, budget), lambda t: {"a": name(t[0]), "b": name(t[1])})
    _law(rep, "s_partial", pairs, _s_partial_law(o, s, budget), lambda t: {"a": name(t[0]), "b": name(t[1])})
    render3 = lambda t: {"a": name(t[0]), "b": name(t[1]), "c": name(t[2])}  # noqa: E731
    _law(rep, "s", triples, _s_law(o, s, budget), render3)
    _law(rep, "strong_s", triples, _strong_law(o, s, budget), render3)
    strong = rep.laws.pop("strong_s")
    rep.strong = strong.passed

    if isinstance(o, TableOpas):
        order = o.order.bits
        refl = bool(np.diag(order).all())
        trans = not ((order.astype(np.int32) @ order.astype(np.int32) > 0) & ~order).any()
        rep.laws["order_preorder"] = LawCheck("order_preorder", refl and trans, checked=1)
        members = [a for a in elems if a in r.filter]
        _law(
            rep,
            "filter_upward",
            [(a, b) for a in members for b in elems],
            lambda a, b: not order[a, b] or b in r.filter,
            lambda t: {"a": name(t[0]), "b": name(t[1])},
        )
        _law(
            rep,
            "filter_application",
            [(a, b) for a in members for b in members],
            lambda a, b: not is_value(o.apply(a, b)) or o.apply(a, b) in r.filter,
            lambda t: {"a": name(t[0]), "b": name(t[1])},
        )
    if r.strength == "strong" and not rep.strong:
        rep.laws["declared_strong"] = LawCheck("declared_strong", False, strong.counterexample)
    return rep
