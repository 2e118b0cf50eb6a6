"""Passing between relative PCAs and discrete combinatory objects.

``rpca_to_dco`` turns a finite relative PCA into the uniform preorder
generated by the relations ``r_e = {(a, b) | e.a <= b}`` for ``e`` in the
filter.  ``dco_to_rpca`` goes back from a cartesian, relationally complete
DCO: application is ``a.b = @(a ^ b)`` and the filter is the set of points
``a`` with ``{(top, a)}`` in ``R``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..cartesian import CartesianWitness, check_cartesian, nary
from ..errors import (
    CarrierTooLarge,
    KsSearchFailed,
    NotCartesian,
    NotDco,
    NotRelationallyComplete,
    PreconditionError,
)
from ..relcomplete import RelCompWitness, check_relational_completeness, validate_relcomp
from ..relcore import MAX_CARRIER_SIZE, BinRel
from ..uord import Basis, UniformPreorder, contains, from_basis
from . import sk
from .combinators import Filter, RelPca, check_combinators
from .opas import UNDEFINED, SKOpas, TableOpas, apply_all, eval_term, is_value
from .terms import Term, constants, free_vars


def realizer_relation(o: TableOpas, e: int) -> BinRel:
    """``{(a, b) | e.a defined and e.a <= b}``."""
    n = o.size
    row = o.table[e]
    bits = np.zeros((n, n), dtype=np.bool_)
    defined = row >= 0
    bits[defined] = o.order.bits[row[defined]]
    return BinRel(o.carrier, o.carrier, bits)


def rpca_to_dco(r: RelPca) -> UniformPreorder:
    o = r.opas
    if not isinstance(o, TableOpas):
        raise TypeError("rpca_to_dco needs a finite table; use SKRealizability for the SK instance")
    if o.size > MAX_CARRIER_SIZE:
        raise CarrierTooLarge(f"{o.size} elements")
    rels = [(f"r_{o.name(e)}", realizer_relation(o, e)) for e in o.elements() if e in r.filter]
    return from_basis(Basis(o.carrier, rels))


def realizability_leq(r: RelPca, phi, psi) -> Optional[int]:
    """A realizer ``e`` in the filter with ``e.a <= some b in psi(i)`` for all ``a in phi(i)``.

    ``phi`` and ``psi`` list subsets (bitmasks) of the carrier, one per index.
    """
    o = r.opas
    for e in o.elements():
        if e not in r.filter:
            continue
        ok = True
        for u, v in zip(phi, psi):
            for a in range(o.size):
                if not u >> a & 1:
                    continue
                x = o.apply(e, a)
                if not is_value(x) or not any(v >> b & 1 and o.leq(x, b) for b in range(o.size)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return e
    return None


# ----------------------------------------------------------- lazy SK handle


@dataclass
class LazyVerdict:
    status: str  # "realized" or "unknown"
    realizer: object = None
    tried: int = 0

    def to_dict(self):
        out = {"status": self.status, "tried": self.tried}
        if self.realizer is not None:
            out["realizer"] = sk.to_str(self.realizer)
        return out


I_COMBINATOR = ((sk.S, sk.K), sk.K)


@dataclass
class SKRealizability:
    """Semi-decision of the realizability order over the SK instance.

    Predicates are lists of finite sets of SK normal forms.  Candidate
    realizers are ``S K K``, ``K`` and ``S`` first, then all normal forms by
    number of leaves up to ``max_leaves``; each application gets ``budget``
    steps.  Failing to find a realizer is reported as ``unknown``.
    """

    budget: int = 10_000
    max_leaves: int = 6
    designated: tuple = field(default_factory=lambda: (I_COMBINATOR, sk.K, sk.S))

    def candidates(self):
        seen = set()
        for e in self.designated:
            seen.add(e)
            yield e
        for n in range(1, self.max_leaves + 1):
            for t in sk.all_terms(n):
                if not sk.is_normal(t) or t in seen:
                    continue
                seen.add(t)
                yield t

    def realizes(self, e, phi, psi) -> bool:
        o = SKOpas(self.budget)
        for u, v in zip(phi, psi):
            for a in u:
                x = o.apply(e, a)
                if not is_value(x) or x not in v:
                    return False
        return True

    def fiber_leq(self, phi, psi) -> LazyVerdict:
        tried = 0
        for e in self.candidates():
            tried += 1
            if self.realizes(e, phi, psi):
                return LazyVerdict("realized", e, tried)
        return LazyVerdict("unknown", None, tried)


# ------------------------------------------------------------- DCO to RPCA


def is_dco(u: UniformPreorder) -> bool:
    return all((g.bits.sum(axis=1) <= 1).all() for _, g in u.generators)


def filter_points(u: UniformPreorder, top: int) -> list:
    """Points ``a`` with ``{(top, a)}`` in ``R``."""
    return [a for a in range(u.size) if any(g.bits[top, a] for _, g in u.generators)]


def application_table(u: UniformPreorder, cart: CartesianWitness, at: BinRel) -> np.ndarray:
    n = u.size
    meet = cart.table()
    table = np.full((n, n), -1, dtype=np.int64)
    for a in range(n):
        for b in range(n):
            outs = np.flatnonzero(at.bits[meet[a, b]])
            if outs.size:
                table[a, b] = outs[0]
    return table


def search_ks(o: TableOpas, filt: Filter):
    """First ``(k, s)`` in the filter satisfying the combinator laws, by exhaustive search."""
    elems = list(o.elements())
    members = [a for a in elems if a in filt]

    def k_ok(k):
        for a, b in itertools.product(elems, repeat=2):
            v = apply_all(o, k, [a, b])
            if not is_value(v) or not o.leq(v, a):
                return False
        return True

    def s_ok(s):
        for a, b in itertools.product(elems, repeat=2):
            if not is_value(apply_all(o, s, [a, b])):
                return False
        for a, b, c in itertools.product(elems, repeat=3):
            ac, bc = o.apply(a, c), o.apply(b, c)
            rhs = o.apply(ac, bc) if is_value(ac) and is_value(bc) else UNDEFINED
            if rhs is UNDEFINED:
                continue
            lhs = apply_all(o, s, [a, b, c])
            if not is_value(lhs) or not o.leq(lhs, rhs):
                return False
        return True

    ks = [k for k in members if k_ok(k)]
    ss = [s for s in members if s_ok(s)]
    if not ks or not ss:
        return None
    return ks[0], ss[0]


@dataclass
class DcoBridge:
    rpca: RelPca
    at_name: str
    round_trip: bool
    strong: bool

    def to_dict(self):
        o = self.rpca.opas
        members = sorted(a for a in o.elements() if a in self.rpca.filter)
        return {
            "at": self.at_name,
            "filter": [o.name(a) for a in members],
            "k": o.name(o.k),
            "s": o.name(o.s),
            "strength": self.rpca.strength,
            "strong": self.strong,
            "round_trip": self.round_trip,
            "application": [[o.name(v) if v >= 0 else None for v in row] for row in o.table.tolist()],
        }


def same_preorder(u: UniformPreorder, v: UniformPreorder) -> bool:
    """Equal down-closures: every generator of each is contained in one of the other."""
    return all(contains(v, g) is not None for _, g in u.generators) and all(
        contains(u, g) is not None for _, g in v.generators
    )


def dco_to_rpca(u: UniformPreorder, cart: CartesianWitness, w: Optional[RelCompWitness] = None) -> DcoBridge:
    if not is_dco(u):
        bad = next(name for name, g in u.generators if (g.bits.sum(axis=1) > 1).any())
        raise NotDco(f"generator {bad!r} is not single-valued")
    cart_checked = check_cartesian(u, cart.meet, cart.top)
    if cart_checked is None:
        raise NotCartesian("the supplied meet and top do not pass the cartesian check")
    if w is None:
        w = check_relational_completeness(u, cart_checked)
        if w is None:
            raise NotRelationallyComplete("no universal relation")
    elif validate_relcomp(u, cart_checked, w) is not None:
        raise NotRelationallyComplete("the supplied witness is invalid")
    table = application_table(u, cart_checked, w.at)
    filt = Filter.of(filter_points(u, cart_checked.top))
    o = TableOpas(u.carrier, table)
    found = search_ks(o, filt)
    if found is None:
        raise KsSearchFailed("no k, s in the filter satisfy the combinator laws")
    o.k, o.s = found
    r = RelPca(o, filt, "weak")
    strong = bool(check_combinators(r).strong)
    back = rpca_to_dco(r)
    return DcoBridge(r, w.at_name, same_preorder(u, back), strong)


def polynomial_in_Rn_check(u: UniformPreorder, cart: CartesianWitness, r: RelPca, p: Term, variables) -> bool:
    """Whether ``a1..an |-> p[a1..an]`` (where defined) lies in the n-ary part of ``R``."""
    o = r.opas
    for c in constants(p):
        if c not in r.filter:
            raise PreconditionError(f"coefficient {o.name(c)} is not in the filter")
    variables = list(variables)
    extra = free_vars(p) - set(variables)
    if extra:
        raise PreconditionError(f"free variables {sorted(extra)} not listed")
    n = len(variables)
    meet_n = nary(u, cart, n)
    size = u.size
    bits = np.zeros((meet_n.meet_n.source.size, size), dtype=np.bool_)
    for t in range(meet_n.meet_n.source.size):
        env = {x: (t // size**i) % size for i, x in enumerate(variables)}
        v = eval_term(o, p, env)
        if is_value(v):
            bits[t, v] = True
    return meet_n.in_Rn(BinRel(meet_n.meet_n.source, u.carrier, bits)) is not None

