"""Finite meets on uniform preorders.

A uniform preorder is cartesian when a meet table and a top element exist
such that the relations ``{(a, top)}``, ``{(a^b, a)}`` and ``{(a^b, b)}``
lie in it, and pairing ``{(a, b^c) | (a,b) in r, (a,c) in s}`` preserves
membership.  Pairing is monotone in ``r`` and ``s``, so generator pairs are
enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels, relcore
from .errors import CarrierMismatch, CarrierTooLarge, SearchSpaceTooLarge
from .fibers import all_maps, build_fiber, reindex_classes
from .relcore import BinRel, Carrier, FunTable, binary_lookup, meet_pair
from .uord import UniformPreorder, contains

#: Largest number of candidate meet tables ``search_cartesian`` will scan.
SEARCH_CAP = 2_000_000


@dataclass(frozen=True)
class CartesianWitness:
    meet: FunTable
    top: int
    certificates: dict = field(default_factory=dict)

    def meet_of(self, a, b):
        return binary_lookup(self.meet, a, b)

    def table(self):
        n = self.meet.target.size
        return np.asarray(self.meet.values, dtype=np.int64).reshape(n, n)


def _tau(carrier, top):
    return BinRel.from_pairs(carrier, carrier, [(a, top) for a in carrier])


def _lam_rho(carrier, meet):
    n = carrier.size
    lam = [(binary_lookup(meet, a, b), a) for a in range(n) for b in range(n)]
    rho = [(binary_lookup(meet, a, b), b) for a in range(n) for b in range(n)]
    return BinRel.from_pairs(carrier, carrier, lam), BinRel.from_pairs(carrier, carrier, rho)


def check_cartesian(u: UniformPreorder, meet: FunTable, top: int) -> Optional[CartesianWitness]:
    carrier = u.carrier
    if meet.target != carrier or meet.source.size != carrier.size**2:
        raise CarrierMismatch("meet table does not fit the carrier")
    if not 0 <= top < max(carrier.size, 1) or carrier.size == 0:
        raise CarrierMismatch("top is not an element of the carrier")
    certs = {}
    certs["tau"] = contains(u, _tau(carrier, top))
    lam, rho = _lam_rho(carrier, meet)
    certs["lambda"] = contains(u, lam)
    certs["rho"] = contains(u, rho)
    if None in certs.values():
        return None
    pairs = {}
    for rn, r in u.generators:
        for sn, s in u.generators:
            name = contains(u, meet_pair(r, s, meet))
            if name is None:
                return None
            pairs[f"<<{rn},{sn}>>"] = name
    certs["pairing"] = pairs
    return CartesianWitness(meet, top, certs)


def _allowed_cells(u: UniformPreorder):
    n = u.size
    union = np.zeros((n, n), dtype=np.bool_)
    for _, g in u.generators:
        union |= g.bits
    allowed = []
    for a in range(n):
        for b in range(n):
            ok = union[:, a] & union[:, b]
            if a == b:
                # pairing of identities puts (a, a^a) into R
                ok &= union[a, :]
            allowed.append([int(x) for x in np.flatnonzero(ok)])
    return allowed


def search_cartesian(u: UniformPreorder, cap: int = SEARCH_CAP) -> Optional[CartesianWitness]:
    """First witness in lexicographic order of ``(top, meet table)``, or ``None``.

    The meet table is scanned over cells pruned by necessary conditions
    (each value must have an R-edge to both arguments); the pruned product
    must stay within ``cap``.
    """
    carrier = u.carrier
    n = carrier.size
    if n == 0:
        return None
    tops = [t for t in range(n) if contains(u, _tau(carrier, t)) is not None]
    if not tops:
        return None
    allowed = _allowed_cells(u)
    space = math.prod(len(x) for x in allowed)
    if space > cap:
        raise SearchSpaceTooLarge(f"{space} candidate meet tables exceed the cap {cap}")
    table, found = kernels.first_meet_table(allowed, u.gen_array())
    if not found:
        return None
    meet = relcore.binary_table(carrier, table)
    # the top condition is independent of the meet table
    witness = check_cartesian(u, meet, tops[0])
    assert witness is not None
    return witness


# ---------------------------------------------------------------- n-ary meets


@dataclass(frozen=True)
class NaryMeet:
    n: int
    meet_n: FunTable  # A^n -> A
    uord: UniformPreorder

    def in_Rn(self, r: BinRel) -> Optional[str]:
        """Generator ``g`` with ``(meet_n(a), c) in g`` for every ``(a, c)`` in ``r``, if any."""
        if r.source != self.meet_n.source or r.target != self.uord.carrier:
            raise CarrierMismatch("in_Rn: relation must go from A^n to A")
        rows, cols = np.nonzero(r.bits)
        vals = np.asarray(self.meet_n.values, dtype=np.int64)[rows] if rows.size else rows
        for name, g in self.uord.generators:
            if g.bits[vals, cols].all():
                return name
        return None


def nary(u: UniformPreorder, witness: CartesianWitness, n: int) -> NaryMeet:
    size = u.size
    if size**n > relcore.MAX_CARRIER_SIZE and size > 1:
        raise CarrierTooLarge(f"A^{n} has {size**n} elements")
    tuples = u.carrier.power(n)
    values = []
    for t in range(size**n):
        acc = witness.top
        for i in range(n):
            digit = (t // size**i) % size
            acc = witness.meet_of(acc, digit) if i else digit
        values.append(acc if n else witness.top)
    return NaryMeet(n, FunTable(tuples, u.carrier, values), u)


def projection_relation(u: UniformPreorder, n: int, i: int, g: BinRel) -> BinRel:
    """``{(a, c) | (a_i, c) in g}`` from ``A^n`` to ``A``."""
    size = u.size
    tuples = u.carrier.power(n)
    bits = np.zeros((size**n, size), dtype=np.bool_)
    for t in range(size**n):
        bits[t] = g.bits[(t // size**i) % size]
    return BinRel(tuples, u.carrier, bits)


def pairing_retraction_holds(u: UniformPreorder, witness: CartesianWitness) -> bool:
    """Whether the two projections jointly undo the meet: ``<lambda, rho> o meet = id``."""
    n = u.size
    lam, rho = _lam_rho(u.carrier, witness.meet)
    for a in range(n):
        for b in range(n):
            m = witness.meet_of(a, b)
            outs = {(x, y) for x in lam.successors(m) for y in rho.successors(m)}
            if outs != {(a, b)}:
                return False
    return True


# ------------------------------------------------- brute-force fiberwise meets


def fiberwise_meets_given(u: UniformPreorder, witness: CartesianWitness, max_index: int = 2):
    """Check by enumeration that the pointwise meet and top are glb and top in every fiber.

    Returns ``None`` on success, else a description of the first failure.
    """
    gens = u.gen_array()
    n = u.size
    table = witness.table()
    for k in range(max_index + 1):
        fib = build_fiber(gens, n, k)
        leq = fib.leq
        top_idx = fib.index_of([witness.top] * k)
        if not leq[:, top_idx].all():
            return {"k": k, "law": "top"}
        d = fib.digits
        for x in range(fib.size):
            meets = kernels.encode_digits(table[d[x][None, :], d], n)
            below = leq[meets, x] & leq[meets, np.arange(fib.size)]
            if not below.all():
                return {"k": k, "law": "lower-bound", "phi": d[x].tolist()}
            lower = leq[:, x][:, None] & leq  # lower[z, y]
            if (lower & ~leq[:, meets]).any():
                return {"k": k, "law": "greatest", "phi": d[x].tolist()}
    return None


def fiberwise_meets_exist(u: UniformPreorder, max_index: int = 2) -> bool:
    """Whether every fiber up to ``max_index`` has a top and binary glbs stable under reindexing."""
    gens = u.gen_array()
    n = u.size
    fibers = [build_fiber(gens, n, k) for k in range(max_index + 1)]
    for fib in fibers:
        if fib.top < 0 or not fib.has_all_glbs:
            return False
    for fi in fibers:
        for fj in fibers:
            for umap in all_maps(fj.k, fi.k):
                re = reindex_classes(fi, fj, umap)
                if re[fi.top] != fj.top:
                    return False
                if (re[fi.glb] != fj.glb[re[:, None], re[None, :]]).any():
                    return False
    return True


def is_meet_semilattice_order(order: np.ndarray):
    """Meet table and top of a finite poset, or ``None`` if some meet or the top is missing."""
    glb = kernels.glb_table(order)
    tops = np.flatnonzero(order.all(axis=0))
    if (glb < 0).any() or tops.size == 0:
        return None
    return glb, int(tops[0])


def chain_carrier(n: int) -> Carrier:
    return Carrier.of_size(n)
