"""Existential completion of a uniform preorder on the powerset.

Subsets of ``A`` are bitmasks, and the powerset carrier lists them in
bitmask order, so subset ``U`` has index ``U``.  The lifted basis is
``[r] = {(U, V) | every a in U has an r-successor in V}``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels, relcore
from .cartesian import CartesianWitness, check_cartesian
from .errors import (
    CarrierMismatch,
    CarrierTooLarge,
    NotInR,
    SearchSpaceTooLarge,
)
from .relcore import BinRel, Carrier, FunTable, map_image
from .uord import UniformPreorder, check_adjunction, check_monotone, contains

#: Cap on candidate tables scanned by ``d_algebra_check``.
ALGEBRA_CAP = 2_000_000


def members(mask: int):
    return [a for a in range(mask.bit_length()) if mask >> a & 1]


def to_mask(elements) -> int:
    mask = 0
    for a in elements:
        mask |= 1 << int(a)
    return mask


def powerset_carrier(carrier: Carrier) -> Carrier:
    n = carrier.size
    if 1 << n > relcore.MAX_CARRIER_SIZE:
        raise CarrierTooLarge(f"powerset of a {n}-element carrier")
    return Carrier(
        "{" + ",".join(carrier.names[a] for a in members(mask)) + "}" for mask in range(1 << n)
    )


def lift(g: BinRel, pcarrier: Carrier) -> BinRel:
    return BinRel(pcarrier, pcarrier, kernels.lift(g.bits))


@dataclass(frozen=True)
class DCompletion:
    base: UniformPreorder
    lifted: UniformPreorder
    eta: FunTable  # a |-> {a}

    @property
    def carrier(self) -> Carrier:
        return self.lifted.carrier

    def subset(self, elements) -> int:
        """Index of the subset given by element names or indices."""
        return to_mask(self.base.carrier.index(e) if isinstance(e, str) else e for e in elements)

    def predicate(self, subsets, index: Optional[Carrier] = None) -> FunTable:
        """A predicate ``I -> PA`` from a list of subsets (each an iterable of elements)."""
        values = [self.subset(s) for s in subsets]
        index = Carrier.of_size(len(values)) if index is None else index
        return FunTable(index, self.carrier, values)


def dcomplete(u: UniformPreorder) -> DCompletion:
    pcarrier = powerset_carrier(u.carrier)
    lifted = [(f"[{name}]", lift(g, pcarrier)) for name, g in u.generators]
    # [g'] o [g] lies under [g' o g], which lies under some lifted generator
    gens = []
    for i, (name, rel) in enumerate(lifted):
        if any(rel < other or (rel == other and j < i) for j, (_, other) in enumerate(lifted) if j != i):
            continue
        gens.append((name, rel))
    d = UniformPreorder(pcarrier, tuple(gens))
    for _, g in gens:
        for _, h in gens:
            assert contains(d, relcore.compose(g, h)) is not None, "lifted basis not closed"
    eta = FunTable(u.carrier, pcarrier, [1 << a for a in range(u.size)])
    return DCompletion(u, d, eta)


def dpredicate(d: DCompletion, subsets, index: Optional[Carrier] = None) -> FunTable:
    return d.predicate(subsets, index)


def exists_along(u: FunTable, phi: FunTable) -> FunTable:
    """``(exists_u phi)(i)`` is the union of ``phi(j)`` over ``u(j) = i``."""
    if u.source != phi.source:
        raise CarrierMismatch("exists_along: u and phi have different index sets")
    out = [0] * u.target.size
    for j, i in enumerate(u.values):
        out[i] |= phi.values[j]
    return FunTable(u.target, phi.target, out)


def d_meet_table(base_meet: np.ndarray) -> np.ndarray:
    """``U /\\ V = {a /\\ b | a in U, b in V}`` on bitmask subsets."""
    n = base_meet.shape[0]
    size = 1 << n
    # single[a, V] = {a /\ b | b in V}
    single = np.zeros((n, size), dtype=np.int64)
    for a in range(n):
        for v in range(1, size):
            low = v & -v
            single[a, v] = single[a, v ^ low] | (1 << int(base_meet[a, low.bit_length() - 1]))
    table = np.zeros((size, size), dtype=np.int64)
    for u in range(1, size):
        low = u & -u
        table[u] = table[u ^ low] | single[low.bit_length() - 1]
    return table


def d_cartesian(d: DCompletion, witness: CartesianWitness) -> CartesianWitness:
    table = d_meet_table(witness.table())
    meet = relcore.binary_table(d.carrier, table)
    lifted_witness = check_cartesian(d.lifted, meet, 1 << witness.top)
    if lifted_witness is None:
        raise AssertionError("pointwise meets on the powerset failed the cartesian check")
    return lifted_witness


# ------------------------------------------------------------- eta properties


@dataclass
class EtaReport:
    monotone: bool
    order_reflecting: bool
    prime_singletons: Optional[bool]
    decomposition: bool
    counterexamples: dict

    @property
    def passed(self):
        return (
            self.monotone
            and self.order_reflecting
            and self.prime_singletons is not False
            and self.decomposition
        )


def decompose(phi: FunTable, d: DCompletion):
    """``(u, sigma)`` with ``phi = exists_u (eta o sigma)``, ``J`` the disjoint union of the values."""
    points = [(i, a) for i, mask in enumerate(phi.values) for a in members(mask)]
    jcar = Carrier(f"({i},{d.base.carrier.names[a]})" for i, a in points)
    u = FunTable(jcar, phi.source, [i for i, _ in points])
    sigma = FunTable(jcar, d.base.carrier, [a for _, a in points])
    return u, sigma


def eta_checks(d: DCompletion, max_index: int = 3, check_primes: bool = True) -> EtaReport:
    from . import logicaudit  # deferred: logicaudit builds on this module

    base, lifted = d.base, d.lifted
    cex = {}
    monotone = True
    for name, g in base.generators:
        if contains(lifted, map_image(d.eta, d.eta, g)) is None:
            monotone = False
            cex.setdefault("monotone", {"generator": name})

    n = base.size
    order_reflecting = True
    bgens, dgens = base.gen_array(), lifted.gen_array()
    for k in range(max_index + 1):
        digits = kernels.enumerate_digits(n, k)
        leq_base = kernels.fiber_leq(digits, digits, bgens)
        leq_d = kernels.fiber_leq(1 << digits, 1 << digits, dgens)
        bad = np.argwhere(leq_base != leq_d)
        if bad.size:
            order_reflecting = False
            x, y = bad[0]
            cex.setdefault("order_reflecting", {"phi": digits[x].tolist(), "psi": digits[y].tolist()})

    decomposition = True
    for k in range(max_index + 1):
        index = Carrier.of_size(k)
        for values in itertools.product(range(1 << n), repeat=k):
            phi = FunTable(index, d.carrier, values)
            u, sigma = decompose(phi, d)
            if exists_along(u, sigma.then(d.eta)) != phi:
                decomposition = False
                cex.setdefault("decomposition", {"phi": list(values)})

    prime = None
    if check_primes:
        oracle = logicaudit.dfam_oracle(d)
        cfg = logicaudit.UniverseConfig(max_index_size=max_index)
        prime = True
        for k in range(max_index + 1):
            for values in itertools.product(range(n), repeat=k):
                res = logicaudit.is_exists_prime(oracle, [1 << a for a in values], cfg)
                if not res.passed:
                    prime = False
                    cex.setdefault("prime_singletons", res.counterexample)
    return EtaReport(monotone, order_reflecting, prime, decomposition, cex)


# ------------------------------------------------------- synthetic connective


def _meet_array(base, meet) -> np.ndarray:
    if isinstance(meet, CartesianWitness):
        return meet.table()
    return np.asarray(meet.values, dtype=np.int64).reshape(base.size, base.size)


def forall_impl_table(d: DCompletion, at: BinRel, meet) -> np.ndarray:
    """``T[U, V]``: elements ``a`` with ``(a ^ b, c)`` in ``at`` for each ``b`` in ``U`` and some ``c`` in ``V``."""
    base = d.base
    if contains(base, at) is None:
        raise NotInR("the universal relation is not in the uniform preorder")
    table = _meet_array(base, meet)
    n = base.size
    size = 1 << n
    atmask = np.array([to_mask(np.flatnonzero(at.bits[x])) for x in range(n)], dtype=np.int64)
    # reach[a, b, V]: some c in V with (a /\ b, c) in at
    reach = (atmask[table][:, :, None] & np.arange(size)[None, None, :]) != 0
    out = np.zeros((size, size), dtype=np.int64)
    for a in range(n):
        ok = np.ones((size, size), dtype=np.bool_)  # ok[U, V]
        for b in range(n):
            has_b = (np.arange(size) >> b & 1).astype(np.bool_)
            ok &= ~has_b[:, None] | reach[a, b][None, :]
        out[ok] |= 1 << a
    return out


def forall_impl(d: DCompletion, at: BinRel, meet, u: FunTable, phi: FunTable, psi: FunTable) -> FunTable:
    """``forall_u(phi => psi)`` from a universal relation ``at``.

    At ``i`` it is the set of ``a`` such that for every ``j`` over ``i`` and
    every ``b`` in ``phi(j)`` some ``c`` in ``psi(j)`` has ``(a ^ b, c)`` in ``at``.
    """
    if phi.source != u.source or psi.source != u.source:
        raise CarrierMismatch("forall_impl: phi, psi must be indexed by the source of u")
    table = forall_impl_table(d, at, meet)
    full = (1 << d.base.size) - 1
    out = [full] * u.target.size
    for j, i in enumerate(u.values):
        out[i] &= int(table[phi.values[j], psi.values[j]])
    return FunTable(u.target, d.carrier, out)


def forall_impl_batch(d: DCompletion, at: BinRel, meet):
    """Vectorised ``forall_impl`` on digit rows, in the form the auditor expects."""
    table = forall_impl_table(d, at, meet)
    full = (1 << d.base.size) - 1

    def construct(u, i, phi, psi):
        phi = np.asarray(phi, dtype=np.int64)
        out = np.full((phi.shape[0], i), full, dtype=np.int64)
        for j, t in enumerate(u):
            out[:, t] &= table[phi[:, j], np.asarray(psi)[:, j]]
        return out

    return construct


# ---------------------------------------------------------------- D-algebras


def _algebra_cells(d: DCompletion):
    """Values allowed for ``alpha(U)`` by necessary conditions of ``alpha -| eta``."""
    base = d.base
    n = base.size
    union = np.zeros((n, n), dtype=np.bool_)
    for _, g in base.generators:
        union |= g.bits
    cells = []
    for mask in range(1 << n):
        elems = members(mask)
        allowed = []
        for x in range(n):
            if len(elems) == 1 and not union[x, elems[0]]:
                continue  # alpha{b} must sit below b
            ok = True
            for _, s in base.generators:
                for b in np.flatnonzero(s.bits[x]):
                    # (U, {b}) must lie in a lifted generator
                    if not any(g.bits[elems, b].all() for _, g in base.generators):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                allowed.append(x)
        cells.append(allowed)
    return cells


def d_algebra_check(u: UniformPreorder, cap: int = ALGEBRA_CAP) -> Optional[FunTable]:
    """First ``alpha: PA -> A`` (lexicographic) that is a monotone left adjoint of the singleton map."""
    d = dcomplete(u)
    cells = _algebra_cells(d)
    space = math.prod(len(c) for c in cells)
    if space > cap:
        raise SearchSpaceTooLarge(f"{space} candidate maps exceed the cap {cap}")
    for values in itertools.product(*cells):
        alpha = FunTable(d.carrier, u.carrier, values)
        if not check_monotone(alpha, d.lifted, u):
            continue
        if check_adjunction(alpha, d.eta, d.lifted, u).passed:
            return alpha
    return None


def d_order_direct(d: DCompletion, phi: FunTable, psi: FunTable) -> Optional[str]:
    """Fiber order on ``D`` unwound: some base generator relates each point of ``phi(i)`` into ``psi(i)``."""
    for name, g in d.base.generators:
        ok = True
        for x, y in zip(phi.values, psi.values):
            for a in members(x):
                if not any(g.bits[a, b] for b in members(y)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return name
    return None


def all_dpredicates(d: DCompletion, k: int):
    index = Carrier.of_size(k)
    for values in itertools.product(range(d.carrier.size), repeat=k):
        yield FunTable(index, d.carrier, values)

