"""Uniform preorders presented by a saturated antichain of generators.

A uniform preorder on a finite carrier ``A`` is a family ``R`` of relations
on ``A`` that contains the identity and is closed under composition and
under subrelations.  Down-closure is exponential, so we store only the
maximal elements ("generators"); ``r in R`` iff ``r`` is contained in some
generator.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    BcoAxiomViolation,
    CarrierMismatch,
    CarrierTooLarge,
    MissingReflexivity,
    NotAPreorder,
    NotMonotone,
)
from .relcore import (
    BinRel,
    Carrier,
    FunTable,
    compose,
    map_image,
    pair_graph,
    star_transform,
)
from . import relcore

#: Abort saturation after this many distinct relations were generated.
MAX_GENERATED = 4096


@dataclass(frozen=True)
class Basis:
    carrier: Carrier
    rels: tuple  # of (name, BinRel)

    def __post_init__(self):
        object.__setattr__(self, "rels", tuple(self.rels))
        for name, rel in self.rels:
            if rel.source != self.carrier or rel.target != self.carrier:
                raise CarrierMismatch(f"basis relation {name!r} is not a relation on the carrier")


@dataclass(frozen=True)
class LeqWitness:
    generator: str


@dataclass(frozen=True)
class UniformPreorder:
    carrier: Carrier
    generators: tuple  # of (name, BinRel), an antichain under inclusion

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))

    @property
    def size(self):
        return self.carrier.size

    @property
    def names(self):
        return [name for name, _ in self.generators]

    def generator(self, name) -> BinRel:
        for n, rel in self.generators:
            if n == name:
                return rel
        raise KeyError(name)

    def gen_array(self) -> np.ndarray:
        """Generators stacked as a ``(G, n, n)`` boolean array."""
        n = self.carrier.size
        if not self.generators:
            return np.zeros((0, n, n), dtype=np.bool_)
        return np.stack([rel.bits for _, rel in self.generators])

    def validate(self):
        """Raise ``AssertionError`` unless the stored generators satisfy the invariants."""
        ident = BinRel.identity(self.carrier)
        assert any(ident <= g for _, g in self.generators), "no generator contains the identity"
        for _, g in self.generators:
            for _, h in self.generators:
                assert contains(self, compose(g, h)) is not None, "not closed under composition"
        for i, (_, g) in enumerate(self.generators):
            for j, (_, h) in enumerate(self.generators):
                assert i == j or not g <= h, "generators do not form an antichain"

    def __repr__(self):
        return f"UniformPreorder({list(self.carrier.names)}, {self.names})"


def _compose_name(first, second):
    return f"{second}∘{first}"


def saturate(carrier: Carrier, rels, max_generated: int = MAX_GENERATED):
    """Maximal antichain of the composition closure of ``rels``.

    Composites already covered by a kept relation are dropped on the spot;
    by monotonicity of composition this does not change the down-closure.
    """
    kept: list = []  # (name, rel), pairwise incomparable
    seen: set = set()
    queue: deque = deque()

    def is_kept(rel):
        return any(rel is k for _, k in kept)

    def offer(name, rel):
        if rel.mask in seen:
            return
        seen.add(rel.mask)
        if len(seen) > max_generated:
            raise CarrierTooLarge(f"saturation generated more than {max_generated} distinct relations")
        if any(rel <= other for _, other in kept):
            return
        kept[:] = [(n, o) for n, o in kept if not o <= rel]
        kept.append((name, rel))
        queue.append((name, rel))

    for name, rel in rels:
        offer(name, rel)
    done: list = []
    while queue:
        name, rel = queue.popleft()
        if not is_kept(rel):
            continue
        done = [(n, o) for n, o in done if is_kept(o)]
        done.append((name, rel))
        for other_name, other in list(done):
            offer(_compose_name(name, other_name), compose(rel, other))
            if other is not rel:
                offer(_compose_name(other_name, name), compose(other, rel))
    return tuple(kept)


def from_basis(basis: Basis, auto_reflexive: bool = False, max_generated: int = MAX_GENERATED):
    carrier = basis.carrier
    ident = BinRel.identity(carrier)
    rels = list(basis.rels)
    if not any(ident <= rel for _, rel in rels):
        if not auto_reflexive:
            raise MissingReflexivity("no basis relation contains the identity")
        rels.append(("id", ident))
    return UniformPreorder(carrier, saturate(carrier, rels, max_generated))


def from_generators(carrier: Carrier, gens, check: bool = True) -> UniformPreorder:
    """Wrap an already saturated antichain, optionally validating it."""
    u = UniformPreorder(carrier, tuple(gens))
    if check:
        u.validate()
    return u


def down_closure_of(carrier: Carrier, rels) -> UniformPreorder:
    """Convenience: the uniform preorder generated by named relations ``{name: pairs}``."""
    basis = Basis(carrier, [(n, BinRel.from_pairs(carrier, carrier, p)) for n, p in rels.items()])
    return from_basis(basis)


def contains(u: UniformPreorder, r: BinRel) -> Optional[str]:
    """Name of a generator containing ``r``, or ``None`` if ``r`` is not in the preorder."""
    if r.source != u.carrier or r.target != u.carrier:
        raise CarrierMismatch("contains: relation is not on the carrier")
    mask = r.mask
    for name, g in u.generators:
        if mask & ~g.mask == 0:
            return name
    return None


def fiber_leq(u: UniformPreorder, phi: FunTable, psi: FunTable) -> Optional[LeqWitness]:
    if phi.target != u.carrier or psi.target != u.carrier:
        raise CarrierMismatch("fiber_leq: predicates do not take values in the carrier")
    name = contains(u, pair_graph(phi, psi))
    return None if name is None else LeqWitness(name)


def check_monotone(f: FunTable, src: UniformPreorder, tgt: UniformPreorder) -> bool:
    if f.source != src.carrier or f.target != tgt.carrier:
        raise CarrierMismatch("check_monotone: map does not go between the carriers")
    return all(contains(tgt, map_image(f, f, g)) is not None for _, g in src.generators)


@dataclass(frozen=True)
class AdjunctionReport:
    counit: bool
    transforms: dict = field(default_factory=dict)  # generator name of tgt -> bool

    @property
    def passed(self) -> bool:
        return self.counit and all(self.transforms.values())


def check_adjunction(f: FunTable, g: FunTable, src: UniformPreorder, tgt: UniformPreorder):
    """Does ``g: B -> A`` give a monotone right adjoint of the monotone ``f: A -> B``?

    ``src = (A, R)`` and ``tgt = (B, S)``.  Checks that ``(f g b, b)`` lies in
    ``S`` and that every generator ``s`` of ``S`` transforms into ``R``.
    """
    if g.source != tgt.carrier or g.target != src.carrier:
        raise CarrierMismatch("check_adjunction: g must map tgt.carrier to src.carrier")
    if not check_monotone(f, src, tgt):
        raise NotMonotone("check_adjunction: f is not monotone")
    fg = g.then(f)
    counit = contains(tgt, pair_graph(fg, FunTable.identity(tgt.carrier))) is not None
    transforms = {
        name: contains(src, star_transform(s, f, g)) is not None for name, s in tgt.generators
    }
    return AdjunctionReport(counit, transforms)


def rel_product(r: BinRel, s: BinRel, carrier: Carrier) -> BinRel:
    """``r x s`` on the product carrier ``carrier`` (pairs indexed ``a * |B| + b``)."""
    bits = np.kron(r.bits, s.bits).astype(np.bool_)
    return BinRel(carrier, carrier, bits)


def product(u: UniformPreorder, v: UniformPreorder) -> UniformPreorder:
    if u.size * v.size > relcore.MAX_CARRIER_SIZE:
        raise CarrierTooLarge(f"product carrier of size {u.size * v.size}")
    carrier = u.carrier.product(v.carrier)
    rels = [
        (f"{gn}×{hn}", rel_product(g, h, carrier))
        for gn, g in u.generators
        for hn, h in v.generators
    ]
    return from_basis(Basis(carrier, rels))


def projections(u: UniformPreorder, v: UniformPreorder):
    """The two projection maps out of ``product(u, v)``'s carrier."""
    carrier = u.carrier.product(v.carrier)
    m = v.size
    first = FunTable(carrier, u.carrier, [i // m for i in range(carrier.size)])
    second = FunTable(carrier, v.carrier, [i % m for i in range(carrier.size)])
    return first, second


def pairing(f: FunTable, g: FunTable) -> FunTable:
    """``<f, g>: X -> A x B``."""
    if f.source != g.source:
        raise CarrierMismatch("pairing: maps have different sources")
    carrier = f.target.product(g.target)
    m = g.target.size
    return FunTable(f.source, carrier, [a * m + b for a, b in zip(f.values, g.values)])


# --------------------------------------------------------------------- import


@dataclass(frozen=True)
class PartialFun:
    """A partial endofunction: ``values[a]`` is meaningful where ``domain[a]``."""

    name: str
    values: tuple
    domain: tuple

    @classmethod
    def total(cls, name, values):
        return cls(name, tuple(values), (True,) * len(values))

    def defined(self, a):
        return self.domain[a]


def _is_preorder(order: BinRel) -> bool:
    b = order.bits
    return bool(np.diag(b).all()) and bool(((b.astype(np.int32) @ b.astype(np.int32) > 0) <= b).all())


def import_ordered(carrier: Carrier, order: BinRel, funs: Sequence[PartialFun] = ()):
    """Uniform preorder of an ordered set, optionally with a family of partial maps.

    No maps (or only the identity) gives the canonical indexing ``down{<=}``.
    Otherwise the maps must form a basic combinatory object: monotone, with
    down-closed domains, some map below the identity, and weakly closed under
    composition.  The basis is ``{(a, b) | f(a) <= b}`` per map.
    """
    if order.source != carrier or order.target != carrier:
        raise CarrierMismatch("import_ordered: order is not a relation on the carrier")
    if not _is_preorder(order):
        raise NotAPreorder("order is not reflexive and transitive")
    leq = order.bits
    n = carrier.size
    ident = tuple(range(n))
    funs = list(funs)
    if not funs or (len(funs) == 1 and all(funs[0].domain) and funs[0].values == ident):
        return from_basis(Basis(carrier, [("leq", order)]))

    for f in funs:
        if len(f.values) != n or len(f.domain) != n:
            raise CarrierMismatch(f"partial map {f.name!r} does not fit the carrier")
        for a in range(n):
            for b in range(n):
                if leq[a, b] and f.defined(b):
                    if not f.defined(a):
                        raise BcoAxiomViolation("domain", f"{f.name}: domain not down-closed at {(a, b)}")
                    if not leq[f.values[a], f.values[b]]:
                        raise NotMonotone(f"partial map {f.name!r} is not monotone at {(a, b)}")

    if not any(all(f.domain) and all(leq[f.values[a], a] for a in range(n)) for f in funs):
        raise BcoAxiomViolation("(i)", "no total map i with i(a) <= a for all a")

    for f in funs:
        for g in funs:
            def below(h):
                for a in range(n):
                    if f.defined(a) and g.defined(f.values[a]):
                        if not h.defined(a) or not leq[h.values[a], g.values[f.values[a]]]:
                            return False
                return True

            if not any(below(h) for h in funs):
                raise BcoAxiomViolation("(ii)", f"no h below {g.name} after {f.name}")

    rels = []
    for f in funs:
        bits = np.zeros((n, n), dtype=np.bool_)
        for a in range(n):
            if f.defined(a):
                bits[a] = leq[f.values[a]]
        rels.append((f"r_{f.name}", BinRel(carrier, carrier, bits)))
    return from_basis(Basis(carrier, rels))
