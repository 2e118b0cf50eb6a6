"""Finite carriers, binary relations as bit matrices, and total functions.

Composition is written ``compose(r, s)`` and means "``r`` first, then
``s``", i.e. ``s o r = {(a, c) | exists b. (a, b) in r and (b, c) in s}``.
All values are immutable once built.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import CarrierMismatch, UnknownName

#: Upper bound on carrier sizes for constructions that build new carriers
#: (products, powersets).  Plain relations are not capped.
MAX_CARRIER_SIZE = 16


class Carrier:
    """An ordered list of distinct element names; elements are indices ``0..size-1``."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable):
        names = tuple(str(x) for x in names)
        index = {name: i for i, name in enumerate(names)}
        if len(index) != len(names):
            raise ValueError(f"duplicate element names in {names}")
        self.names = names
        self._index = index

    @classmethod
    def of_size(cls, n: int, prefix: str = "") -> "Carrier":
        return cls(f"{prefix}{i}" for i in range(n))

    @property
    def size(self) -> int:
        return len(self.names)

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(range(len(self.names)))

    def index(self, name) -> int:
        try:
            return self._index[str(name)]
        except KeyError:
            raise UnknownName(str(name)) from None

    def name(self, i: int) -> str:
        return self.names[i]

    def product(self, other: "Carrier") -> "Carrier":
        """Carrier of pairs; the pair ``(a, b)`` has index ``a * other.size + b``."""
        return Carrier(f"({a},{b})" for a in self.names for b in other.names)

    def power(self, n: int) -> "Carrier":
        """Carrier of ``n``-tuples, little-endian: tuple index ``sum(a_i * size**i)``."""
        tuples = itertools.product(self.names, repeat=n)
        # itertools varies the last position fastest; reverse for little-endian
        return Carrier("(" + ",".join(reversed(t)) + ")" for t in tuples)

    def __eq__(self, other):
        return isinstance(other, Carrier) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Carrier({list(self.names)})"


def _frozen(bits) -> np.ndarray:
    arr = np.array(bits, dtype=np.bool_, copy=True)
    arr.setflags(write=False)
    return arr


class BinRel:
    """A relation from ``source`` to ``target`` stored as a boolean matrix."""

    __slots__ = ("source", "target", "bits", "__dict__")

    def __init__(self, source: Carrier, target: Carrier, bits):
        bits = _frozen(bits)
        if bits.shape != (source.size, target.size):
            raise CarrierMismatch(
                f"bit matrix of shape {bits.shape} does not fit {source.size}x{target.size}"
            )
        self.source = source
        self.target = target
        self.bits = bits

    # construction -----------------------------------------------------------

    @classmethod
    def from_pairs(cls, source, target=None, pairs=()):
        target = source if target is None else target
        bits = np.zeros((source.size, target.size), dtype=np.bool_)
        for a, b in pairs:
            bits[a, b] = True
        return cls(source, target, bits)

    @classmethod
    def from_named_pairs(cls, source, target=None, pairs=()):
        target = source if target is None else target
        return cls.from_pairs(
            source, target, [(source.index(a), target.index(b)) for a, b in pairs]
        )

    @classmethod
    def identity(cls, carrier):
        return cls(carrier, carrier, np.eye(carrier.size, dtype=np.bool_))

    @classmethod
    def empty(cls, source, target=None):
        target = source if target is None else target
        return cls(source, target, np.zeros((source.size, target.size), dtype=np.bool_))

    @classmethod
    def full(cls, source, target=None):
        target = source if target is None else target
        return cls(source, target, np.ones((source.size, target.size), dtype=np.bool_))

    # views ------------------------------------------------------------------

    @cached_property
    def mask(self) -> int:
        """The relation as one integer; bit ``a * target.size + b`` is the pair (a, b)."""
        flat = np.flatnonzero(self.bits.ravel())
        return sum(1 << int(i) for i in flat)

    def pairs(self):
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(self.bits))]

    def named_pairs(self):
        return [[self.source.names[a], self.target.names[b]] for a, b in self.pairs()]

    def successors(self, a) -> list[int]:
        return [int(b) for b in np.flatnonzero(self.bits[a])]

    def __contains__(self, pair):
        a, b = pair
        return bool(self.bits[a, b])

    def __len__(self):
        return int(self.bits.sum())

    def is_square(self):
        return self.source == self.target

    def transpose(self) -> "BinRel":
        return BinRel(self.target, self.source, self.bits.T)

    # order ------------------------------------------------------------------

    def _check_same(self, other):
        if self.source != other.source or self.target != other.target:
            raise CarrierMismatch("relations live on different carriers")

    def __le__(self, other: "BinRel") -> bool:
        self._check_same(other)
        return self.mask & ~other.mask == 0

    def __ge__(self, other: "BinRel") -> bool:
        return other <= self

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __or__(self, other: "BinRel") -> "BinRel":
        self._check_same(other)
        return BinRel(self.source, self.target, self.bits | other.bits)

    def __and__(self, other: "BinRel") -> "BinRel":
        self._check_same(other)
        return BinRel(self.source, self.target, self.bits & other.bits)

    def __eq__(self, other):
        return (
            isinstance(other, BinRel)
            and self.source == other.source
            and self.target == other.target
            and self.mask == other.mask
        )

    def __hash__(self):
        return hash((self.source, self.target, self.mask))

    def __repr__(self):
        return f"BinRel({self.named_pairs()})"


class FunTable:
    """A total function between carriers, as a tuple of target indices."""

    __slots__ = ("source", "target", "values")

    def __init__(self, source: Carrier, target: Carrier, values: Sequence[int]):
        values = tuple(int(v) for v in values)
        if len(values) != source.size:
            raise CarrierMismatch(f"function table has {len(values)} entries for {source.size} inputs")
        if any(not 0 <= v < target.size for v in values):
            raise CarrierMismatch("function value outside target carrier")
        self.source = source
        self.target = target
        self.values = values

    @classmethod
    def identity(cls, carrier):
        return cls(carrier, carrier, range(carrier.size))

    @classmethod
    def constant(cls, source, target, value):
        return cls(source, target, [value] * source.size)

    @classmethod
    def from_names(cls, source, target, mapping):
        """Build from a dict or a sequence of target names."""
        if isinstance(mapping, dict):
            values = [target.index(mapping[name]) for name in source.names]
        else:
            values = [target.index(name) for name in mapping]
        return cls(source, target, values)

    def __call__(self, a: int) -> int:
        return self.values[a]

    def then(self, other: "FunTable") -> "FunTable":
        """``other o self``."""
        if self.target != other.source:
            raise CarrierMismatch("cannot compose functions with mismatched carriers")
        return FunTable(self.source, other.target, [other.values[v] for v in self.values])

    def graph(self) -> BinRel:
        return BinRel.from_pairs(self.source, self.target, enumerate(self.values))

    def named(self):
        return [self.target.names[v] for v in self.values]

    def __eq__(self, other):
        return (
            isinstance(other, FunTable)
            and self.source == other.source
            and self.target == other.target
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.source, self.target, self.values))

    def __repr__(self):
        return f"FunTable({self.named()})"


#: Predicates ``I -> A`` are just total functions out of an index carrier.
Predicate = FunTable


class Classification(NamedTuple):
    single_valued: bool
    entire: bool


# ------------------------------------------------------------------ operations


def compose(r: BinRel, s: BinRel) -> BinRel:
    """``s o r``: first ``r``, then ``s``."""
    if r.target != s.source:
        raise CarrierMismatch("compose: r.target differs from s.source")
    return BinRel(r.source, s.target, kernels.compose(r.bits, s.bits))


def map_image(f: FunTable, g: FunTable, r: BinRel) -> BinRel:
    """``{(f a, g a') | (a, a') in r}``."""
    if f.source != r.source or g.source != r.target:
        raise CarrierMismatch("map_image: function sources do not match the relation")
    bits = np.zeros((f.target.size, g.target.size), dtype=np.bool_)
    rows, cols = np.nonzero(r.bits)
    if rows.size:
        bits[np.asarray(f.values)[rows], np.asarray(g.values)[cols]] = True
    return BinRel(f.target, g.target, bits)


def pair_graph(phi: FunTable, psi: FunTable) -> BinRel:
    """``{(phi i, psi i) | i in I}``."""
    if phi.source != psi.source:
        raise CarrierMismatch("pair_graph: predicates have different index sets")
    if phi.target != psi.target:
        raise CarrierMismatch("pair_graph: predicates have different carriers")
    return BinRel.from_pairs(phi.target, psi.target, zip(phi.values, psi.values))


def star_transform(s: BinRel, f: FunTable, g: FunTable) -> BinRel:
    """``{(a, g b) | (f a, b) in s}`` for ``f: A -> B``, ``g: B -> A``, ``s`` on ``B``."""
    if f.target != s.source or s.target != g.source or g.target != f.source:
        raise CarrierMismatch("star_transform: carriers do not line up")
    a_size = f.source.size
    bits = np.zeros((a_size, a_size), dtype=np.bool_)
    gv = np.asarray(g.values, dtype=np.int64)
    for a in range(a_size):
        succ = np.flatnonzero(s.bits[f.values[a]])
        if succ.size:
            bits[a, gv[succ]] = True
    return BinRel(f.source, f.source, bits)


def meet_pair(r: BinRel, s: BinRel, meet: FunTable) -> BinRel:
    """``{(a, b /\\ c) | (a, b) in r, (a, c) in s}`` where ``meet`` is indexed by pairs."""
    if r.source != s.source or r.target != s.target:
        raise CarrierMismatch("meet_pair: r and s live on different carriers")
    n = r.target.size
    if meet.source.size != n * n or meet.target != r.target:
        raise CarrierMismatch("meet_pair: meet table does not fit the carrier")
    table = np.asarray(meet.values, dtype=np.int64).reshape(n, n) if n else np.zeros((0, 0), np.int64)
    bits = np.zeros((r.source.size, n), dtype=np.bool_)
    for a in range(r.source.size):
        bs = np.flatnonzero(r.bits[a])
        cs = np.flatnonzero(s.bits[a])
        if bs.size and cs.size:
            bits[a, table[np.ix_(bs, cs)].ravel()] = True
    return BinRel(r.source, r.target, bits)


def classify(r: BinRel) -> Classification:
    counts = r.bits.sum(axis=1)
    return Classification(bool((counts <= 1).all()), bool((counts >= 1).all()))


def binary_table(carrier: Carrier, table) -> FunTable:
    """A binary operation ``carrier x carrier -> carrier`` from a nested table of indices."""
    flat = [int(table[a][b]) for a in range(carrier.size) for b in range(carrier.size)]
    return FunTable(carrier.product(carrier), carrier, flat)


def binary_lookup(op: FunTable, a: int, b: int) -> int:
    return op.values[a * op.target.size + b]
