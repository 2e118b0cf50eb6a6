"""Test corpora: small meet-semilattices, random cartesian uniform preorders, DCOs."""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import kernels
from .cartesian import check_cartesian, is_meet_semilattice_order, search_cartesian
from .errors import CarrierTooLarge, SearchSpaceTooLarge
from .relcore import BinRel, Carrier, binary_table
from .uord import Basis, from_basis


def _canonical(bits: np.ndarray) -> bytes:
    n = bits.shape[0]
    return min(bits[np.ix_(p, p)].tobytes() for p in itertools.permutations(range(n)))


@lru_cache(maxsize=None)
def posets(n: int):
    """All partial orders on ``n`` points up to isomorphism, as read-only bool matrices."""
    off = [(a, b) for a in range(n) for b in range(n) if a != b]
    seen, out = set(), []
    for choice in itertools.product((False, True), repeat=len(off)):
        bits = np.eye(n, dtype=np.bool_)
        for (a, b), on in zip(off, choice):
            bits[a, b] = on
        if (bits & bits.T & ~np.eye(n, dtype=np.bool_)).any():
            continue
        if ((bits.astype(np.int32) @ bits.astype(np.int32) > 0) & ~bits).any():
            continue
        key = _canonical(bits)
        if key in seen:
            continue
        seen.add(key)
        bits = np.frombuffer(key, dtype=np.bool_).reshape(n, n).copy()
        bits.setflags(write=False)
        out.append(bits)
    return tuple(out)


def meet_semilattices(max_size: int, min_size: int = 1):
    """Finite posets with a top and all binary meets, up to isomorphism."""
    out = []
    for n in range(min_size, max_size + 1):
        for bits in posets(n):
            if is_meet_semilattice_order(bits) is not None:
                out.append(bits)
    return out


def canonical_indexing(order: np.ndarray, name: str = "leq"):
    """``(uord, witness)`` for a meet-semilattice order with ``R`` the down-closure of ``<=``."""
    n = order.shape[0]
    carrier = Carrier.of_size(n)
    u = from_basis(Basis(carrier, [(name, BinRel(carrier, carrier, order))]))
    glb, top = is_meet_semilattice_order(order)
    witness = check_cartesian(u, binary_table(carrier, glb), top)
    assert witness is not None
    return u, witness


def semilattice_corpus(max_size: int):
    out = []
    for idx, order in enumerate(meet_semilattices(max_size)):
        u, w = canonical_indexing(order)
        out.append((f"slat{order.shape[0]}-{idx}", u, w))
    return out


def random_relation(rng, n: int, density: float) -> np.ndarray:
    return rng.random((n, n)) < density


def random_cartesian(
    count: int,
    seed: int,
    max_size: int = 3,
    k: tuple = (1, 4),
    density: tuple = (0.05, 0.6),
    max_tries: int = 50000,
):
    """Seeded random cartesian uniform preorders: identity plus random relations, saturated.

    Each draw picks a carrier size (weighted towards larger ones, which are
    rarely cartesian), a number of relations in ``k`` and a density in
    ``density``; draws without a cartesian witness are discarded.
    """
    rng = np.random.default_rng(seed)
    sizes = np.arange(1, max_size + 1)
    weights = sizes.astype(float) ** 3
    weights /= weights.sum()
    out = []
    tries = 0
    while len(out) < count and tries < max_tries:
        tries += 1
        n = int(rng.choice(sizes, p=weights))
        nrel = int(rng.integers(k[0], k[1] + 1))
        dens = float(rng.uniform(*density))
        carrier = Carrier.of_size(n)
        rels = [("id", BinRel.identity(carrier))]
        for i in range(nrel):
            rels.append((f"r{i}", BinRel(carrier, carrier, random_relation(rng, n, dens))))
        try:
            u = from_basis(Basis(carrier, rels))
            w = search_cartesian(u)
        except (CarrierTooLarge, SearchSpaceTooLarge):
            continue
        if w is not None:
            out.append((f"rand{seed}-{len(out)}", u, w))
    return out


def random_uords(count: int, seed: int, max_size: int = 3, k: int = 2, density: float = 0.35, dco_share: float = 0.5):
    """Mixed corpus of random uniform preorders; about ``dco_share`` are built from partial functions."""
    rng = np.random.default_rng(seed)
    out = []
    for idx in range(count):
        n = int(rng.integers(1, max_size + 1))
        carrier = Carrier.of_size(n)
        rels = [("id", BinRel.identity(carrier))]
        dco = rng.random() < dco_share
        for i in range(k):
            if dco:
                bits = np.zeros((n, n), dtype=np.bool_)
                for a in range(n):
                    if rng.random() < 0.7:
                        bits[a, rng.integers(0, n)] = True
            else:
                bits = random_relation(rng, n, density)
            rels.append((f"r{i}", BinRel(carrier, carrier, bits)))
        out.append((f"uord{seed}-{idx}", from_basis(Basis(carrier, rels))))
    return out


def downsets(order: np.ndarray):
    """All down-closed subsets of a finite poset, as bitmasks."""
    n = order.shape[0]
    out = []
    for mask in range(1 << n):
        inside = np.array([mask >> a & 1 for a in range(n)], dtype=np.bool_)
        # b in the set and a <= b force a in the set
        if not (order[:, inside] & ~inside[:, None]).any():
            out.append(mask)
    return out


def downset_lattice(order: np.ndarray) -> np.ndarray:
    """Inclusion order on the down-sets of ``order``."""
    ds = downsets(order)
    arr = np.array(ds, dtype=np.int64)
    return (arr[:, None] & ~arr[None, :]) == 0


def fiber_reflection(gens: np.ndarray, m: int, k: int) -> np.ndarray:
    """Order on the poset reflection of the ``fam`` fiber over ``k`` points."""
    digits = kernels.enumerate_digits(m, k)
    leq = kernels.fiber_leq(digits, digits, gens)
    reps = np.unique((leq & leq.T).argmax(axis=1))
    return leq[np.ix_(reps, reps)]


def cartesian_sweep(draws: int = 40000, seed: int = 3, sizes=(2, 3), k: tuple = (1, 4), density: tuple = (0.05, 0.6)):
    """Distinct cartesian uniform preorders reached by ``draws`` random bases.

    Random draws repeat heavily on two or three points; deduplicating by the
    generator set gives a small corpus that still contains the structures
    that are cartesian but not relationally complete.
    """
    rng = np.random.default_rng(seed)
    seen = set()
    out = []
    for _ in range(draws):
        n = int(rng.choice(sizes))
        nrel = int(rng.integers(k[0], k[1] + 1))
        dens = float(rng.uniform(*density))
        carrier = Carrier.of_size(n)
        rels = [("id", BinRel.identity(carrier))]
        rels += [(f"r{i}", BinRel(carrier, carrier, random_relation(rng, n, dens))) for i in range(nrel)]
        u = from_basis(Basis(carrier, rels))
        key = (n, frozenset(g.mask for _, g in u.generators))
        if key in seen:
            continue
        seen.add(key)
        w = search_cartesian(u)
        if w is not None:
            out.append((f"sweep{seed}-{len(out)}", u, w))
    return out
