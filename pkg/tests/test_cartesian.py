import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CHAIN2, order_uord, uord
from uordkit.cartesian import (
    CartesianWitness,
    check_cartesian,
    fiberwise_meets_exist,
    fiberwise_meets_given,
    nary,
    pairing_retraction_holds,
    projection_relation,
    search_cartesian,
)
from uordkit.corpus import random_uords
from uordkit.errors import CarrierMismatch
from uordkit.relcore import BinRel, Carrier, binary_table, meet_pair
from uordkit.uord import Basis, from_basis

DIAMOND = [[1, 1, 1, 1], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1]]
DIAMOND_MEET = [[0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 2, 2], [0, 1, 2, 3]]


def chain():
    return order_uord(CHAIN2)


def table(u, rows):
    return binary_table(u.carrier, np.asarray(rows))


def test_chain_min_is_cartesian():
    u = chain()
    w = check_cartesian(u, table(u, [[0, 0], [0, 1]]), 1)
    assert w is not None
    assert [w.meet_of(a, b) for a in range(2) for b in range(2)] == [0, 0, 0, 1]
    assert set(w.certificates) == {"tau", "lambda", "rho", "pairing"}


def test_diamond_lattice_meet_is_cartesian():
    u = order_uord(DIAMOND)
    assert check_cartesian(u, table(u, DIAMOND_MEET), 3) is not None


def test_discrete_rejects_every_meet_table():
    u = uord(2)
    for vals in itertools.product(range(2), repeat=4):
        for top in range(2):
            assert check_cartesian(u, table(u, np.reshape(vals, (2, 2))), top) is None
    assert search_cartesian(u) is None


def test_search_finds_min_on_chain():
    w = search_cartesian(chain())
    assert w.top == 1
    assert w.table().tolist() == [[0, 0], [0, 1]]


def test_search_singleton():
    w = search_cartesian(uord(1))
    assert w.top == 0 and w.table().tolist() == [[0]]


def test_mismatched_table_raises():
    u = chain()
    with pytest.raises(CarrierMismatch):
        check_cartesian(u, binary_table(Carrier.of_size(3), np.zeros((3, 3), dtype=int)), 0)


def test_nary_meets():
    u = chain()
    w = search_cartesian(u)
    zero = nary(u, w, 0)
    assert list(zero.meet_n.values) == [1]
    two = nary(u, w, 2)
    assert list(two.meet_n.values) == [0, 0, 0, 1]  # little-endian tuples
    three = nary(u, w, 3)
    assert list(three.meet_n.values) == [0] * 7 + [1]


def test_singleton_pairing_is_retraction():
    u = uord(1)
    assert pairing_retraction_holds(u, search_cartesian(u))


def test_chain_pairing_is_not_retraction():
    # lambda and rho collapse (0,0), (0,1) and (1,0) onto 0
    u = chain()
    assert not pairing_retraction_holds(u, search_cartesian(u))


def cartesian_corpus():
    out = []
    for name, u in random_uords(60, 21, max_size=3):
        w = search_cartesian(u)
        if w is not None:
            out.append((name, u, w))
    return out


CORPUS = cartesian_corpus()


def test_corpus_has_cartesian_entries():
    assert len(CORPUS) >= 5


@pytest.mark.parametrize("name,u,w", CORPUS, ids=[c[0] for c in CORPUS])
def test_witness_gives_fiberwise_meets(name, u, w):
    assert fiberwise_meets_given(u, w, max_index=2) is None
    assert fiberwise_meets_exist(u, max_index=2)


@pytest.mark.parametrize("seed", range(4))
def test_check_agrees_with_fiberwise_oracle(seed):
    # every table on every 2-point uord: the generator check and the fiber enumeration agree
    for _, u in random_uords(15, seed, max_size=2):
        n = u.size
        for vals in itertools.product(range(n), repeat=n * n):
            m = table(u, np.reshape(vals, (n, n)))
            for top in range(n):
                direct = check_cartesian(u, m, top) is not None
                brute = fiberwise_meets_given(u, CartesianWitness(m, top), max_index=2) is None
                assert direct == brute


@pytest.mark.parametrize("name,u,w", CORPUS[:8], ids=[c[0] for c in CORPUS[:8]])
def test_in_Rn_contains_projections(name, u, w):
    for n in (1, 2):
        m = nary(u, w, n)
        for i in range(n):
            for _, g in u.generators:
                assert m.in_Rn(projection_relation(u, n, i, g)) is not None


@given(st.data())
def test_in_Rn_is_down_closed(data):
    name, u, w = data.draw(st.sampled_from(CORPUS))
    m = nary(u, w, 2)
    src = m.meet_n.source
    bits = np.array(data.draw(st.lists(st.booleans(), min_size=src.size * u.size, max_size=src.size * u.size)))
    r = BinRel(src, u.carrier, bits.reshape(src.size, u.size))
    if m.in_Rn(r) is not None:
        mask = np.array(data.draw(st.lists(st.booleans(), min_size=bits.size, max_size=bits.size)))
        smaller = BinRel(src, u.carrier, (bits & mask).reshape(src.size, u.size))
        assert m.in_Rn(smaller) is not None


@given(st.data())
def test_pairing_is_monotone(data):
    name, u, w = data.draw(st.sampled_from(CORPUS))
    n = u.size

    def sub(g):
        mask = np.array(data.draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))).reshape(n, n)
        return BinRel(u.carrier, u.carrier, g.bits & mask)

    r, s = data.draw(st.sampled_from(u.generators))[1], data.draw(st.sampled_from(u.generators))[1]
    assert meet_pair(sub(r), sub(s), w.meet) <= meet_pair(r, s, w.meet)


def test_search_invariant_under_permutation():
    for _, u in random_uords(30, 4, max_size=3):
        n = u.size
        perm = list(reversed(range(n)))
        p = np.array(perm)
        rels = [(name, BinRel(u.carrier, u.carrier, g.bits[np.ix_(np.argsort(p), np.argsort(p))])) for name, g in u.generators]
        v = from_basis(Basis(u.carrier, rels))
        assert (search_cartesian(u) is None) == (search_cartesian(v) is None)
