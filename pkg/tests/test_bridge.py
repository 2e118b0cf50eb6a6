import itertools

import numpy as np
import pytest

from conftest import CHAIN2, order_uord, uord
from uordkit.cartesian import CartesianWitness, search_cartesian
from uordkit.errors import NotCartesian, NotDco, PreconditionError
from uordkit.pca import sk
from uordkit.pca.bridge import (
    SKRealizability,
    dco_to_rpca,
    is_dco,
    polynomial_in_Rn_check,
    realizability_leq,
    rpca_to_dco,
    same_preorder,
)
from uordkit.pca.combinators import Filter, RelPca
from uordkit.pca.opas import TableOpas
from uordkit.pca.terms import Const, Var, app
from uordkit.relcore import Carrier, FunTable, binary_table
from uordkit.uord import fiber_leq

SKK = ((sk.S, sk.K), sk.K)


def singleton():
    u = uord(1)
    return u, search_cartesian(u)


def test_singleton_round_trip():
    u, cart = singleton()
    b = dco_to_rpca(u, cart)
    assert b.round_trip and b.strong
    o = b.rpca.opas
    assert o.k == 0 and o.s == 0 and o.table.tolist() == [[0]]
    back = rpca_to_dco(b.rpca)
    assert [g.bits.tolist() for _, g in back.generators] == [g.bits.tolist() for _, g in u.generators]
    assert same_preorder(u, back)


def test_non_dco_rejected():
    u = order_uord(CHAIN2)
    with pytest.raises(NotDco):
        dco_to_rpca(u, search_cartesian(u))


def test_non_cartesian_rejected():
    u = uord(2)
    meet = binary_table(u.carrier, np.zeros((2, 2), dtype=int))
    with pytest.raises(NotCartesian):
        dco_to_rpca(u, CartesianWitness(meet, 0))


def test_dco_detection():
    assert is_dco(uord(2))
    assert not is_dco(order_uord(CHAIN2))


def test_sk_identity_realizer():
    v = SKRealizability(budget=10_000).fiber_leq([{sk.K}], [{sk.K}])
    assert v.status == "realized" and v.realizer == SKK and v.tried == 1


def test_sk_constant_realizer():
    # K S sends everything to S
    v = SKRealizability().fiber_leq([{sk.K, sk.S}], [{sk.S}])
    assert v.status == "realized"
    assert SKRealizability().realizes(v.realizer, [{sk.K, sk.S}], [{sk.S}])


def test_sk_unknown_when_nothing_fits():
    v = SKRealizability(max_leaves=2).fiber_leq([{sk.K}], [set()])
    assert v.status == "unknown" and v.to_dict()["tried"] == v.tried


def random_table_rpca(rng, n):
    """Random table whose element 0 acts as the identity and sits in the filter."""
    table = rng.integers(-1, n, size=(n, n))
    table[0] = np.arange(n)
    filt = [0] + [a for a in range(1, n) if rng.random() < 0.6]
    return RelPca(TableOpas(Carrier.of_size(n), table), Filter.of(filt))


@pytest.mark.parametrize("seed", range(10))
def test_realizer_implies_generated_order(seed):
    # the realizer search and fiber_leq on the generated preorder are independent routes;
    # random tables need not realize composition, so only this direction holds in general
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    r = random_table_rpca(rng, n)
    u = rpca_to_dco(r)
    idx = Carrier.of_size(1)
    for x, y in itertools.product(range(n), repeat=2):
        phi = FunTable(idx, u.carrier, [x])
        psi = FunTable(idx, u.carrier, [y])
        if realizability_leq(r, [1 << x], [1 << y]) is not None:
            assert fiber_leq(u, phi, psi) is not None
        if fiber_leq(u, phi, psi) is None:
            assert realizability_leq(r, [1 << x], [1 << y]) is None


def test_realizability_identity_and_failure():
    c = Carrier.of_size(2)
    r = RelPca(TableOpas(c, [[0, 1], [-1, -1]]), Filter.of([0]))
    assert realizability_leq(r, [0b01], [0b01]) == 0
    assert realizability_leq(r, [0b01], [0b10]) is None
    assert realizability_leq(r, [0b11], [0b11]) == 0


def test_polynomial_in_Rn_on_singleton():
    u, cart = singleton()
    b = dco_to_rpca(u, cart)
    p = app(Var("x"), Var("y"))
    assert polynomial_in_Rn_check(u, cart, b.rpca, p, ["x", "y"])
    assert polynomial_in_Rn_check(u, cart, b.rpca, app(Const(0), Var("x")), ["x"])


def test_polynomial_preconditions():
    u, cart = singleton()
    r = RelPca(TableOpas(u.carrier, [[0]], k=0, s=0), Filter.of([]))
    with pytest.raises(PreconditionError):
        polynomial_in_Rn_check(u, cart, r, app(Const(0), Var("x")), ["x"])
    b = dco_to_rpca(u, cart)
    with pytest.raises(PreconditionError):
        polynomial_in_Rn_check(u, cart, b.rpca, app(Var("x"), Var("y")), ["x"])


def test_bridge_to_dict():
    u, cart = singleton()
    d = dco_to_rpca(u, cart).to_dict()
    assert d["filter"] == ["0"] and d["application"] == [["0"]] and d["round_trip"]
