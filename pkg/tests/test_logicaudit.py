import numpy as np
import pytest

from conftest import CHAIN2, order_uord, uord
from uordkit.cartesian import search_cartesian
from uordkit.corpus import random_uords
from uordkit.dcompletion import dcomplete, forall_impl_batch
from uordkit.errors import EnumerationCapExceeded, PreconditionError
from uordkit.logicaudit import (
    UniverseConfig,
    audit_exists,
    audit_heyting_forall,
    audit_meets,
    audit_tripos,
    dfam_oracle,
    fam_oracle,
    is_discrete,
    is_exists_prime,
    maps,
    recheck,
)
from uordkit.relcomplete import check_relational_completeness
from uordkit.relcore import BinRel
from uordkit.uord import Basis, from_basis

CFG2 = UniverseConfig(max_index_size=2)


def chain():
    return order_uord(CHAIN2)


def assert_rechecks(h, report, cfg):
    for r in report.failures():
        if r.skipped or r.counterexample is None:
            continue
        assert recheck(h, r.law, r.counterexample, cfg), r.law


def test_meets_examples():
    assert audit_meets(fam_oracle(chain())).passed
    rep = audit_meets(fam_oracle(uord(2)))
    assert not rep.passed
    assert_rechecks(fam_oracle(uord(2)), rep, UniverseConfig())
    assert audit_meets(dfam_oracle(dcomplete(chain()))).passed


def test_exists_examples():
    for _, u in random_uords(6, 1, max_size=2):
        assert audit_exists(dfam_oracle(dcomplete(u)), CFG2).passed
    assert audit_exists(fam_oracle(chain())).passed
    h = fam_oracle(uord(2))
    rep = audit_exists(h, CFG2)
    assert not rep.laws["exists.adjoint"].passed
    assert_rechecks(h, rep, CFG2)


def test_implication_on_completed_chain():
    h = dfam_oracle(dcomplete(chain()))
    rep = audit_heyting_forall(h, CFG2)
    assert rep.passed
    fib = h.fiber(1)
    imp = h.implication(1)
    got = imp[fib.class_of([2]), fib.class_of([1])]  # {1} => {0}
    assert got == fib.class_of([1])
    top = fib.top
    for x in range(fib.classes):
        assert imp[top, x] == x


def test_heyting_skipped_without_meets():
    rep = audit_heyting_forall(fam_oracle(uord(2)), CFG2)
    assert not rep.passed
    assert any(r.skipped for r in rep.laws.values())


def test_prime_examples():
    h = dfam_oracle(dcomplete(chain()))
    assert is_exists_prime(h, [1], CFG2)
    assert is_exists_prime(h, [2, 1], CFG2)
    res = is_exists_prime(h, [0], CFG2)
    assert not res
    assert recheck(h, "exists_prime", res.counterexample, CFG2)
    assert is_exists_prime(h, [], CFG2)
    with pytest.raises(PreconditionError):
        is_exists_prime(h, [1, 1, 1], CFG2)


def test_discrete_examples():
    h = fam_oracle(uord(2))
    assert is_discrete(h, [0, 1])
    assert is_discrete(h, [1, 0])  # reindexing along a bijection
    assert is_discrete(h, [0])  # along an injection
    hc = fam_oracle(chain())
    res = is_discrete(hc, [0, 1])
    assert not res
    assert recheck(hc, "discrete", res.counterexample)


def test_discreteness_respects_enumeration_cap():
    h = fam_oracle(uord(2))
    with pytest.raises(EnumerationCapExceeded):
        is_discrete(h, [0, 1], UniverseConfig(enumeration_cap=2))


def test_tripos_examples():
    rep = audit_tripos(dfam_oracle(dcomplete(chain())), enough_primes=True, rtr_char=True)
    assert rep.laws["tripos"].passed
    assert rep.laws["enough_primes.decomposition"].passed
    assert rep.laws["enough_primes.singletons_prime"].passed
    assert rep.laws["rtr.prime_meets"].passed
    assert not rep.laws["rtr.discrete_generic"].passed
    h = dfam_oracle(dcomplete(uord(2)))
    rep = audit_tripos(h, rtr_char=True)
    assert rep.laws["tripos"].passed and rep.laws["rtr.discrete_generic"].passed
    assert not rep.laws["rtr.prime_meets"].passed
    assert_rechecks(h, rep, UniverseConfig())
    h = fam_oracle(uord(2))
    rep = audit_tripos(h, CFG2)
    assert not rep.laws["tripos"].passed
    assert rep.laws["tripos"].counterexample["law"].startswith("meets")
    assert_rechecks(h, rep, CFG2)


def test_prime_audits_need_completion():
    with pytest.raises(PreconditionError):
        audit_tripos(fam_oracle(chain()), CFG2, enough_primes=True)


@pytest.mark.parametrize("name,u", random_uords(16, 31, max_size=3), ids=lambda x: x if isinstance(x, str) else "")
def test_counterexamples_recheck(name, u):
    for h in (fam_oracle(u), dfam_oracle(dcomplete(u))):
        rep = audit_tripos(h, CFG2)
        assert_rechecks(h, rep, CFG2)


def permuted(u, perm):
    inv = np.argsort(perm)
    rels = [(n, BinRel(u.carrier, u.carrier, g.bits[np.ix_(inv, inv)])) for n, g in u.generators]
    return from_basis(Basis(u.carrier, rels))


@pytest.mark.parametrize("name,u", random_uords(10, 12, max_size=3), ids=lambda x: x if isinstance(x, str) else "")
def test_audit_invariant_under_renaming(name, u):
    perm = np.array(list(reversed(range(u.size))))
    for oracle in (fam_oracle, lambda v: dfam_oracle(dcomplete(v))):
        a = audit_tripos(oracle(u), CFG2)
        b = audit_tripos(oracle(permuted(u, perm)), CFG2)
        assert {k: r.passed for k, r in a.laws.items()} == {k: r.passed for k, r in b.laws.items()}


def test_relationally_complete_completion_agrees_with_constructor():
    u = chain()
    cart = search_cartesian(u)
    w = check_relational_completeness(u, cart)
    d = dcomplete(u)
    rep = audit_tripos(dfam_oracle(d), CFG2, constructor=forall_impl_batch(d, w.at, cart))
    assert rep.laws["forall_impl.agrees"].passed
    assert rep.laws["tripos"].passed


def test_maps_exact_then_sampled():
    cfg = UniverseConfig(map_samples=10)
    assert len(maps(3, 3, cfg)) == 27
    sampled = maps(4, 3, cfg)
    assert 0 < len(sampled) <= 10
    assert sampled == maps(4, 3, cfg)
    assert maps(0, 2, cfg) == [()]
    assert maps(2, 0, cfg) == []
