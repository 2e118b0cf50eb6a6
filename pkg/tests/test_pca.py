import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from uordkit.errors import MissingCombinators, ParseError, UnboundVariable, UnknownName
from uordkit.pca import sk
from uordkit.pca.combinators import (
    Filter,
    RelPca,
    abstract,
    bracket_abstract,
    check_combinators,
    check_obligations,
    random_elements,
)
from uordkit.pca.opas import OUT_OF_BUDGET, UNDEFINED, SKOpas, TableOpas, apply_all, eval_term
from uordkit.pca.terms import App, Const, Var, app, free_vars, parse
from uordkit.relcore import Carrier

S, K = sk.S, sk.K
SKK = ((S, K), K)


def sk_term(text, variables=()):
    return parse(text, SKOpas().resolve, variables)


def naive_normal_form(t, steps):
    """Leftmost-outermost single-step rewriting, one redex at a time; ``None`` if out of steps."""

    def step(t):
        head, args = sk._unwind(t)
        if head == K and len(args) >= 2:
            return sk._rebuild(args[0], args[2:])
        if head == S and len(args) >= 3:
            a, b, c = args[:3]
            return sk._rebuild(((a, c), (b, c)), args[3:])
        for i, a in enumerate(args):
            r = step(a)
            if r is not None:
                return sk._rebuild(head, args[:i] + [r] + args[i + 1 :])
        return None

    for _ in range(steps):
        nxt = step(t)
        if nxt is None:
            return t
        t = nxt
    return None


# ----------------------------------------------------------------- reduction


def test_k_reduces_in_one_step():
    b = sk.Budget(2)
    assert sk.normalize(((K, "a"), "b"), b) == "a"
    assert b.used == 1


def test_identity_combinator():
    for x in ("x", S, K, (K, S)):
        assert sk.normalize((SKK, x), sk.Budget(10)) == x


def test_zero_budget_is_out_of_budget():
    o = SKOpas(budget=0)
    assert o.apply(K, K) == (K, K)  # already normal, no step needed
    assert o.apply((K, S), K) is OUT_OF_BUDGET


def test_omega_runs_out_of_budget():
    w = ((S, SKK), SKK)
    assert SKOpas(budget=500).apply(w, w) is OUT_OF_BUDGET


@given(st.integers(0, 2**32 - 1))
def test_normal_form_matches_naive_rewriting(seed):
    rng = np.random.default_rng(seed)
    t = sk.random_term(rng, 9)
    naive = naive_normal_form(t, 300)
    try:
        fast = sk.normalize(t, sk.Budget(300))
    except sk.OutOfSteps:
        fast = None
    if naive is not None and fast is not None:
        assert naive == fast
        assert sk.is_normal(fast)


@given(st.integers(0, 2**32 - 1), st.integers(0, 60))
def test_budget_monotone(seed, budget):
    rng = np.random.default_rng(seed)
    t = sk.random_term(rng, 8)
    try:
        small = sk.normalize(t, sk.Budget(budget))
    except sk.OutOfSteps:
        return
    assert sk.normalize(t, sk.Budget(budget + 50)) == small


def test_string_round_trip():
    t = sk.from_str("S (K S) K")
    assert t == ((S, (K, S)), K)
    assert sk.to_str(t) == "S (K S) K"
    assert sk.size(t) == 4
    assert len(list(sk.all_terms(3))) == 2 * 2 * 2 * 2


# --------------------------------------------------------------------- terms


def test_parse_and_errors():
    t = sk_term("S x (K y)", ["x", "y"])
    assert free_vars(t) == {"x", "y"}
    assert str(t) == "S x (K y)"
    with pytest.raises(UnknownName):
        sk_term("S z")
    with pytest.raises(ParseError):
        sk_term("(S K")
    with pytest.raises(ParseError):
        sk_term("S )")
    with pytest.raises(UnboundVariable):
        eval_term(SKOpas(), Var("x"))


def test_eval_term_is_strict():
    c = Carrier.of_size(2)
    o = TableOpas(c, [[1, -1], [0, 0]])
    assert eval_term(o, app(Const(0), Const(1))) is UNDEFINED
    assert eval_term(o, app(Const(1), app(Const(0), Const(1)))) is UNDEFINED
    assert apply_all(o, 1, [0, 0]) == 1


# -------------------------------------------------------- bracket abstraction


def test_abstraction_examples():
    o = SKOpas()
    x = Var("x")
    assert sk.to_sk(abstract(o, "x", x)) == SKK
    assert sk.to_sk(abstract(o, "x", Const(S))) == (K, S)
    assert sk.to_sk(abstract(o, "x", app(Const(K), Const(S)))) == ((S, (K, K)), (K, S))
    assert sk.to_sk(abstract(o, "x", app(Const(K), Const(S)), compact=True)) == (K, (K, S))


def test_missing_combinators():
    o = TableOpas(Carrier.of_size(1), [[0]])
    with pytest.raises(MissingCombinators):
        bracket_abstract(o, Var("x"), ["x"])


def test_first_projection_compiles():
    o = SKOpas()
    p = sk_term("x", ["x", "y"])
    e = bracket_abstract(o, p, ["x", "y"])
    rng = np.random.default_rng(0)
    pool = random_elements(o, 40, rng)
    for a, b in zip(pool[::2], pool[1::2]):
        ob = check_obligations(o, p, ["x", "y"], e, (a, b))
        assert ob.full == "ok" and ob.partial_defined is True


def test_obligation_vacuous_when_target_undefined():
    c = Carrier.of_size(1)
    o = TableOpas(c, [[-1]], k=0, s=0)
    p = app(Var("x"), Var("x"))
    e = bracket_abstract(o, p, ["x"])
    ob = check_obligations(o, p, ["x"], e, (0,))
    assert ob.full == "vacuous"


# ---------------------------------------------------------------- combinators


def singleton_rpca(strength="strong"):
    c = Carrier(["*"])
    return RelPca(TableOpas(c, [[0]], k=0, s=0), Filter.of([0]), strength)


def test_singleton_is_strong():
    rep = check_combinators(singleton_rpca())
    assert rep.passed and rep.strong


def test_flipped_k_fails():
    # a.b = b everywhere: k.a.b = b, which is not below a
    c = Carrier.of_size(2)
    o = TableOpas(c, [[0, 1], [0, 1]], k=0, s=0)
    rep = check_combinators(RelPca(o, Filter.of([0, 1])))
    assert not rep.laws["k"].passed
    assert rep.laws["k"].counterexample == {"a": "0", "b": "1"}


def test_filter_axioms_checked():
    c = Carrier.of_size(2)
    o = TableOpas(c, [[1, 1], [1, 1]], k=0, s=0)
    rep = check_combinators(RelPca(o, Filter.of([0])))
    assert not rep.laws["filter_application"].passed


def test_missing_designated_elements():
    o = TableOpas(Carrier.of_size(1), [[0]])
    rep = check_combinators(RelPca(o, Filter.of([0])))
    assert not rep.passed and "designated" in rep.laws


def test_declared_strong_but_weak():
    # 0 absorbs everything, so s.1.1.1 = 0 is defined while 1.1 is not
    c = Carrier.of_size(2)
    o = TableOpas(c, [[0, 0], [-1, -1]], k=0, s=0)
    rep = check_combinators(RelPca(o, Filter.of([0]), "strong"))
    assert rep.strong is False
    assert not rep.laws["declared_strong"].passed


def test_sk_passes_combinator_laws():
    o = SKOpas(budget=10_000)
    rep = check_combinators(RelPca(o, Filter.everything()), samples=100, seed=0)
    assert rep.passed
    assert rep.laws["s"].checked == 100
    assert rep.strong


def test_random_elements_are_normal_and_seeded():
    o = SKOpas()
    a = random_elements(o, 20, np.random.default_rng(5))
    b = random_elements(o, 20, np.random.default_rng(5))
    assert a == b and all(sk.is_normal(t) for t in a)


def test_app_builds_left_nested():
    t = app(Var("a"), Var("b"), Var("c"))
    assert isinstance(t, App) and isinstance(t.fun, App) and t.arg == Var("c")
