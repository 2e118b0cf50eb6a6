"""Bounded-universe audits of indexed-preorder laws.

A fiber oracle exposes, for each finite index set ``{0..k-1}``, all
predicates (digit vectors of values ``0..m-1``) and the fiber order.  Law
checks run on the poset reflection of each fiber, so "up to isomorphism"
becomes plain equality of classes.  Greatest and least elements are found
by comparing a candidate set against principal down/up-sets.

Maps ``u: J -> I`` are tuples of length ``|J|`` with entries in ``range(|I|)``.
A passing verdict means no counterexample within the bounds; a failing one
comes with a concrete instance that :func:`recheck` confirms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import EnumerationCapExceeded, MissingExists, PreconditionError
from .fibers import Fiber, reindex_classes


@dataclass(frozen=True)
class UniverseConfig:
    max_index_size: int = 3
    enumeration_cap: int = 4096
    sample_seed: int = 0
    span_bound: int = 4  # largest K in the discreteness audit
    constructor_index: int = 2  # largest J when comparing a supplied constructor
    map_samples: int = 64  # maps drawn per pair of sizes beyond exact range

    def __post_init__(self):
        for name in ("max_index_size", "enumeration_cap", "span_bound", "map_samples"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


#: Index sets up to this size have all maps enumerated; larger ones are sampled.
EXACT_MAPS_UPTO = 3


def maps(src: int, dst: int, cfg: UniverseConfig):
    if src <= EXACT_MAPS_UPTO or dst ** src <= cfg.map_samples:
        return list(itertools.product(range(dst), repeat=src))
    if dst == 0:
        return []
    rng = np.random.default_rng([cfg.sample_seed, src, dst])
    drawn = {tuple(int(x) for x in rng.integers(0, dst, size=src)) for _ in range(cfg.map_samples)}
    return sorted(drawn)


def surjections(src: int, dst: int):
    return [f for f in itertools.product(range(dst), repeat=src) if len(set(f)) == dst]


# ------------------------------------------------------------------- oracles


class FiberOracle:
    """Abstract fiber oracle: values ``0..m-1`` and a fiber order on digit vectors.

    Subclasses implement :meth:`leq_digits`; :meth:`exists_digits` is optional.
    """

    name = "H"
    has_exists = False

    def __init__(self, m: int):
        self.m = m
        self._fibers: dict = {}
        self._cache: dict = {}

    def leq_digits(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def exists_digits(self, u, i: int, digits: np.ndarray) -> np.ndarray:
        raise MissingExists(f"{self.name} has no built-in existential quantifier")

    def value_name(self, v: int) -> str:
        return str(v)

    # fibers ---------------------------------------------------------------

    def fiber(self, k: int, cfg: Optional[UniverseConfig] = None) -> Fiber:
        cap = None if cfg is None else cfg.enumeration_cap
        if cap is not None and self.m**k > cap:
            raise EnumerationCapExceeded(
                f"fiber over {k} points has {self.m ** k} predicates (cap {cap})"
            )
        if k not in self._fibers:
            self._fibers[k] = self._build_fiber(k)
        return self._fibers[k]

    def _build_fiber(self, k: int) -> Fiber:
        digits = kernels.enumerate_digits(self.m, k)
        leq = self.leq_digits(digits, digits)
        eq = leq & leq.T
        reps, cls = np.unique(eq.argmax(axis=1), return_inverse=True)
        qleq = np.ascontiguousarray(leq[np.ix_(reps, reps)])
        return Fiber(k, self.m, digits, leq, cls.astype(np.int64), reps.astype(np.int64), qleq)

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def reindex(self, u, i: int) -> np.ndarray:
        """Class map of ``u*`` from the fiber over ``i`` to the fiber over ``len(u)``."""
        u = tuple(u)
        return self._memo(("re", u, i), lambda: reindex_classes(self.fiber(i), self.fiber(len(u)), u))

    def exists(self, u, i: int) -> np.ndarray:
        """Least ``xi`` over ``i`` with ``psi <= u* xi`` for each class ``psi`` (or -1)."""
        u = tuple(u)

        def compute():
            fi, fj = self.fiber(i), self.fiber(len(u))
            re = self.reindex(u, i)
            sets = fj.qleq[:, re]  # sets[psi, xi] = psi <= u* xi
            return kernels.principal(sets, fi.qleq)

        return self._memo(("ex", u, i), compute)

    def forall(self, u, i: int) -> np.ndarray:
        """Greatest ``xi`` over ``i`` with ``u* xi <= psi`` for each class ``psi`` (or -1)."""
        u = tuple(u)

        def compute():
            fi, fj = self.fiber(i), self.fiber(len(u))
            re = self.reindex(u, i)
            sets = fj.qleq[re, :].T  # sets[psi, xi] = u* xi <= psi
            return kernels.principal(sets, fi.qleq.T)

        return self._memo(("fa", u, i), compute)

    def given_exists(self, u, i: int) -> np.ndarray:
        """Class of the built-in ``exists_u`` applied to each class representative."""
        u = tuple(u)

        def compute():
            fj = self.fiber(len(u))
            out = self.exists_digits(u, i, fj.rep_digits)
            return self.fiber(i).classes_of_digits(out)

        return self._memo(("gx", u, i), compute)

    def implication(self, k: int) -> np.ndarray:
        fib = self.fiber(k)
        return self._memo(("imp", k), lambda: kernels.heyting_table(fib.qleq, fib.glb))


class FamOracle(FiberOracle):
    """``fam(U)``: predicates are functions into the carrier, ordered by a single generator."""

    def __init__(self, uord, exists: Optional[Callable] = None, name: str = "fam(U)", dcompletion=None):
        super().__init__(uord.size)
        self.uord = uord
        self.gens = uord.gen_array()
        self._exists = exists
        self.has_exists = exists is not None
        self.name = name
        self.dcompletion = dcompletion

    def leq_digits(self, p, q):
        return kernels.fiber_leq(p, q, self.gens)

    def exists_digits(self, u, i, digits):
        if self._exists is None:
            return super().exists_digits(u, i, digits)
        return self._exists(u, i, digits)

    def value_name(self, v):
        return self.uord.carrier.names[v]


def union_exists(u, i, digits):
    """Pointwise union of bitmask values along ``u``."""
    digits = np.asarray(digits, dtype=np.int64)
    out = np.zeros(digits.shape[:-1] + (i,), dtype=np.int64)
    for j, t in enumerate(u):
        out[..., t] |= digits[..., j]
    return out


def fam_oracle(uord) -> FamOracle:
    return FamOracle(uord)


def dfam_oracle(d) -> FamOracle:
    return FamOracle(d.lifted, exists=union_exists, name="fam(D(U))", dcompletion=d)


# ------------------------------------------------------------------- reports


@dataclass
class LawResult:
    law: str
    passed: bool
    counterexample: Optional[dict] = None
    skipped: bool = False
    note: str = ""

    def to_dict(self):
        out = {"pass": self.passed}
        if self.skipped:
            out["skipped"] = True
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class AuditReport:
    laws: dict = field(default_factory=dict)

    def add(self, result: LawResult):
        self.laws[result.law] = result
        return result

    def merge(self, other: "AuditReport"):
        self.laws.update(other.laws)
        return self

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.laws.values())

    def failures(self):
        return [r for r in self.laws.values() if not r.passed]

    def to_dict(self):
        return {name: r.to_dict() for name, r in self.laws.items()}


def _digits(fib: Fiber, cls) -> list:
    return [int(x) for x in fib.rep_digits[int(cls)]]


def _sizes(cfg):
    return range(cfg.max_index_size + 1)


def _all_maps(cfg):
    """Every ``(u, i)`` with ``u: J -> I`` inside the bound, smallest first."""
    out = []
    for total in range(2 * cfg.max_index_size + 1):
        for j in _sizes(cfg):
            i = total - j
            if 0 <= i <= cfg.max_index_size:
                out.extend((u, i) for u in maps(j, i, cfg))
    return out


def _pullbacks(cfg):
    """Pullback squares of ``u: J -> I`` and ``v: K -> I`` with all corners inside the bound.

    Yields ``(u, v, i, ubar, vbar)`` with ``ubar: L -> K`` and ``vbar: L -> J``.
    """
    for i in _sizes(cfg):
        into_i = [u for j in _sizes(cfg) for u in maps(j, i, cfg)]
        for u in into_i:
            for v in into_i:
                square = [(j, k) for j in range(len(u)) for k in range(len(v)) if u[j] == v[k]]
                if len(square) > cfg.max_index_size:
                    continue
                ubar = tuple(k for _, k in square)
                vbar = tuple(j for j, _ in square)
                yield u, v, i, ubar, vbar


def _check_fibers(h: FiberOracle, cfg):
    for k in _sizes(cfg):
        h.fiber(k, cfg)


# --------------------------------------------------------------------- meets


def audit_meets(h: FiberOracle, cfg: UniverseConfig = UniverseConfig()) -> AuditReport:
    _check_fibers(h, cfg)
    rep = AuditReport()
    top = glb = None
    for k in _sizes(cfg):
        fib = h.fiber(k)
        if top is None and fib.top < 0:
            top = {"index": k}
        if glb is None and not fib.has_all_glbs:
            x, y = np.argwhere(fib.glb < 0)[0]
            glb = {"index": k, "phi": _digits(fib, x), "psi": _digits(fib, y)}
    rep.add(LawResult("meets.top", top is None, top))
    rep.add(LawResult("meets.glb", glb is None, glb))
    if top is not None or glb is not None:
        rep.add(LawResult("meets.stable", False, skipped=True, note="fibers lack meets"))
        return rep
    stable = None
    for u, i in _all_maps(cfg):
        fi, fj = h.fiber(i), h.fiber(len(u))
        re = h.reindex(u, i)
        if re[fi.top] != fj.top:
            stable = {"u": list(u), "I": i, "law": "top"}
            break
        bad = np.argwhere(re[fi.glb] != fj.glb[re[:, None], re[None, :]])
        if bad.size:
            x, y = bad[0]
            stable = {"u": list(u), "I": i, "phi": _digits(fi, x), "psi": _digits(fi, y)}
            break
    rep.add(LawResult("meets.stable", stable is None, stable))
    return rep


# ------------------------------------------------------------------- exists


def audit_exists(h: FiberOracle, cfg: UniverseConfig = UniverseConfig(), frobenius: Optional[bool] = None):
    """Left adjoints to reindexing, Beck-Chevalley, and Frobenius (when fibers have meets)."""
    _check_fibers(h, cfg)
    rep = AuditReport()
    adj = given = None
    for u, i in _all_maps(cfg):
        ex = h.exists(u, i)
        fj = h.fiber(len(u))
        if adj is None and (ex < 0).any():
            psi = int(np.flatnonzero(ex < 0)[0])
            adj = {"u": list(u), "I": i, "psi": _digits(fj, psi)}
        if h.has_exists and given is None:
            mismatch = np.flatnonzero(h.given_exists(u, i) != ex)
            if mismatch.size:
                given = {"u": list(u), "I": i, "psi": _digits(fj, mismatch[0])}
    if adj is not None and not h.has_exists:
        rep.add(LawResult("exists.adjoint", False, adj))
        rep.add(LawResult("exists.beck_chevalley", False, skipped=True, note="no left adjoint"))
        return rep
    rep.add(LawResult("exists.adjoint", adj is None and given is None, adj or given))
    if adj is not None:
        return rep

    bc = None
    for u, v, i, ubar, vbar in _pullbacks(cfg):
        lhs = h.reindex(u, i)[h.exists(v, i)]
        rhs = h.exists(vbar, len(u))[h.reindex(ubar, len(v))]
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            bc = {"u": list(u), "v": list(v), "I": i, "psi": _digits(h.fiber(len(v)), bad[0])}
            break
    rep.add(LawResult("exists.beck_chevalley", bc is None, bc))

    if frobenius is None:
        frobenius = audit_meets(h, cfg).passed
    if frobenius:
        frob = None
        for u, i in _all_maps(cfg):
            fi, fj = h.fiber(i), h.fiber(len(u))
            ex, re = h.exists(u, i), h.reindex(u, i)
            lhs = fi.glb[:, ex]  # phi /\ exists_u psi
            rhs = ex[fj.glb[re, :]]  # exists_u (u* phi /\ psi)
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                x, y = bad[0]
                frob = {"u": list(u), "I": i, "phi": _digits(fi, x), "psi": _digits(fj, y)}
                break
        rep.add(LawResult("exists.frobenius", frob is None, frob))
    return rep


# -------------------------------------------------------- implication, forall


def brute_force_forall_impl(h: FiberOracle, u, i: int, phi, psi) -> Optional[list]:
    """Greatest ``xi`` over ``i`` with ``u* xi /\\ phi <= psi`` (digits of a representative), or ``None``."""
    fi, fj = h.fiber(i), h.fiber(len(u))
    re = h.reindex(u, i)
    p, q = fj.class_of(phi), fj.class_of(psi)
    sets = fj.qleq[fj.glb[re, p], q][None, :]
    hit = int(kernels.principal(sets, fi.qleq.T)[0])
    return None if hit < 0 else _digits(fi, hit)


def audit_heyting_forall(
    h: FiberOracle,
    cfg: UniverseConfig = UniverseConfig(),
    constructor: Optional[Callable] = None,
) -> AuditReport:
    """Heyting implication per fiber (stable under reindexing) and right adjoints to reindexing.

    ``constructor(u, i, phi_digits, psi_digits)`` may supply a candidate for
    ``forall_u(phi => psi)`` on batches of digit rows; it is compared with
    the brute-force answer for ``|I|, |J| <= cfg.constructor_index``.
    """
    rep = AuditReport()
    if not audit_meets(h, cfg).passed:
        for law in ("implication", "implication.stable", "forall.adjoint", "forall.beck_chevalley"):
            rep.add(LawResult(law, False, skipped=True, note="fibers lack finite meets"))
        return rep

    imp = None
    for k in _sizes(cfg):
        table = h.implication(k)
        if (table < 0).any():
            fib = h.fiber(k)
            x, y = np.argwhere(table < 0)[0]
            imp = {"index": k, "phi": _digits(fib, x), "psi": _digits(fib, y)}
            break
    rep.add(LawResult("implication", imp is None, imp))
    if imp is None:
        stable = None
        for u, i in _all_maps(cfg):
            re = h.reindex(u, i)
            lhs = re[h.implication(i)]
            rhs = h.implication(len(u))[re[:, None], re[None, :]]
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                x, y = bad[0]
                fi = h.fiber(i)
                stable = {"u": list(u), "I": i, "phi": _digits(fi, x), "psi": _digits(fi, y)}
                break
        rep.add(LawResult("implication.stable", stable is None, stable))

    adj = None
    for u, i in _all_maps(cfg):
        fa = h.forall(u, i)
        if (fa < 0).any():
            adj = {"u": list(u), "I": i, "psi": _digits(h.fiber(len(u)), np.flatnonzero(fa < 0)[0])}
            break
    rep.add(LawResult("forall.adjoint", adj is None, adj))
    if adj is None:
        bc = None
        for u, v, i, ubar, vbar in _pullbacks(cfg):
            lhs = h.reindex(u, i)[h.forall(v, i)]
            rhs = h.forall(vbar, len(u))[h.reindex(ubar, len(v))]
            bad = np.flatnonzero(lhs != rhs)
            if bad.size:
                bc = {"u": list(u), "v": list(v), "I": i, "psi": _digits(h.fiber(len(v)), bad[0])}
                break
        rep.add(LawResult("forall.beck_chevalley", bc is None, bc))

    if constructor is not None:
        rep.add(_compare_constructor(h, cfg, constructor))
    return rep


def _compare_constructor(h, cfg, constructor) -> LawResult:
    bound = min(cfg.constructor_index, cfg.max_index_size)
    for total in range(2 * bound + 1):
        for j in range(bound + 1):
            i = total - j
            if not 0 <= i <= bound:
                continue
            fi, fj = h.fiber(i), h.fiber(j)
            q = fj.classes
            pp, qq = np.divmod(np.arange(q * q), q)  # all (phi, psi) class pairs
            for u in maps(j, i, cfg):
                re = h.reindex(u, i)
                sets = fj.qleq[fj.glb[re[None, :], pp[:, None]], qq[:, None]]
                brute = kernels.principal(sets, fi.qleq.T)
                got = constructor(u, i, fj.rep_digits[pp], fj.rep_digits[qq])
                got_cls = fi.classes_of_digits(np.asarray(got, dtype=np.int64).reshape(q * q, i))
                bad = np.flatnonzero(brute != got_cls)
                if bad.size:
                    b = bad[0]
                    cex = {
                        "u": list(u),
                        "I": i,
                        "phi": _digits(fj, pp[b]),
                        "psi": _digits(fj, qq[b]),
                        "constructed": [int(x) for x in np.asarray(got)[b]],
                    }
                    return LawResult("forall_impl.agrees", False, cex)
    return LawResult("forall_impl.agrees", True)


# ------------------------------------------------------------ prime, discrete


@dataclass
class BoundedVerdict:
    passed: bool
    counterexample: Optional[dict] = None

    def __bool__(self):
        return self.passed


def _exists_classes(h: FiberOracle, v, j):
    ex = h.given_exists(v, j) if h.has_exists else h.exists(v, j)
    if (ex < 0).any():
        raise MissingExists(f"{h.name}: no existential quantifier along {list(v)}")
    return ex


def _prime_table(h: FiberOracle, cfg):
    """For each ``J``: per class ``p``, ``None`` if ``p`` splits every ``p <= exists_v phi``, else a witness."""

    def compute():
        table = {}
        for j in _sizes(cfg):
            fj = h.fiber(j)
            bad = [None] * fj.classes
            for k in _sizes(cfg):
                fk = h.fiber(k)
                for v in maps(k, j, cfg):
                    ex = _exists_classes(h, v, j)
                    sections = [s for s in maps(j, k, cfg) if all(v[s[x]] == x for x in range(j))]
                    below = fj.qleq[:, ex]  # below[p, phi]: p <= exists_v phi
                    split = np.zeros_like(below)
                    for s in sections:
                        split |= fj.qleq[:, h.reindex(s, k)]
                    for p, phi in np.argwhere(below & ~split):
                        if bad[p] is None:
                            bad[p] = {"v": list(v), "K": k, "phi": _digits(fk, phi)}
            table[j] = bad
        return table

    return h._memo(("prime", cfg.max_index_size, cfg.map_samples, cfg.sample_seed), compute)


def is_exists_prime(h: FiberOracle, pi, cfg: UniverseConfig = UniverseConfig()) -> BoundedVerdict:
    """Bounded check that ``pi`` (digits over ``I``) is exists-prime.

    For every ``u: J -> I``, ``v: K -> J`` and ``phi`` over ``K`` inside the
    bound with ``u* pi <= exists_v phi`` some section ``s`` of ``v`` gives
    ``u* pi <= s* phi``.
    """
    pi = [int(x) for x in pi]
    i = len(pi)
    if i > cfg.max_index_size:
        raise PreconditionError("predicate index set exceeds the audit bound")
    _check_fibers(h, cfg)
    table = _prime_table(h, cfg)
    cls = h.fiber(i).class_of(pi)
    for j in _sizes(cfg):
        for u in maps(j, i, cfg):
            p = h.reindex(u, i)[cls]
            hit = table[j][p]
            if hit is not None:
                return BoundedVerdict(False, {"pi": pi, "u": list(u), **hit})
    return BoundedVerdict(True)


def is_discrete(h: FiberOracle, delta, cfg: UniverseConfig = UniverseConfig()) -> BoundedVerdict:
    """Bounded check that ``delta`` (digits over ``I``) is discrete.

    For every surjection ``e: K -> J`` and ``f: K -> I`` with ``|K|`` up to
    ``cfg.span_bound``: if some ``phi`` over ``J`` has ``e* phi <= f* delta``
    then ``f`` must be constant on the fibers of ``e``.
    """
    delta = np.asarray([int(x) for x in delta], dtype=np.int64)
    i = delta.size
    for k in range(cfg.span_bound + 1):
        fs = maps(k, i, cfg)
        if not fs:
            continue
        farr = np.asarray(fs, dtype=np.int64).reshape(len(fs), k)
        targets = delta[farr] if k else farr
        for j in range(k + 1):
            if h.m**j > cfg.enumeration_cap:
                raise EnumerationCapExceeded(f"{h.m ** j} predicates over {j} points")
            phis = kernels.enumerate_digits(h.m, j)
            for e in surjections(k, j):
                earr = np.asarray(e, dtype=np.int64)
                factors = np.array(
                    [all(len({f[x] for x in range(k) if e[x] == y}) <= 1 for y in range(j)) for f in fs]
                )
                if factors.all():
                    continue
                hits = h.leq_digits(phis[:, earr] if k else phis[:, :0], targets)
                bad = np.argwhere(hits & ~factors[None, :])
                if bad.size:
                    p, f = bad[0]
                    return BoundedVerdict(
                        False,
                        {
                            "delta": delta.tolist(),
                            "e": list(e),
                            "f": list(fs[f]),
                            "J": j,
                            "phi": [int(x) for x in phis[p]],
                        },
                    )
    return BoundedVerdict(True)


# -------------------------------------------------------------------- tripos


def audit_tripos(
    h: FiberOracle,
    cfg: UniverseConfig = UniverseConfig(),
    constructor: Optional[Callable] = None,
    enough_primes: bool = False,
    rtr_char: bool = False,
) -> AuditReport:
    """Meets, existentials and implication/forall; the ``tripos`` law is their conjunction.

    ``enough_primes`` (existential completions only) checks that every
    predicate is an existential image of singleton-valued ones and that those
    are prime.  ``rtr_char`` audits the prime predicates, i.e. the base
    ``fam(U)``, for meets and a discrete generic predicate.
    """
    rep = AuditReport()
    rep.add(LawResult("generic_predicate", True, note="automatic for fam-backed oracles"))
    meets = audit_meets(h, cfg)
    rep.merge(meets)
    rep.merge(audit_exists(h, cfg, frobenius=meets.passed))
    rep.merge(audit_heyting_forall(h, cfg, constructor))
    core = [r for name, r in rep.laws.items() if name.split(".")[0] in ("meets", "exists", "implication", "forall")]
    first_bad = next((r for r in core if not r.passed and not r.skipped), None)
    first_bad = first_bad or next((r for r in core if not r.passed), None)
    rep.add(
        LawResult(
            "tripos",
            first_bad is None,
            None if first_bad is None else {"law": first_bad.law, **(first_bad.counterexample or {})},
        )
    )

    d = getattr(h, "dcompletion", None)
    if enough_primes or rtr_char:
        if d is None:
            raise PreconditionError("prime-predicate audits need an existential completion")
    if enough_primes:
        from .dcompletion import eta_checks

        eta = eta_checks(d, max_index=cfg.max_index_size)
        rep.add(LawResult("enough_primes.decomposition", eta.decomposition, eta.counterexamples.get("decomposition")))
        rep.add(
            LawResult(
                "enough_primes.singletons_prime",
                bool(eta.prime_singletons),
                eta.counterexamples.get("prime_singletons"),
            )
        )
    if rtr_char:
        base = fam_oracle(d.base)
        prim = audit_meets(base, cfg)
        rep.add(LawResult("rtr.prime_meets", prim.passed, _first_cex(prim)))
        disc = is_discrete(base, list(range(d.base.size)), cfg)
        rep.add(LawResult("rtr.discrete_generic", disc.passed, disc.counterexample))
    return rep


def _first_cex(report: AuditReport):
    for r in report.failures():
        return {"law": r.law, **(r.counterexample or {})}
    return None


# ------------------------------------------------------------------- recheck


def recheck(h: FiberOracle, law: str, cex: dict, cfg: UniverseConfig = UniverseConfig()) -> bool:
    """Re-evaluate one counterexample; ``True`` means it is still a failure."""
    if law.startswith("tripos") or law.startswith("rtr."):
        inner = dict(cex)
        name = inner.pop("law", None)
        if law == "rtr.discrete_generic":
            base = fam_oracle(h.dcompletion.base) if getattr(h, "dcompletion", None) else h
            return _recheck_discrete(base, list(range(base.m)), inner)
        if law == "rtr.prime_meets":
            base = fam_oracle(h.dcompletion.base)
            return recheck(base, name, inner, cfg)
        return recheck(h, name, inner, cfg)

    def fib(k):
        return h.fiber(k)

    if law == "meets.top":
        return fib(cex["index"]).top < 0
    if law == "meets.glb":
        f = fib(cex["index"])
        return f.glb[f.class_of(cex["phi"]), f.class_of(cex["psi"])] < 0
    if law == "meets.stable":
        u, i = tuple(cex["u"]), cex["I"]
        fi, fj = fib(i), fib(len(u))
        re = h.reindex(u, i)
        if cex.get("law") == "top":
            return re[fi.top] != fj.top
        x, y = fi.class_of(cex["phi"]), fi.class_of(cex["psi"])
        return re[fi.glb[x, y]] != fj.glb[re[x], re[y]]
    if law == "exists.adjoint":
        u, i = tuple(cex["u"]), cex["I"]
        p = fib(len(u)).class_of(cex["psi"])
        ex = h.exists(u, i)[p]
        return ex < 0 or (h.has_exists and h.given_exists(u, i)[p] != ex)
    if law in ("exists.beck_chevalley", "forall.beck_chevalley"):
        quant = h.exists if law.startswith("exists") else h.forall
        u, v, i = tuple(cex["u"]), tuple(cex["v"]), cex["I"]
        square = [(j, k) for j in range(len(u)) for k in range(len(v)) if u[j] == v[k]]
        ubar, vbar = tuple(k for _, k in square), tuple(j for j, _ in square)
        p = fib(len(v)).class_of(cex["psi"])
        return h.reindex(u, i)[quant(v, i)[p]] != quant(vbar, len(u))[h.reindex(ubar, len(v))[p]]
    if law == "exists.frobenius":
        u, i = tuple(cex["u"]), cex["I"]
        fi, fj = fib(i), fib(len(u))
        x, y = fi.class_of(cex["phi"]), fj.class_of(cex["psi"])
        ex, re = h.exists(u, i), h.reindex(u, i)
        return fi.glb[x, ex[y]] != ex[fj.glb[re[x], y]]
    if law == "implication":
        f = fib(cex["index"])
        return h.implication(cex["index"])[f.class_of(cex["phi"]), f.class_of(cex["psi"])] < 0
    if law == "implication.stable":
        u, i = tuple(cex["u"]), cex["I"]
        fi = fib(i)
        re = h.reindex(u, i)
        x, y = fi.class_of(cex["phi"]), fi.class_of(cex["psi"])
        return re[h.implication(i)[x, y]] != h.implication(len(u))[re[x], re[y]]
    if law == "forall.adjoint":
        u, i = tuple(cex["u"]), cex["I"]
        return h.forall(u, i)[fib(len(u)).class_of(cex["psi"])] < 0
    if law == "forall_impl.agrees":
        u, i = tuple(cex["u"]), cex["I"]
        brute = brute_force_forall_impl(h, u, i, cex["phi"], cex["psi"])
        got = fib(i).class_of(cex["constructed"]) if i or cex["constructed"] == [] else None
        return brute is None or fib(i).class_of(brute) != got
    if law == "exists_prime" or law.startswith("enough_primes"):
        return _recheck_prime(h, cex)
    if law == "discrete":
        return _recheck_discrete(h, cex["delta"], cex)
    raise KeyError(f"no recheck for law {law!r}")


def _recheck_prime(h, cex):
    u, v = tuple(cex["u"]), tuple(cex["v"])
    pi = cex["pi"]
    j = len(u)
    fj, fk = h.fiber(j), h.fiber(len(v))
    p = h.reindex(u, len(pi))[h.fiber(len(pi)).class_of(pi)]
    phi = fk.class_of(cex["phi"])
    if not fj.qleq[p, _exists_classes(h, v, j)[phi]]:
        return False
    for s in itertools.product(range(len(v)), repeat=j):
        if all(v[s[x]] == x for x in range(j)) and fj.qleq[p, h.reindex(s, len(v))[phi]]:
            return False
    return True


def _recheck_discrete(h, delta, cex):
    e, f = cex["e"], cex["f"]
    j = cex["J"]
    if any(len({f[x] for x in range(len(e)) if e[x] == y}) > 1 for y in range(j)):
        lhs = np.asarray([[cex["phi"][y] for y in e]], dtype=np.int64).reshape(1, len(e))
        rhs = np.asarray([[delta[x] for x in f]], dtype=np.int64).reshape(1, len(f))
        return bool(h.leq_digits(lhs, rhs)[0, 0])
    return False
