"""Universal relations and the relational-completeness search.

A cartesian uniform preorder is relationally complete when one relation
``@`` in it can simulate every other: for each ``r`` there is a function
``r~`` (graph in ``R``) with ``(a^b, c) in r  =>  (r~(a)^b, c) in @``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cartesian import CartesianWitness, check_cartesian
from .dcompletion import dcomplete, forall_impl_batch
from .errors import NotCartesian
from .logicaudit import UniverseConfig, audit_tripos, dfam_oracle
from .relcore import BinRel, FunTable
from .uord import UniformPreorder, contains


@dataclass(frozen=True)
class RelCompWitness:
    at_name: str
    at: BinRel
    tilde: dict  # generator name -> FunTable
    tilde_in: dict = field(default_factory=dict)  # generator name -> generator containing the graph of r~

    def to_dict(self):
        return {
            "at": self.at_name,
            "tilde": {name: f.named() for name, f in self.tilde.items()},
            "tilde_in": dict(self.tilde_in),
        }


def _require_cartesian(u: UniformPreorder, cart: Optional[CartesianWitness]) -> CartesianWitness:
    if cart is None:
        raise NotCartesian("relational completeness needs a cartesian witness")
    checked = check_cartesian(u, cart.meet, cart.top)
    if checked is None:
        raise NotCartesian("the supplied meet and top do not pass the cartesian check")
    return checked


def admissible_values(r: BinRel, at: BinRel, table: np.ndarray) -> np.ndarray:
    """``V[a, v]``: ``v`` may stand in for ``a``, i.e. ``(a^b, c) in r`` implies ``(v^b, c) in at``."""
    rb, ab = r.bits, at.bits
    # need[a, b, c] = (a^b, c) in r ; have[v, b, c] = (v^b, c) in at
    need = rb[table]
    have = ab[table]
    return ~(need[:, None, :, :] & ~have[None, :, :, :]).any(axis=(2, 3))


def check_relational_completeness(u: UniformPreorder, cart: Optional[CartesianWitness]) -> Optional[RelCompWitness]:
    """First witness in generator order, or ``None`` when no generator serves as ``@``.

    Only generators are tried for ``@`` and for ``r``: the defining implication
    is monotone in ``@`` and antitone in ``r``.
    """
    cart = _require_cartesian(u, cart)
    table = cart.table()
    n = u.size
    for at_name, at in u.generators:
        tilde, tilde_in = {}, {}
        for r_name, r in u.generators:
            allowed = admissible_values(r, at, table)
            found = None
            for g_name, g in u.generators:
                ok = allowed & g.bits
                if ok.any(axis=1).all():
                    found = g_name, [int(np.flatnonzero(ok[a])[0]) for a in range(n)]
                    break
            if found is None:
                break
            tilde_in[r_name] = found[0]
            tilde[r_name] = FunTable(u.carrier, u.carrier, found[1])
        else:
            return RelCompWitness(at_name, at, tilde, tilde_in)
    return None


def validate_relcomp(u: UniformPreorder, cart: CartesianWitness, w: RelCompWitness) -> Optional[dict]:
    """Exhaustive re-check of a witness; ``None`` if valid, else the first violation."""
    if contains(u, w.at) is None:
        return {"reason": "universal relation not in R"}
    table = cart.table()
    n = u.size
    for r_name, r in u.generators:
        f = w.tilde.get(r_name)
        if f is None:
            return {"reason": "missing function", "r": r_name}
        if contains(u, f.graph()) is None:
            return {"reason": "function graph not in R", "r": r_name}
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if r.bits[table[a, b], c] and not w.at.bits[table[f(a), b], c]:
                        return {"reason": "implication fails", "r": r_name, "a": a, "b": b, "c": c}
    return None


# ------------------------------------------------------------ cross-validation


@dataclass
class CrossEntry:
    name: str
    size: int
    relcomp: bool
    tripos: bool
    constructor_agrees: Optional[bool]
    failed_law: Optional[str]
    seconds: float

    @property
    def agree(self):
        return self.relcomp == self.tripos

    def to_dict(self):
        return {
            "name": self.name,
            "size": self.size,
            "relcomp": self.relcomp,
            "tripos": self.tripos,
            "agree": self.agree,
            "forall_impl_agrees": self.constructor_agrees,
            "failed_law": self.failed_law,
        }


@dataclass
class CrossReport:
    entries: list

    @property
    def disagreements(self):
        return [e for e in self.entries if not e.agree or e.constructor_agrees is False]

    @property
    def passed(self):
        return not self.disagreements

    def to_dict(self):
        return {
            "entries": [e.to_dict() for e in self.entries],
            "disagreements": [e.name for e in self.disagreements],
            "positives": sum(e.relcomp for e in self.entries),
            "negatives": sum(not e.relcomp for e in self.entries),
        }


def cross_validate_one(name, u: UniformPreorder, cart: CartesianWitness, cfg: UniverseConfig) -> CrossEntry:
    start = time.perf_counter()
    w = check_relational_completeness(u, cart)
    d = dcomplete(u)
    constructor = None if w is None else forall_impl_batch(d, w.at, cart)
    report = audit_tripos(dfam_oracle(d), cfg, constructor=constructor)
    tripos = report.laws["tripos"]
    failed = None if tripos.passed else tripos.counterexample.get("law")
    agrees = None if w is None else report.laws["forall_impl.agrees"].passed
    return CrossEntry(name, u.size, w is not None, tripos.passed, agrees, failed, time.perf_counter() - start)


def cross_validate(corpus, cfg: UniverseConfig = UniverseConfig()) -> CrossReport:
    """Compare the witness search with the tripos audit of the completion, entry by entry.

    ``corpus`` yields ``(name, uord, cartesian_witness)`` triples.
    """
    return CrossReport([cross_validate_one(name, u, cart, cfg) for name, u, cart in corpus])
