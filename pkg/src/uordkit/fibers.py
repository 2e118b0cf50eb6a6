"""Enumerated fibers of ``fam(U)``.

The fiber over an index set of size ``k`` holds all ``m**k`` functions into
the ``m``-element carrier, ordered by "one generator contains the pairing
graph".  We also keep its poset reflection (classes of mutually below
predicates), on which the law checks run.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .errors import EnumerationCapExceeded


@dataclass(frozen=True)
class Fiber:
    k: int
    m: int
    digits: np.ndarray  # (N, k) predicate values
    leq: np.ndarray  # (N, N)
    cls: np.ndarray  # (N,) class of each predicate
    reps: np.ndarray  # (Q,) smallest predicate index of each class
    qleq: np.ndarray  # (Q, Q) order on classes

    @property
    def size(self):
        return self.digits.shape[0]

    @property
    def classes(self):
        return self.reps.shape[0]

    @cached_property
    def rep_digits(self):
        return self.digits[self.reps]

    def index_of(self, values) -> int:
        return int(kernels.encode_digits(np.asarray(values, dtype=np.int64), self.m))

    def class_of(self, values) -> int:
        return int(self.cls[self.index_of(values)])

    def classes_of_digits(self, digits) -> np.ndarray:
        """Class of each row of a ``(R, k)`` digit array."""
        return self.cls[kernels.encode_digits(digits, self.m)]

    @cached_property
    def top(self) -> int:
        """Class that is above everything, or -1."""
        hits = np.flatnonzero(self.qleq.all(axis=0))
        return int(hits[0]) if hits.size else -1

    @cached_property
    def glb(self) -> np.ndarray:
        return kernels.glb_table(self.qleq)

    @cached_property
    def has_all_glbs(self) -> bool:
        return bool((self.glb >= 0).all())


def build_fiber(gens: np.ndarray, m: int, k: int, cap: int | None = None) -> Fiber:
    count = m**k
    if cap is not None and count > cap:
        raise EnumerationCapExceeded(f"fiber over {k} points has {count} predicates (cap {cap})")
    digits = kernels.enumerate_digits(m, k)
    leq = kernels.fiber_leq(digits, digits, gens)
    eq = leq & leq.T
    cls_first = eq.argmax(axis=1)  # smallest equivalent index
    reps, cls = np.unique(cls_first, return_inverse=True)
    qleq = np.ascontiguousarray(leq[np.ix_(reps, reps)])
    return Fiber(k, m, digits, leq, cls.astype(np.int64), reps.astype(np.int64), qleq)


def all_maps(src: int, dst: int):
    """Every function ``range(src) -> range(dst)`` as a tuple."""
    return list(itertools.product(range(dst), repeat=src))


def reindex_classes(fib_i: Fiber, fib_j: Fiber, u) -> np.ndarray:
    """Class map ``phi |-> phi o u`` from ``fib_i`` (over I) to ``fib_j`` (over J)."""
    u = np.asarray(u, dtype=np.int64)
    if u.size == 0:
        return np.zeros(fib_i.classes, dtype=np.int64) + int(fib_j.cls[0])
    return fib_j.classes_of_digits(fib_i.rep_digits[:, u])
