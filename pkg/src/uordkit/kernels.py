"""Hot numeric kernels.

Each kernel exists twice: a loop version compiled with numba and a
vectorised numpy version.  The public function dispatches on
:func:`uordkit._accel.backend`.  Both versions must return identical arrays;
``tests/test_kernels.py`` holds them to that.

Conventions: relations are ``bool`` matrices, subsets of an ``n``-element
carrier are bitmasks ``0 .. 2**n - 1``, predicates over an index set of size
``k`` are rows of little-endian digit arrays (digit ``i`` is the value at
index ``i``).
"""

import itertools

import numpy as np

from . import _accel
from ._accel import njit

# ---------------------------------------------------------------- composition


def _compose_numpy(r, s):
    return (r.astype(np.int32) @ s.astype(np.int32)) > 0


@njit
def _compose_numba(r, s):
    n, m = r.shape
    p = s.shape[1]
    out = np.zeros((n, p), dtype=np.bool_)
    for i in range(n):
        for j in range(m):
            if r[i, j]:
                for k in range(p):
                    if s[j, k]:
                        out[i, k] = True
    return out


def compose(r, s):
    """Relational composition, ``r`` applied first."""
    if _accel.backend() == "numba":
        return _compose_numba(r, s)
    return _compose_numpy(r, s)


# ------------------------------------------------------------------- lifting


def _lift_numpy(r):
    n = r.shape[0]
    size = 1 << n
    weights = 1 << np.arange(r.shape[1], dtype=np.int64)
    rowmask = (r.astype(np.int64) * weights).sum(axis=1)
    subsets = np.arange(size, dtype=np.int64)
    hit = (rowmask[:, None] & subsets[None, :]) != 0  # hit[a, V]
    out = np.empty((size, size), dtype=np.bool_)
    out[0] = True
    for u in range(1, size):
        low = u & -u
        out[u] = out[u ^ low] & hit[low.bit_length() - 1]
    return out


@njit
def _lift_numba(r):
    n = r.shape[0]
    size = 1 << n
    rowmask = np.zeros(n, dtype=np.int64)
    for a in range(n):
        for b in range(r.shape[1]):
            if r[a, b]:
                rowmask[a] |= 1 << b
    out = np.empty((size, size), dtype=np.bool_)
    out[0, :] = True
    for u in range(1, size):
        a = 0
        while not (u >> a) & 1:
            a += 1
        prev = u ^ (1 << a)
        m = rowmask[a]
        for v in range(size):
            out[u, v] = out[prev, v] and (m & v) != 0
    return out


def lift(r):
    """The relation ``[r]`` on subsets: every element of U has an r-successor in V."""
    if _accel.backend() == "numba":
        return _lift_numba(r)
    return _lift_numpy(r)


# --------------------------------------------------------------- fiber order


def _fiber_leq_numpy(p, q, gens):
    out = np.zeros((p.shape[0], q.shape[0]), dtype=np.bool_)
    for g in range(gens.shape[0]):
        acc = np.ones_like(out)
        for i in range(p.shape[1]):
            acc &= gens[g][p[:, i][:, None], q[:, i][None, :]]
        out |= acc
    return out


@njit
def _fiber_leq_numba(p, q, gens):
    n1, k = p.shape
    n2 = q.shape[0]
    out = np.zeros((n1, n2), dtype=np.bool_)
    for x in range(n1):
        for y in range(n2):
            for g in range(gens.shape[0]):
                ok = True
                for i in range(k):
                    if not gens[g, p[x, i], q[y, i]]:
                        ok = False
                        break
                if ok:
                    out[x, y] = True
                    break
    return out


def fiber_leq(p, q, gens):
    """``out[x, y]`` iff one generator contains every pair ``(p[x, i], q[y, i])``."""
    p = np.ascontiguousarray(p, dtype=np.int64)
    q = np.ascontiguousarray(q, dtype=np.int64)
    if _accel.backend() == "numba":
        return _fiber_leq_numba(p, q, gens)
    return _fiber_leq_numpy(p, q, gens)


# ------------------------------------------------------------ principal sets


def _principal_numpy(sets, cones):
    if sets.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    packed_cones = np.packbits(cones, axis=1)
    lookup = {}
    for m in range(packed_cones.shape[0] - 1, -1, -1):
        lookup[packed_cones[m].tobytes()] = m
    packed = np.packbits(sets, axis=1)
    return np.fromiter(
        (lookup.get(row.tobytes(), -1) for row in packed),
        dtype=np.int64,
        count=packed.shape[0],
    )


@njit
def _principal_numba(sets, cones):
    rows, q = sets.shape
    sizes = np.zeros(cones.shape[0], dtype=np.int64)
    for m in range(cones.shape[0]):
        sizes[m] = cones[m].sum()
    out = np.full(rows, -1, dtype=np.int64)
    for r in range(rows):
        count = 0
        for x in range(q):
            if sets[r, x]:
                count += 1
        for m in range(cones.shape[0]):
            if sizes[m] != count or not sets[r, m]:
                continue
            same = True
            for x in range(q):
                if sets[r, x] != cones[m, x]:
                    same = False
                    break
            if same:
                out[r] = m
                break
    return out


def principal(sets, cones):
    """For each row of ``sets`` the first ``m`` with ``sets[row] == cones[m]``, else -1.

    With ``cones = leq.T`` (principal down-sets) this finds the greatest
    element of a down-closed set; with ``cones = leq`` the least element of
    an up-closed set.
    """
    sets = np.ascontiguousarray(sets, dtype=np.bool_)
    cones = np.ascontiguousarray(cones, dtype=np.bool_)
    if _accel.backend() == "numba":
        return _principal_numba(sets, cones)
    return _principal_numpy(sets, cones)


# ----------------------------------------------------------- meets, implication


def _glb_table_numpy(leq):
    q = leq.shape[0]
    out = np.empty((q, q), dtype=np.int64)
    down = leq.T
    for x in range(q):
        out[x] = _principal_numpy(down & leq[:, x][None, :], down)
    return out


@njit
def _glb_table_numba(leq):
    q = leq.shape[0]
    down = np.ascontiguousarray(leq.T)
    lower = np.zeros((q, q), dtype=np.bool_)
    out = np.empty((q, q), dtype=np.int64)
    for x in range(q):
        for y in range(q):
            for z in range(q):
                lower[y, z] = leq[z, x] and leq[z, y]
        out[x] = _principal_numba(lower, down)
    return out


def glb_table(leq):
    """Greatest lower bounds in a finite poset given by ``leq``; -1 where none exists."""
    leq = np.ascontiguousarray(leq, dtype=np.bool_)
    if _accel.backend() == "numba":
        return _glb_table_numba(leq)
    return _glb_table_numpy(leq)


def _heyting_table_numpy(leq, meet):
    q = leq.shape[0]
    out = np.empty((q, q), dtype=np.int64)
    down = leq.T
    for phi in range(q):
        # rows psi, columns xi: xi /\ phi <= psi
        out[phi] = _principal_numpy(leq[meet[:, phi], :].T, down)
    return out


@njit
def _heyting_table_numba(leq, meet):
    q = leq.shape[0]
    down = np.ascontiguousarray(leq.T)
    sets = np.zeros((q, q), dtype=np.bool_)
    out = np.empty((q, q), dtype=np.int64)
    for phi in range(q):
        for psi in range(q):
            for xi in range(q):
                sets[psi, xi] = leq[meet[xi, phi], psi]
        out[phi] = _principal_numba(sets, down)
    return out


def heyting_table(leq, meet):
    """``out[phi, psi]``: greatest ``xi`` with ``meet(xi, phi) <= psi``, or -1.

    Exact when ``meet`` is a monotone meet table, so the candidate sets are
    down-closed.
    """
    leq = np.ascontiguousarray(leq, dtype=np.bool_)
    meet = np.ascontiguousarray(meet, dtype=np.int64)
    if _accel.backend() == "numba":
        return _heyting_table_numba(leq, meet)
    return _heyting_table_numpy(leq, meet)


# --------------------------------------------------------------- predicates


def enumerate_digits(m, k):
    """All ``m**k`` functions from a ``k``-element set into ``m`` elements, in index order."""
    count = m**k
    idx = np.arange(count, dtype=np.int64)
    digits = np.empty((count, k), dtype=np.int64)
    for i in range(k):
        digits[:, i] = (idx // (m**i)) % m
    return digits


def encode_digits(digits, m):
    digits = np.asarray(digits, dtype=np.int64)
    weights = m ** np.arange(digits.shape[-1], dtype=np.int64)
    return digits @ weights if digits.shape[-1] else np.zeros(digits.shape[:-1], dtype=np.int64)


# ----------------------------------------------------------- meet table search


@njit
def _contained(rel, gens):
    n = rel.shape[0]
    for g in range(gens.shape[0]):
        ok = True
        for a in range(n):
            for b in range(n):
                if rel[a, b] and not gens[g, a, b]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


@njit
def _meet_table_valid(table, gens):
    n = table.shape[0]
    rel = np.zeros((n, n), dtype=np.bool_)
    for a in range(n):
        for b in range(n):
            rel[table[a, b], a] = True
    if not _contained(rel, gens):
        return False
    rel[:, :] = False
    for a in range(n):
        for b in range(n):
            rel[table[a, b], b] = True
    if not _contained(rel, gens):
        return False
    for r in range(gens.shape[0]):
        for s in range(gens.shape[0]):
            rel[:, :] = False
            for a in range(n):
                for b in range(n):
                    if gens[r, a, b]:
                        for c in range(n):
                            if gens[s, a, c]:
                                rel[a, table[b, c]] = True
            if not _contained(rel, gens):
                return False
    return True


@njit
def _first_meet_table_numba(choices, counts, gens):
    n = gens.shape[1]
    cells = n * n
    pos = np.zeros(cells, dtype=np.int64)
    table = np.zeros((n, n), dtype=np.int64)
    for c in range(cells):
        if counts[c] == 0:
            return table, False
    while True:
        for c in range(cells):
            table[c // n, c % n] = choices[c, pos[c]]
        if _meet_table_valid(table, gens):
            return table, True
        # odometer, last cell fastest -> lexicographic order
        c = cells - 1
        while c >= 0:
            pos[c] += 1
            if pos[c] < counts[c]:
                break
            pos[c] = 0
            c -= 1
        if c < 0:
            return table, False


def _contained_many(rels, gens):
    # rels (T, n, n); True where some generator contains the relation
    out = np.zeros(rels.shape[0], dtype=np.bool_)
    for g in gens:
        out |= ~(rels & ~g[None]).any(axis=(1, 2))
    return out


def _first_meet_table_numpy(choices, counts, gens, chunk=1 << 14):
    n = gens.shape[1]
    lists = [choices[c, : counts[c]] for c in range(n * n)]
    if any(len(x) == 0 for x in lists):
        return np.zeros((n, n), dtype=np.int64), False
    product = itertools.product(*lists)
    rows = np.arange(n)
    while True:
        block = np.array(list(itertools.islice(product, chunk)), dtype=np.int64)
        if block.size == 0:
            return np.zeros((n, n), dtype=np.int64), False
        tables = block.reshape(-1, n, n)
        t = tables.shape[0]
        idx = np.arange(t)[:, None, None]
        lam = np.zeros((t, n, n), dtype=np.bool_)
        lam[idx, tables, rows[None, :, None]] = True
        rho = np.zeros((t, n, n), dtype=np.bool_)
        rho[idx, tables, rows[None, None, :]] = True
        ok = _contained_many(lam, gens) & _contained_many(rho, gens)
        for r in gens:
            for s in gens:
                pair = np.zeros((t, n, n), dtype=np.bool_)
                for a in range(n):
                    for b in np.flatnonzero(r[a]):
                        for c in np.flatnonzero(s[a]):
                            pair[np.arange(t), a, tables[:, b, c]] = True
                ok &= _contained_many(pair, gens)
        hits = np.flatnonzero(ok)
        if hits.size:
            return tables[hits[0]], True


def first_meet_table(allowed, gens):
    """Lexicographically first meet table passing the projection and pairing checks.

    ``allowed[c]`` lists candidate values of cell ``c = a * n + b`` in
    increasing order.  Returns ``(table, found)``.
    """
    cells = len(allowed)
    width = max((len(x) for x in allowed), default=0)
    choices = np.zeros((cells, max(width, 1)), dtype=np.int64)
    counts = np.zeros(cells, dtype=np.int64)
    for c, vals in enumerate(allowed):
        choices[c, : len(vals)] = vals
        counts[c] = len(vals)
    gens = np.ascontiguousarray(gens, dtype=np.bool_)
    if _accel.backend() == "numba":
        table, found = _first_meet_table_numba(choices, counts, gens)
    else:
        table, found = _first_meet_table_numpy(choices, counts, gens)
    return np.asarray(table), bool(found)
