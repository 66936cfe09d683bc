"""Hot integer kernels with a numba path and a pure-numpy path.

Two loops dominate run time:

* counting vector partitions, i.e. the number of ``m`` in ``N^d`` with
  ``sum_k m_k * den_k == target`` (one coefficient of a product of geometric
  series), for a batch of targets;
* filtering the integer points of a box against a system of integer linear
  inequalities.

``backend=None`` picks numba when it is importable and not disabled through
``EQMORSE_DISABLE_NUMBA``; ``"numba"``/``"numpy"`` force a path (``"numba"``
without numba runs the same loop interpreted, which is only useful in tests).
"""

import functools
import math
from fractions import Fraction

import numpy as np

from . import _accel
from ._accel import njit

# Above this magnitude int64 products in the kernels could overflow.
_SAFE = 1 << 28


@njit
def _count_loop(free, free_pair, basis, adj, det, cols, targets, budgets):
    n_targets = targets.shape[0]
    f = free.shape[0]
    r = targets.shape[1]
    b = basis.shape[0]
    out = np.zeros(n_targets, np.int64)
    m = np.zeros(max(f, 1), np.int64)
    res = np.zeros(r, np.int64)
    coef = np.zeros(max(b, 1), np.int64)
    for j in range(n_targets):
        budget = budgets[j]
        if budget < 0:
            continue
        for k in range(f):
            m[k] = 0
        used = 0
        while True:
            for c in range(r):
                s = targets[j, c]
                for k in range(f):
                    s -= m[k] * free[k, c]
                res[c] = s
            ok = True
            for i in range(b):
                num = 0
                for c in range(b):
                    num += res[cols[c]] * adj[c, i]
                if num % det != 0 or num < 0:
                    ok = False
                    break
                coef[i] = num // det
            if ok:
                for c in range(r):
                    s = 0
                    for i in range(b):
                        s += coef[i] * basis[i, c]
                    if s != res[c]:
                        ok = False
                        break
            if ok:
                out[j] += 1
            k = 0
            while k < f:
                m[k] += 1
                used += free_pair[k]
                if used <= budget:
                    break
                used -= m[k] * free_pair[k]
                m[k] = 0
                k += 1
            if k == f:
                break
    return out


def _free_tuples(free_pair, bmax):
    """All tuples ``m`` with ``m . free_pair <= bmax`` and their pairing sums."""
    tuples = np.zeros((1, 0), dtype=np.int64)
    used = np.zeros(1, dtype=np.int64)
    for p in free_pair:
        reps = (bmax - used) // p + 1
        idx = np.repeat(np.arange(len(tuples)), reps)
        starts = np.repeat(np.cumsum(reps) - reps, reps)
        vals = np.arange(int(reps.sum()), dtype=np.int64) - starts
        tuples = np.column_stack([tuples[idx], vals])
        used = used[idx] + vals * p
    return tuples, used


def _count_numpy(free, free_pair, basis, adj, det, cols, targets, budgets):
    out = np.zeros(len(targets), dtype=np.int64)
    if len(targets) == 0:
        return out
    bmax = int(budgets.max())
    if bmax < 0:
        return out
    tuples, used = _free_tuples(free_pair, bmax)
    shifted = tuples @ free if free.shape[0] else np.zeros((1, targets.shape[1]), dtype=np.int64)
    for j in range(len(targets)):
        if budgets[j] < 0:
            continue
        sel = used <= budgets[j]
        res = targets[j] - shifted[sel]
        if basis.shape[0]:
            num = res[:, cols] @ adj
            ok = np.all(num % det == 0, axis=1) & np.all(num >= 0, axis=1)
            coef = num // det
            ok &= np.all(coef @ basis == res, axis=1)
        else:
            ok = np.all(res == 0, axis=1)
        out[j] = int(ok.sum())
    return out


def _rank(rows):
    from .lattice import rank

    return rank(rows)


def _prepare(dens, theta):
    """Split denominators into an independent 'basis' part and enumerated 'free' part."""
    dens = tuple(tuple(int(x) for x in v) for v in dens)
    pair = [sum(a * b for a, b in zip(v, theta)) for v in dens]
    order = tuple(sorted(range(len(dens)), key=lambda k: (pair[k], k)))
    prep = dict(_prepare_ordered(dens, order, len(theta)))
    prep["free_pair"] = np.array([pair[k] for k in prep["free_idx"]], dtype=np.int64)
    return prep


@functools.lru_cache(maxsize=4096)
def _prepare_ordered(dens, order, r):
    # Depends on theta only through the pairing order, so chamber scans hit the cache.
    from .lattice import det as exact_det, inverse

    basis_idx = []
    for k in order:
        if _rank([dens[i] for i in basis_idx + [k]]) == len(basis_idx) + 1:
            basis_idx.append(k)
    free_idx = [k for k in range(len(dens)) if k not in basis_idx]
    b = len(basis_idx)
    cols = []
    for c in range(r):
        trial = cols + [c]
        sub = [[dens[i][cc] for cc in trial] for i in basis_idx]
        if _rank([list(col) for col in zip(*sub)]) == len(trial):
            cols = trial
        if len(cols) == b:
            break
    if b:
        minor = [[dens[i][c] for c in cols] for i in basis_idx]
        d = exact_det(minor)
        inv = inverse(minor)
        # num_i = sum_c res[cols[c]] * adj[c, i]  with  adj = d * minor^{-1}
        adj = [[int(inv[c][i] * d) for i in range(b)] for c in range(b)]
        if d < 0:
            d = -d
            adj = [[-x for x in row] for row in adj]
    else:
        d, adj = 1, []
    return {
        "free": np.array([dens[k] for k in free_idx], dtype=np.int64).reshape(len(free_idx), r),
        "free_idx": tuple(free_idx),
        "basis": np.array([dens[k] for k in basis_idx], dtype=np.int64).reshape(b, r),
        "adj": np.array(adj, dtype=np.int64).reshape(b, b),
        "det": int(d),
        "cols": np.array(cols, dtype=np.int64),
    }


def count_vector_partitions(dens, theta, targets, backend=None):
    """Number of ``m in N^d`` with ``sum_k m_k dens[k] == t`` for each target ``t``.

    ``theta`` must pair strictly positively with every denominator; it bounds
    the enumeration, so the count is exact.
    """
    theta = [int(x) for x in theta]
    targets = np.asarray(targets, dtype=np.int64).reshape(-1, len(theta))
    for v in dens:
        if sum(int(a) * b for a, b in zip(v, theta)) <= 0:
            raise ValueError(f"denominator {tuple(v)} does not pair positively with {tuple(theta)}")
    prep = _prepare(dens, theta)
    budgets = targets @ np.array(theta, dtype=np.int64)
    big = max(
        [int(np.abs(a).max()) for a in (targets, prep["free"], prep["basis"], prep["adj"]) if a.size] + [prep["det"]]
    )
    if backend is None:
        backend = _accel.backend()
    if big > _SAFE:
        return _count_exact(dens, theta, targets)
    args = (prep["free"], prep["free_pair"], prep["basis"], prep["adj"], prep["det"], prep["cols"], targets, budgets)
    if backend == "numba":
        return _count_loop(*args)
    return _count_numpy(*args)


def _count_exact(dens, theta, targets):
    # Arbitrary-precision fallback for inputs outside int64 comfort.
    dens = [tuple(int(x) for x in v) for v in dens]
    pair = [sum(a * b for a, b in zip(v, theta)) for v in dens]
    out = []
    for t in targets.tolist():
        t = tuple(int(x) for x in t)

        def rec(k, res):
            if k == len(dens):
                return int(all(x == 0 for x in res))
            budget = sum(a * b for a, b in zip(res, theta))
            total = 0
            m = 0
            while m * pair[k] <= budget:
                total += rec(k + 1, tuple(x - m * y for x, y in zip(res, dens[k])))
                m += 1
            return total

        out.append(rec(0, t))
    return np.array(out, dtype=object)


@njit
def _box_loop(A, b, strict, lo, hi):
    r = lo.shape[0]
    m = A.shape[0]
    total = 1
    for c in range(r):
        total *= hi[c] - lo[c] + 1
    keep = np.zeros(total, np.bool_)
    x = lo.copy()
    n_keep = 0
    for idx in range(total):
        ok = True
        for i in range(m):
            s = 0
            for c in range(r):
                s += A[i, c] * x[c]
            if strict[i]:
                if s <= b[i]:
                    ok = False
                    break
            elif s < b[i]:
                ok = False
                break
        keep[idx] = ok
        if ok:
            n_keep += 1
        c = r - 1
        while c >= 0:
            x[c] += 1
            if x[c] <= hi[c]:
                break
            x[c] = lo[c]
            c -= 1
    out = np.zeros((n_keep, r), np.int64)
    x = lo.copy()
    j = 0
    for idx in range(total):
        if keep[idx]:
            for c in range(r):
                out[j, c] = x[c]
            j += 1
        c = r - 1
        while c >= 0:
            x[c] += 1
            if x[c] <= hi[c]:
                break
            x[c] = lo[c]
            c -= 1
    return out


def _box_numpy(A, b, strict, lo, hi):
    r = len(lo)
    shape = tuple(int(h - l + 1) for l, h in zip(lo, hi))
    pts = np.indices(shape, dtype=np.int64).reshape(r, -1).T + lo
    vals = pts @ A.T
    ok = np.where(strict, vals > b, vals >= b)
    return pts[np.all(ok, axis=1)]


def box_filter(A, b, strict, lo, hi, backend=None):
    """Integer points of the box ``lo <= x <= hi`` (lex order) with ``A x >= b`` (``>`` where strict)."""
    A = np.asarray(A, dtype=np.int64).reshape(-1, len(lo))
    b = np.asarray(b, dtype=np.int64)
    strict = np.asarray(strict, dtype=np.bool_)
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    if np.any(hi < lo):
        return np.zeros((0, len(lo)), dtype=np.int64)
    if backend is None:
        backend = _accel.backend()
    if backend == "numba":
        return _box_loop(A, b, strict, lo, hi)
    return _box_numpy(A, b, strict, lo, hi)


def integer_rows(rows):
    """Scale rational rows to integer rows (row-wise, by positive factors)."""
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        den = math.lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * den) for x in row])
    return out
