"""Exact rational linear algebra and mixed strict/non-strict linear systems.

Lattice vectors are plain tuples of Python ints; rational vectors are tuples
of :class:`fractions.Fraction`.  Feasibility and projection use
Fourier-Motzkin elimination in which ``>`` is carried as a relation tag, so
boundary points are decided exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InputError, NotUnimodular, Unbounded
from .kernels import box_filter

GE, GT, EQ = ">=", ">", "="
_RELATIONS = (GE, GT, EQ)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def primitive(v: Sequence[int]) -> tuple:
    """Divide an integer vector by the gcd of its entries."""
    v = tuple(int(x) for x in v)
    g = math.gcd(*v) if v else 0
    if g == 0:
        raise InputError("primitive() of the zero vector")
    return tuple(x // g for x in v)


def _rref(rows):
    """Row-reduced echelon form over Q; returns (matrix, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    return len(_rref(rows)[1])


def det(M) -> int | Fraction:
    """Exact determinant (Bareiss for integer input, Gaussian otherwise)."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise InputError("determinant of a non-square matrix")
    if n == 0:
        return 1
    if all(isinstance(x, int) for row in M for x in row):
        a = [list(row) for row in M]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]
    a = [[Fraction(x) for x in row] for row in M]
    out = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            out = -out
        out *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return out


def inverse(M):
    """Exact inverse over Q, or ``None`` when singular."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise InputError("inverse of a non-square matrix")
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    red, piv = _rref(aug)
    if piv[:n] != list(range(n)):
        return None
    return [row[n:] for row in red]


def rational_solve(A, b) -> Optional[tuple]:
    """Solve ``A x = b`` for square ``A``; ``None`` when ``A`` is singular."""
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise InputError(f"rational_solve: shapes {len(A)}x{len(A[0]) if A else 0} and {len(b)} do not agree")
    inv = inverse(A)
    if inv is None:
        return None
    return tuple(sum(inv[i][j] * Fraction(b[j]) for j in range(n)) for i in range(n))


def unimodular_inverse(M):
    """Integer inverse of an integer matrix with determinant +-1."""
    d = det([[int(x) for x in row] for row in M])
    if abs(d) != 1:
        raise NotUnimodular(f"|det| = {abs(d)} != 1")
    inv = inverse(M)
    return [[int(x) for x in row] for row in inv]


def nullspace(rows, dim: int):
    """Basis of the rational nullspace ``{x : rows x = 0}`` as primitive integer vectors."""
    if not rows:
        return [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    red, piv = _rref(rows)
    free = [c for c in range(dim) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * dim
        x[f] = Fraction(1)
        for i, p in enumerate(piv):
            x[p] = -red[i][f]
        den = math.lcm(*(v.denominator for v in x))
        basis.append(primitive([int(v * den) for v in x]))
    return basis


# ---------------------------------------------------------------------------
# linear systems


@dataclass(frozen=True)
class Constraint:
    """``normal . x  rel  offset`` with ``rel`` one of ``>=``, ``>``, ``=``."""

    normal: tuple
    offset: Fraction
    rel: str = GE

    def __post_init__(self):
        if self.rel not in _RELATIONS:
            raise InputError(f"unknown relation {self.rel!r}")
        object.__setattr__(self, "normal", tuple(Fraction(x) for x in self.normal))
        object.__setattr__(self, "offset", Fraction(self.offset))

    def holds(self, x) -> bool:
        v = dot(self.normal, x)
        if self.rel == GE:
            return v >= self.offset
        if self.rel == GT:
            return v > self.offset
        return v == self.offset


@dataclass(frozen=True)
class LinearSystem:
    dim: int
    constraints: tuple = field(default_factory=tuple)

    def __post_init__(self):
        cs = tuple(self.constraints)
        for c in cs:
            if len(c.normal) != self.dim:
                raise InputError(f"constraint of dimension {len(c.normal)} in a system of dimension {self.dim}")
        object.__setattr__(self, "constraints", cs)

    @classmethod
    def build(cls, dim, rows: Iterable):
        """From ``(normal, rel, offset)`` triples; ``<=``/``<`` are flipped into ``>=``/``>``."""
        out = []
        for normal, rel, offset in rows:
            if rel in ("<=", "<"):
                normal = [-Fraction(x) for x in normal]
                offset = -Fraction(offset)
                rel = GE if rel == "<=" else GT
            out.append(Constraint(tuple(normal), offset, rel))
        return cls(dim, tuple(out))

    def __and__(self, other: "LinearSystem") -> "LinearSystem":
        if other.dim != self.dim:
            raise InputError("dimension mismatch")
        return LinearSystem(self.dim, self.constraints + other.constraints)

    def contains(self, x) -> bool:
        return all(c.holds(x) for c in self.constraints)

    def closure(self) -> "LinearSystem":
        return LinearSystem(self.dim, tuple(Constraint(c.normal, c.offset, GE if c.rel == GT else c.rel) for c in self.constraints))

    def permuted(self, order) -> "LinearSystem":
        return LinearSystem(self.dim, tuple(self.constraints[i] for i in order))


# Internal FM rows: (coeffs: tuple[int], offset: int, strict: bool, history: frozenset)
# meaning coeffs . x >= offset (or >).


def _normalize(coeffs, offset):
    coeffs = [Fraction(x) for x in coeffs]
    offset = Fraction(offset)
    den = math.lcm(*(x.denominator for x in coeffs), offset.denominator)
    ints = [int(x * den) for x in coeffs]
    off = int(offset * den)
    g = math.gcd(*ints, off)
    if g > 1:
        ints = [x // g for x in ints]
        off //= g
    return tuple(ints), off


def _reduce_rows(rows):
    """Drop trivial rows and rows dominated by a parallel row.

    A parallel row is only dropped when the dominating row's history is a
    subset of its own; otherwise the history-based pruning in the elimination
    could discard the combinations that the dropped row would have produced.
    Returns ``None`` when a trivially false row (``0 >= positive``) appears.
    """
    best = {}
    for coeffs, off, strict, hist in rows:
        if not any(coeffs):
            if off > 0 or (strict and off == 0):
                return None
            continue
        g = math.gcd(*coeffs)
        key = tuple(x // g for x in coeffs)
        val = Fraction(off, g)
        group = best.setdefault(key, [])
        if any(_dominates(v, s, h, val, strict, hist) for v, s, h in group):
            continue
        group[:] = [(v, s, h) for v, s, h in group if not _dominates(val, strict, hist, v, s, h)]
        group.append((val, strict, hist))
    out = []
    for key, group in best.items():
        for val, strict, hist in group:
            # offsets may be fractional after normalising; rescale to integers
            k = tuple(x * val.denominator for x in key)
            out.append((k, int(val * val.denominator), strict, hist))
    return out


def _dominates(v1, s1, h1, v2, s2, h2):
    tighter = v1 > v2 or (v1 == v2 and (s1 or not s2))
    return tighter and h1 <= h2


class _FM:
    """One Fourier-Motzkin run: equality substitution, then elimination."""

    def __init__(self, system: LinearSystem, keep: Sequence[int] = ()):
        self.dim = system.dim
        self.keep = set(keep)
        self.infeasible = False
        ineqs, eqs = [], []
        for i, c in enumerate(system.constraints):
            coeffs, off = _normalize(c.normal, c.offset)
            if c.rel == EQ:
                eqs.append((list(map(Fraction, coeffs)), Fraction(off)))
            else:
                ineqs.append((coeffs, off, c.rel == GT, frozenset([i])))
        self.subs = []  # (var, coeffs over all vars with zero at var, constant) meaning x_var = const - coeffs.x
        self._solve_equalities(eqs, ineqs)

    def _solve_equalities(self, eqs, ineqs):
        eqs = [(list(a), b) for a, b in eqs]
        while eqs:
            a, b = eqs.pop()
            cand = [j for j in range(self.dim) if a[j] != 0 and j not in self.keep]
            if not cand:
                cand = [j for j in range(self.dim) if a[j] != 0]
                if not cand:
                    if b != 0:
                        self.infeasible = True
                        return
                    continue
                # equality only involves kept variables: keep it as two inequalities
                coeffs, off = _normalize(a, b)
                neg = tuple(-x for x in coeffs)
                ineqs.append((coeffs, off, False, frozenset()))
                ineqs.append((neg, -off, False, frozenset()))
                continue
            j = cand[0]
            piv = a[j]
            # x_j = (b - sum_{i!=j} a_i x_i) / piv
            expr = [Fraction(0) if i == j else a[i] / piv for i in range(self.dim)]
            const = b / piv
            self.subs.append((j, expr, const))

            def subst(row_a, row_b):
                f = row_a[j]
                if f == 0:
                    return row_a, row_b
                new_a = [x - f * e for x, e in zip(row_a, expr)]
                new_a[j] = Fraction(0)
                return new_a, row_b - f * const

            eqs = [subst(x, y) for x, y in eqs]
            new_ineqs = []
            for coeffs, off, strict, hist in ineqs:
                na, nb = subst([Fraction(x) for x in coeffs], Fraction(off))
                na, nb = _normalize(na, nb)
                new_ineqs.append((na, nb, strict, hist))
            ineqs[:] = new_ineqs
        rows = _reduce_rows(ineqs)
        if rows is None:
            self.infeasible = True
            self.rows = []
        else:
            self.rows = rows

    def eliminate(self):
        """Eliminate every non-kept, non-substituted variable; records stages."""
        self.stages = []
        substituted = {s[0] for s in self.subs}
        todo = [j for j in range(self.dim) if j not in self.keep and j not in substituted]
        rows = self.rows
        steps = 0
        while todo and not self.infeasible:
            # cheapest variable first
            def cost(j):
                p = sum(1 for r in rows if r[0][j] > 0)
                n = sum(1 for r in rows if r[0][j] < 0)
                return p * n - p - n

            j = min(todo, key=cost)
            todo.remove(j)
            self.stages.append((j, rows))
            steps += 1
            pos = [r for r in rows if r[0][j] > 0]
            neg = [r for r in rows if r[0][j] < 0]
            new = [r for r in rows if r[0][j] == 0]
            for pc, po, ps, ph in pos:
                for nc, no, ns, nh in neg:
                    hist = ph | nh
                    # Chernikov: rows built from more than steps+1 originals are redundant
                    if len(hist) > steps + 1:
                        continue
                    a, b = pc[j], -nc[j]
                    coeffs = tuple(b * x + a * y for x, y in zip(pc, nc))
                    new.append((coeffs, b * po + a * no, ps or ns, hist))
            red = _reduce_rows(new)
            if red is None:
                self.infeasible = True
                rows = []
                break
            rows = red
        self.rows = rows
        return self

    def witness(self):
        """Back-substitute a point satisfying the original system."""
        x = [Fraction(0)] * self.dim
        for j, rows in reversed(self.stages):
            x[j] = _pick(_interval(rows, j, x))
        for j, expr, const in reversed(self.subs):
            x[j] = const - sum(e * v for e, v in zip(expr, x))
        return tuple(x)


def _interval(rows, j, x):
    lo, lo_s, hi, hi_s = None, False, None, False
    for coeffs, off, strict, _ in rows:
        a = coeffs[j]
        rest = sum(Fraction(c) * v for i, (c, v) in enumerate(zip(coeffs, x)) if i != j)
        if a > 0:
            bound = (off - rest) / a
            if lo is None or bound > lo or (bound == lo and strict):
                lo, lo_s = bound, strict
        elif a < 0:
            bound = (off - rest) / a
            if hi is None or bound < hi or (bound == hi and strict):
                hi, hi_s = bound, strict
    return lo, lo_s, hi, hi_s


def _ok_lower(v, lo, lo_s):
    return lo is None or v > lo or (v == lo and not lo_s)


def _ok_upper(v, hi, hi_s):
    return hi is None or v < hi or (v == hi and not hi_s)


def _pick(iv):
    lo, lo_s, hi, hi_s = iv
    if _ok_lower(Fraction(0), lo, lo_s) and _ok_upper(Fraction(0), hi, hi_s):
        return Fraction(0)
    if lo is not None and hi is not None:
        for cand in (Fraction(math.ceil(lo)), Fraction(math.floor(hi))):
            if _ok_lower(cand, lo, lo_s) and _ok_upper(cand, hi, hi_s):
                return cand
        return (lo + hi) / 2
    if lo is not None:
        c = Fraction(math.floor(lo) + 1) if lo_s else Fraction(math.ceil(lo))
        return c
    c = Fraction(math.ceil(hi) - 1) if hi_s else Fraction(math.floor(hi))
    return c


def feasible(system: LinearSystem) -> Optional[tuple]:
    """A rational point satisfying every constraint, or ``None`` if there is none."""
    if not system.constraints:
        return tuple(Fraction(0) for _ in range(system.dim))
    fm = _FM(system)
    if fm.infeasible:
        return None
    fm.eliminate()
    if fm.infeasible:
        return None
    x = fm.witness()
    if not system.contains(x):  # pragma: no cover - guards the elimination itself
        raise AssertionError("Fourier-Motzkin witness violates the system")
    return x


def project(system: LinearSystem, keep: Sequence[int]) -> Optional[LinearSystem]:
    """Exact projection onto the coordinates ``keep`` (in that order); ``None`` if empty."""
    keep = list(keep)
    fm = _FM(system, keep)
    if fm.infeasible:
        return None
    fm.eliminate()
    if fm.infeasible:
        return None
    rows = []
    for coeffs, off, strict, _ in fm.rows:
        rows.append(Constraint(tuple(coeffs[k] for k in keep), Fraction(off), GT if strict else GE))
    # substituted kept variables would have been expressed through others; only
    # non-kept variables are ever substituted, so nothing else to add
    return LinearSystem(len(keep), tuple(rows))


def coordinate_bounds(system: LinearSystem, i: int):
    """``(lo, lo_strict, hi, hi_strict)`` of coordinate ``i`` over a non-empty system.

    ``None`` bounds mean unbounded in that direction.
    """
    proj = project(system, [i])
    if proj is None:
        raise InputError("coordinate_bounds of an empty system")
    return _interval([(c.normal, c.offset, c.rel == GT, None) for c in proj.constraints], 0, [Fraction(0)])


def integer_box(system: LinearSystem):
    """Integer bounding box of a bounded non-empty system, raising :class:`Unbounded` otherwise."""
    lo, hi = [], []
    for i in range(system.dim):
        l, ls, h, hs = coordinate_bounds(system, i)
        if l is None or h is None:
            raise Unbounded(f"coordinate {i} is unbounded")
        lo.append(math.floor(l) + 1 if ls and l.denominator == 1 else math.ceil(l))
        hi.append(math.ceil(h) - 1 if hs and h.denominator == 1 else math.floor(h))
    return lo, hi


def lattice_points(system: LinearSystem, backend=None) -> list:
    """All integer points of a bounded system, in lexicographic order."""
    if feasible(system) is None:
        return []
    lo, hi = integer_box(system)
    A, b, strict = [], [], []
    for c in system.constraints:
        coeffs, off = _normalize(c.normal, c.offset)
        if c.rel == EQ:
            A += [coeffs, tuple(-x for x in coeffs)]
            b += [off, -off]
            strict += [False, False]
        else:
            A.append(coeffs)
            b.append(off)
            strict.append(c.rel == GT)
    pts = box_filter(A, b, strict, lo, hi, backend=backend)
    return [tuple(int(v) for v in p) for p in np.asarray(pts)]
