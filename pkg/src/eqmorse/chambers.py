"""Action chambers of the isotropy-weight hyperplane arrangement.

Every chamber of an essential central arrangement has an extreme ray, and
every extreme ray is cut out by hyperplanes of the arrangement.  So the
chambers are found by visiting each candidate ray ``r`` and, recursively, the
chambers ``u`` of the arrangement of hyperplanes through ``r``; the point
``M r + u`` for large ``M`` lies in the chamber adjacent to ``r`` on the ``u``
side.  The plain sign-vector search with feasibility pruning is kept as
:func:`enumerate_chambers_by_signs` for cross-checking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import InputError, PolarizationError
from .lattice import GT, Constraint, LinearSystem, dot, feasible, inverse, nullspace, primitive, rank


def canonical(v) -> tuple:
    """Primitive representative with first non-zero entry positive."""
    v = primitive(v)
    first = next(x for x in v if x != 0)
    return v if first > 0 else tuple(-x for x in v)


def arrangement_normals(weights) -> tuple:
    """Distinct hyperplane normals of a list of non-zero weights, deterministic order."""
    out = set()
    for w in weights:
        w = tuple(int(x) for x in w)
        if not any(w):
            raise InputError("zero weight has no hyperplane")
        out.add(canonical(w))
    return tuple(sorted(out))


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Chamber:
    normals: tuple
    signs: tuple
    representative: tuple
    index: int = -1

    def __post_init__(self):
        for n, s in zip(self.normals, self.signs):
            if _sign(dot(n, self.representative)) != s:
                raise InputError(f"representative {self.representative} is not inside the chamber")

    @property
    def sign_vector(self) -> dict:
        return dict(zip(self.normals, self.signs))

    @property
    def rank(self) -> int:
        return len(self.representative)

    def contains(self, theta) -> bool:
        return all(_sign(dot(n, theta)) == s for n, s in zip(self.normals, self.signs))

    def closure_contains(self, v) -> bool:
        return all(s * dot(n, v) >= 0 for n, s in zip(self.normals, self.signs))

    def side(self, weight) -> int:
        """Sign of ``<weight, theta>`` for any ``theta`` in the chamber."""
        s = _sign(dot(weight, self.representative))
        if s == 0:
            raise PolarizationError(f"weight {tuple(weight)} is orthogonal to {self.representative}")
        return s

    def name(self) -> str:
        return f"C{self.index}"


# ---------------------------------------------------------------------------
# ray-based enumeration


def _lift(W, y):
    """Integer ``x`` with ``W x`` a positive multiple of ``y`` (``W`` of full row rank)."""
    k = len(W)
    WWt = [[dot(W[i], W[j]) for j in range(k)] for i in range(k)]
    inv = inverse(WWt)
    z = [sum(inv[i][j] * y[j] for j in range(k)) for i in range(k)]
    d = len(W[0])
    x = [sum(W[i][c] * z[i] for i in range(k)) for c in range(d)]
    den = 1
    for v in x:
        den = den * v.denominator // np.gcd(den, v.denominator)
    return [int(v * den) for v in x]


def _points(normals: list, d: int) -> list:
    """One integer point in each chamber of the arrangement ``normals`` in ``Z^d``."""
    if not normals:
        return [tuple([0] * d)]
    k = rank(normals)
    if k < d:
        # reduce to the essential arrangement on the row space
        W = []
        for nv in normals:
            if rank(W + [list(nv)]) > len(W):
                W.append(list(nv))
        # coordinates of each normal in the basis W
        WWt = [[dot(W[i], W[j]) for j in range(k)] for i in range(k)]
        inv = inverse(WWt)
        reduced = []
        for nv in normals:
            b = [dot(nv, W[j]) for j in range(k)]
            c = [sum(b[j] * inv[j][i] for j in range(k)) for i in range(k)]
            den = 1
            for v in c:
                den = den * v.denominator // np.gcd(den, v.denominator)
            reduced.append(primitive([int(v * den) for v in c]))
        # N x = c . (W x); so a point y for the reduced arrangement lifts through W
        return [tuple(_lift(W, y)) for y in _points(reduced, k)]
    if d == 1:
        return [(1,), (-1,)]
    rays = set()
    for sub in itertools.combinations(normals, d - 1):
        ns = nullspace([list(x) for x in sub], d)
        if len(ns) == 1:
            r = ns[0]
            rays.add(tuple(r))
            rays.add(tuple(-x for x in r))
    seen = {}
    for r in sorted(rays):
        local = [nv for nv in normals if dot(nv, r) == 0]
        far = [nv for nv in normals if dot(nv, r) != 0]
        for u in _points(local, d):
            big = max((abs(dot(nv, u)) for nv in far), default=0) + 1
            x = tuple(big * a + b for a, b in zip(r, u))
            key = tuple(_sign(dot(nv, x)) for nv in normals)
            if 0 in key:  # pragma: no cover - excluded by the choice of big
                raise AssertionError("chamber point on a wall")
            seen.setdefault(key, x)
    return list(seen.values())


def _nice_representatives(normals, sign_rows, fallback):
    """Sum of candidate rays in each chamber's closure, when that is interior."""
    d = len(fallback[0])
    if rank(normals) != d or d < 2:
        return [primitive(x) for x in fallback]
    rays = set()
    for sub in itertools.combinations(normals, d - 1):
        ns = nullspace([list(x) for x in sub], d)
        if len(ns) == 1:
            rays.add(ns[0])
            rays.add(tuple(-x for x in ns[0]))
    rays = sorted(rays)
    N = np.array(normals, dtype=np.int64)
    R = np.array(rays, dtype=np.int64)
    SR = np.sign(R @ N.T)
    S = np.array(sign_rows, dtype=np.int64)
    conflicts = (SR == 1).astype(np.int64) @ (S == -1).T.astype(np.int64) + (SR == -1).astype(np.int64) @ (S == 1).T.astype(np.int64)
    out = []
    for j, signs in enumerate(sign_rows):
        members = R[conflicts[:, j] == 0]
        cand = tuple(int(x) for x in members.sum(axis=0)) if len(members) else (0,) * d
        if any(cand) and all(_sign(dot(nv, cand)) == s for nv, s in zip(normals, signs)):
            out.append(primitive(cand))
        else:
            out.append(primitive(fallback[j]))
    return out


def _order(chs):
    # all-positive sign vector first, then lexicographic with + before -
    return sorted(chs, key=lambda c: tuple(-s for s in c[0]))


def _finish(normals, found) -> list:
    found = _order(found)
    reps = _nice_representatives(list(normals), [s for s, _ in found], [x for _, x in found])
    return [Chamber(normals, s, rep, i) for i, ((s, _), rep) in enumerate(zip(found, reps))]


def enumerate_chambers_of(weights, dim: int) -> list:
    normals = arrangement_normals(weights)
    for nv in normals:
        if len(nv) != dim:
            raise InputError("weights of mixed rank")
    pts = _points([list(nv) for nv in normals], dim)
    found = [(tuple(_sign(dot(nv, x)) for nv in normals), x) for x in pts]
    return _finish(normals, found)


def enumerate_chambers(scenario) -> list:
    """All action chambers of a scenario, in a deterministic order."""
    return enumerate_chambers_of(scenario.all_weights(), scenario.rank)


def enumerate_chambers_by_signs(weights, dim: int) -> list:
    """Sign-vector search with a feasibility cut on every prefix (slow, exact)."""
    normals = arrangement_normals(weights)
    found = []

    def rec(prefix, cons):
        if len(prefix) == len(normals):
            x = feasible(LinearSystem(dim, tuple(cons)))
            den = 1
            for v in x:
                den = den * v.denominator // np.gcd(den, v.denominator)
            found.append((tuple(prefix), tuple(int(v * den) for v in x)))
            return
        nv = normals[len(prefix)]
        for s in (1, -1):
            c = cons + [Constraint(tuple(s * a for a in nv), 0, GT)]
            if feasible(LinearSystem(dim, tuple(c))) is not None:
                rec(prefix + [s], c)

    rec([], [])
    return _finish(normals, found)


def opposite(chambers: Sequence[Chamber], c: Chamber) -> Chamber:
    want = tuple(-s for s in c.signs)
    for other in chambers:
        if other.signs == want:
            return other
    raise InputError("opposite chamber missing from the list")


def find_chamber(chambers: Sequence[Chamber], theta) -> Chamber:
    """The chamber containing the integral vector ``theta``; errors on a wall."""
    theta = tuple(int(x) for x in theta)
    if chambers and len(theta) != chambers[0].rank:
        raise InputError(f"chamber vector {theta} has the wrong dimension")
    for c in chambers:
        if any(dot(nv, theta) == 0 for nv in c.normals):
            raise InputError(f"{theta} lies on a wall of the arrangement")
        if c.contains(theta):
            return c
    raise InputError(f"no chamber contains {theta}")


def polarize(weight, chamber) -> tuple:
    """``(polarized weight, flipped)``; ``chamber`` may also be a bare vector."""
    theta = chamber.representative if isinstance(chamber, Chamber) else tuple(chamber)
    weight = tuple(int(x) for x in weight)
    p = dot(weight, theta)
    if p == 0:
        raise PolarizationError(f"weight {weight} is orthogonal to {tuple(theta)}")
    if p > 0:
        return weight, False
    return tuple(-x for x in weight), True


def polarizing_index(datum, chamber) -> int:
    return sum(polarize(w, chamber)[1] for w in datum.isotropy_weights)
