"""Smooth complete fans, piecewise linear functions and their fixed-point data.

Conventions (checked against projective space):

* the fiber weight over the fixed point of a max cone ``sigma`` is the unique
  ``m_sigma`` with ``<m_sigma, v> = phi(v)`` for the rays ``v`` of ``sigma``;
* the isotropy weights at that point are the rows of ``-(V^{-1})^T`` where the
  rows of ``V`` are the cone's generators (the negated dual basis), so they
  pair non-positively with the cone;
* ``phi`` is strictly convex when ``<m_sigma, v> > phi(v)`` for every max cone
  and every ray ``v`` outside it.  With this orientation the standard
  function on projective space is convex exactly for ``r >= 0``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .charring import FormalCharacter
from .errors import InputError, NonIntegralWeight, NotConvex, NotUnimodular
from .lattice import (
    GE,
    GT,
    Constraint,
    LinearSystem,
    det,
    dot,
    feasible,
    inverse,
    nullspace,
    primitive,
    rank,
    rational_solve,
)


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple
    max_cones: tuple
    labels: Optional[tuple] = None
    cone_labels: Optional[tuple] = None

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(tuple(int(i) for i in c) for c in self.max_cones)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)
        if self.rank < 1:
            raise InputError("fan rank must be positive")
        for r in rays:
            if len(r) != self.rank:
                raise InputError(f"ray {r} is not of rank {self.rank}")
            if not any(r):
                raise InputError("zero ray")
            if primitive(r) != r:
                raise InputError(f"ray {r} is not primitive")
        if len(set(rays)) != len(rays):
            raise InputError("repeated ray")
        if not cones:
            raise InputError("fan without max cones")
        for c in cones:
            if len(c) != self.rank:
                raise InputError(f"cone {c} does not have {self.rank} rays (only simplicial full-dimensional cones)")
            if len(set(c)) != len(c):
                raise InputError(f"cone {c} repeats a ray")
            for i in c:
                if not 0 <= i < len(rays):
                    raise InputError(f"cone {c} refers to ray index {i} out of range")
            if det([list(rays[i]) for i in c]) == 0:
                raise InputError(f"cone {c} is not full-dimensional")
        if len({frozenset(c) for c in cones}) != len(cones):
            raise InputError("repeated max cone")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != len(rays):
                raise InputError("one label per ray expected")
        if self.cone_labels is not None:
            object.__setattr__(self, "cone_labels", tuple(self.cone_labels))
            if len(self.cone_labels) != len(cones):
                raise InputError("one label per max cone expected")

    def generators(self, cone_index: int) -> list:
        return [list(self.rays[i]) for i in self.max_cones[cone_index]]

    def ray_label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"v{i}"

    def cone_label(self, j: int) -> str:
        if self.cone_labels:
            return self.cone_labels[j]
        return "{" + ",".join(self.ray_label(i) for i in self.max_cones[j]) + "}"

    def cone_index(self, ray_names: Sequence) -> int:
        """Index of the max cone with the given ray labels or indices."""
        idx = {self.ray_label(i): i for i in range(len(self.rays))}
        want = frozenset(idx[r] if isinstance(r, str) else r for r in ray_names)
        for j, c in enumerate(self.max_cones):
            if frozenset(c) == want:
                return j
        raise InputError(f"no max cone on rays {sorted(ray_names, key=str)}")


@dataclass(frozen=True)
class PLFunction:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(x) for x in self.values))

    def __neg__(self):
        return PLFunction(tuple(-x for x in self.values))

    def shifted(self, fan: Fan, xi) -> "PLFunction":
        """``phi + xi`` for a global linear functional ``xi``."""
        return PLFunction(tuple(v + dot(xi, r) for v, r in zip(self.values, fan.rays)))

    @classmethod
    def zero(cls, fan: Fan):
        return cls((0,) * len(fan.rays))


def _check_pl(fan: Fan, pl: PLFunction):
    if len(pl.values) != len(fan.rays):
        raise InputError(f"PL function has {len(pl.values)} values for {len(fan.rays)} rays")


@dataclass
class ValidationReport:
    simplicial: bool
    smooth: bool
    complete: bool
    n_cones: int
    failing_cones: list = field(default_factory=list)
    unpaired_facets: list = field(default_factory=list)
    uncovered_directions: list = field(default_factory=list)
    overlapping_directions: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.simplicial and self.smooth and self.complete


def _cone_coords(fan, j, x):
    inv = inverse(fan.generators(j))
    # x = sum_i c_i v_i  with rows v_i  =>  c = x V^{-1}
    n = fan.rank
    return [sum(Fraction(x[k]) * inv[k][i] for k in range(n)) for i in range(n)]


def facet_pairs(fan: Fan):
    """Map ``facet -> list of (cone index, opposite ray index)``."""
    out: dict = {}
    for j, c in enumerate(fan.max_cones):
        for drop in c:
            facet = frozenset(i for i in c if i != drop)
            out.setdefault(facet, []).append((j, drop))
    return out


def validate(fan: Fan, n_directions: int = 20, seed: int = 0) -> ValidationReport:
    """Smoothness, and completeness by facet pairing plus random coverage."""
    failing = [j for j in range(len(fan.max_cones)) if abs(det(fan.generators(j))) != 1]
    unpaired = []
    for facet, owners in sorted(facet_pairs(fan).items(), key=lambda kv: sorted(kv[0])):
        ok = len(owners) == 2
        if ok:
            # the two opposite rays must lie on opposite sides of the facet hyperplane
            normal = nullspace([list(fan.rays[i]) for i in facet], fan.rank)[0]
            s1 = dot(normal, fan.rays[owners[0][1]])
            s2 = dot(normal, fan.rays[owners[1][1]])
            ok = s1 * s2 < 0
        if not ok:
            unpaired.append(sorted(facet))
    rng = random.Random(seed)
    uncovered, overlapping = [], []
    for _ in range(n_directions):
        x = [rng.randint(-997, 997) for _ in range(fan.rank)]
        if not any(x):
            continue
        inside = 0
        for j in range(len(fan.max_cones)):
            if all(c >= 0 for c in _cone_coords(fan, j, x)):
                inside += 1
        if inside == 0:
            uncovered.append(tuple(x))
        elif inside > 1:
            # a generic random direction in two cones means they overlap
            overlapping.append(tuple(x))
    return ValidationReport(
        simplicial=True,
        smooth=not failing,
        complete=not unpaired and not uncovered and not overlapping,
        n_cones=len(fan.max_cones),
        failing_cones=failing,
        unpaired_facets=unpaired,
        uncovered_directions=uncovered,
        overlapping_directions=overlapping,
    )


def cone_weight(fan: Fan, pl: PLFunction, cone_index: int) -> tuple:
    """The linear functional agreeing with ``pl`` on the given max cone."""
    _check_pl(fan, pl)
    c = fan.max_cones[cone_index]
    sol = rational_solve(fan.generators(cone_index), [pl.values[i] for i in c])
    if any(x.denominator != 1 for x in sol):
        raise NonIntegralWeight(f"PL function is not integral on cone {fan.cone_label(cone_index)}: {sol}")
    return tuple(int(x) for x in sol)


def cone_weight_rational(fan: Fan, pl: PLFunction, cone_index: int) -> tuple:
    _check_pl(fan, pl)
    c = fan.max_cones[cone_index]
    return rational_solve(fan.generators(cone_index), [pl.values[i] for i in c])


def strictly_convex(fan: Fan, pl: PLFunction, strict: bool = True) -> bool:
    """Convexity of ``pl`` (pass ``-pl`` for the concave side)."""
    _check_pl(fan, pl)
    for j, c in enumerate(fan.max_cones):
        m = cone_weight_rational(fan, pl, j)
        for i, v in enumerate(fan.rays):
            if i in c:
                continue
            gap = dot(m, v) - pl.values[i]
            if gap < 0 or (strict and gap == 0):
                return False
    return True


@dataclass(frozen=True)
class WallInequality:
    """Across the wall ``facet``: ``a phi(u) + b phi(u') < sum_i c_i phi(tau_i)``.

    ``functional`` holds the coefficient of each ray value in
    ``sum c_i phi(tau_i) - a phi(u) - b phi(u')``, which convexity makes positive.
    """

    facet: tuple
    u: int
    u_opp: int
    a: int
    b: int
    c: tuple
    functional: tuple

    def value(self, pl: PLFunction):
        return dot(self.functional, pl.values)


def wall_inequalities(fan: Fan) -> list:
    out = []
    for facet, owners in sorted(facet_pairs(fan).items(), key=lambda kv: sorted(kv[0])):
        if len(owners) != 2:
            continue
        facet = tuple(sorted(facet))
        (_, u), (_, w) = sorted(owners, key=lambda o: o[1])
        # solve  a u + b w = sum c_i tau_i  for a primitive integer relation
        cols = [list(fan.rays[u]), list(fan.rays[w])] + [[-x for x in fan.rays[i]] for i in facet]
        rel = nullspace([list(row) for row in zip(*cols)], len(cols))
        if len(rel) != 1:
            raise InputError(f"degenerate wall {facet}")
        rel = rel[0]
        if rel[0] < 0:
            rel = tuple(-x for x in rel)
        a, b, cs = rel[0], rel[1], rel[2:]
        if a <= 0 or b <= 0:
            raise InputError(f"cones across wall {facet} are on the same side")
        func = [0] * len(fan.rays)
        for i, ci in zip(facet, cs):
            func[i] += ci
        func[u] -= a
        func[w] -= b
        out.append(WallInequality(facet, u, w, a, b, tuple(cs), tuple(func)))
    return out


def strictly_convex_exists(fan: Fan) -> Optional[tuple]:
    """A strictly convex PL function (as real ray values), or ``None``.

    Decided exactly: the wall inequalities are a strict linear system in the
    ray values, solved by Fourier-Motzkin after fixing the values on one
    max cone to zero (PL functions are only defined modulo linear ones).
    """
    walls = wall_inequalities(fan)
    nr = len(fan.rays)
    fixed = set(fan.max_cones[0])
    cons = [Constraint(tuple(w.functional), 0, GT) for w in walls]
    for i in fixed:
        cons.append(Constraint(tuple(int(k == i) for k in range(nr)), 0, "="))
    x = feasible(LinearSystem(nr, tuple(cons)))
    return x


@dataclass(frozen=True)
class FixedPointDatum:
    label: str
    isotropy_weights: tuple
    fiber_character: FormalCharacter

    def __post_init__(self):
        ws = tuple(tuple(int(x) for x in w) for w in self.isotropy_weights)
        object.__setattr__(self, "isotropy_weights", ws)
        r = self.fiber_character.rank
        for w in ws:
            if len(w) != r:
                raise InputError(f"{self.label}: weight {w} is not of rank {r}")
            if not any(w):
                raise InputError(f"{self.label}: zero isotropy weight")
        if not self.fiber_character or not self.fiber_character.is_nonnegative():
            raise InputError(f"{self.label}: fiber character must be non-negative and non-empty")

    @property
    def rank(self):
        return self.fiber_character.rank

    def shifted(self, xi) -> "FixedPointDatum":
        return FixedPointDatum(self.label, self.isotropy_weights, self.fiber_character.shift(xi))


@dataclass(frozen=True)
class Scenario:
    rank: int
    dim: int
    points: tuple
    name: str = ""

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        for p in pts:
            if p.rank != self.rank:
                raise InputError(f"{p.label}: rank {p.rank}, scenario rank {self.rank}")
            if len(p.isotropy_weights) != self.dim:
                raise InputError(f"{p.label}: {len(p.isotropy_weights)} isotropy weights, expected {self.dim}")
        if len({p.label for p in pts}) != len(pts):
            raise InputError("fixed point labels must be unique")

    def point(self, label: str) -> FixedPointDatum:
        for p in self.points:
            if p.label == label:
                return p
        raise InputError(f"no fixed point {label!r}")

    def shifted(self, xi) -> "Scenario":
        return Scenario(self.rank, self.dim, tuple(p.shifted(xi) for p in self.points), self.name)

    def all_weights(self) -> list:
        return [w for p in self.points for w in p.isotropy_weights]

    def apexes(self) -> list:
        return sorted({w for p in self.points for w in p.fiber_character.support()})


def isotropy_weights(fan: Fan, cone_index: int) -> tuple:
    """Negated dual basis of the cone generators."""
    V = fan.generators(cone_index)
    d = det(V)
    if abs(d) != 1:
        raise NotUnimodular(f"cone {fan.cone_label(cone_index)} has |det| = {abs(d)}")
    inv = inverse(V)
    n = fan.rank
    # dual basis element i is column i of V^{-1}
    return tuple(tuple(-int(inv[k][i]) for k in range(n)) for i in range(n))


def fixed_point_data(fan: Fan, pl: PLFunction, name: str = "") -> Scenario:
    _check_pl(fan, pl)
    pts = []
    for j in range(len(fan.max_cones)):
        ws = isotropy_weights(fan, j)
        m = cone_weight(fan, pl, j)
        label = fan.cone_labels[j] if fan.cone_labels else f"p{j}"
        pts.append(FixedPointDatum(label, ws, FormalCharacter.monomial(m)))
    return Scenario(fan.rank, fan.rank, tuple(pts), name)


def gamma_zero_system(fan: Fan, pl: PLFunction) -> LinearSystem:
    """``{xi : <xi, v> >= phi(v) for every ray}``, the intersection of shifted dual cones."""
    _check_pl(fan, pl)
    return LinearSystem(fan.rank, tuple(Constraint(r, v, GE) for r, v in zip(fan.rays, pl.values)))


def gamma_top_system(fan: Fan, pl: PLFunction) -> LinearSystem:
    """``{xi : <xi, v> < phi(v) for every ray}``."""
    _check_pl(fan, pl)
    return LinearSystem(fan.rank, tuple(Constraint(tuple(-x for x in r), -v, GT) for r, v in zip(fan.rays, pl.values)))


def moment_polytope(fan: Fan, pl: PLFunction) -> LinearSystem:
    """Inequality description of the moment polytope of a convex PL function."""
    if not strictly_convex(fan, pl, strict=False):
        raise NotConvex("moment polytope needs a convex PL function")
    return gamma_zero_system(fan, pl)


def ray_relation(fan: Fan, targets: Sequence[int], basis: Sequence[int]) -> tuple:
    """Rational ``c`` with ``sum_targets rays = sum_i c_i rays[basis[i]]``."""
    lhs = [sum(fan.rays[t][k] for t in targets) for k in range(fan.rank)]
    cols = [list(fan.rays[i]) for i in basis]
    if rank(cols) != len(cols):
        raise InputError("basis rays are dependent")
    # least-squares free: solve on the first independent coordinates
    A = [list(row) for row in zip(*cols)]
    for rows in itertools.combinations(range(fan.rank), len(cols)):
        sub = [A[r] for r in rows]
        if det(sub) != 0:
            sol = rational_solve(sub, [lhs[r] for r in rows])
            if all(sum(A[r][i] * sol[i] for i in range(len(cols))) == lhs[r] for r in range(fan.rank)):
                return sol
            break
    raise InputError("target rays are not in the span of the basis rays")
