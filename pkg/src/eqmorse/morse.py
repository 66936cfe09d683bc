"""Gamma regions, support verdicts, strong/weak Morse checks, the equivariant
index and obstruction detection.

For a chamber ``C`` with representative ``theta1`` the fixed point ``p``
contributes the term

    t^{n(p,C)} char(E_p) e^{-sum_flipped lam^C} / prod_k (1 - e^{-lam^C_k})

where ``lam^C = +-lam`` pairs positively with ``theta1`` and ``n(p,C)`` counts
the flipped weights.  Its support lies in the region

    Gamma(p,C) = { mu - sum_k r_k lam^C_k : r_k >= 0, r_k > 0 if flipped }.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .chambers import Chamber, enumerate_chambers, opposite, polarize
from .charring import (
    FormalCharacter,
    MorsePolynomial,
    PolarizedTerm,
    divide_one_plus_t,
    sum_coefficients_many,
)
from .errors import AssignmentAmbiguous, ChamberInconsistency, InputError
from .fan import Fan, PLFunction, Scenario, fixed_point_data, gamma_top_system, gamma_zero_system, validate
from .kernels import integer_rows
from .lattice import EQ, GE, GT, Constraint, LinearSystem, dot, feasible, inverse, lattice_points, project, rank


# ---------------------------------------------------------------------------
# terms and regions


def polarized_terms(scenario: Scenario, chamber: Chamber) -> list:
    """One polarized term per fixed point, expanded along the chamber representative."""
    out = []
    for p in scenario.points:
        dens, shift, n_flip = [], [0] * scenario.rank, 0
        for w in p.isotropy_weights:
            lam, flipped = polarize(w, chamber)
            dens.append(lam)
            if flipped:
                n_flip += 1
                shift = [s - x for s, x in zip(shift, lam)]
        out.append(PolarizedTerm(n_flip, p.fiber_character.shift(shift), tuple(dens), chamber.representative, label=p.label))
    return out


@dataclass(frozen=True)
class GammaRegion:
    apexes: tuple
    generators: tuple  # (direction, strict)
    owner: tuple  # (point label, chamber index)
    degree: int

    @property
    def rank(self):
        return len(self.apexes[0])

    @functools.cached_property
    def _systems(self):
        return tuple(_apex_system(a, self.generators) for a in self.apexes)

    def systems(self) -> tuple:
        """Per apex, the region as an inequality system in weight space."""
        return self._systems


def gamma_region(datum, chamber: Chamber) -> GammaRegion:
    gens = []
    n = 0
    for w in datum.isotropy_weights:
        lam, flipped = polarize(w, chamber)
        gens.append((tuple(-x for x in lam), flipped))
        n += flipped
    return GammaRegion(tuple(datum.fiber_character.support()), tuple(gens), (datum.label, chamber.index), n)


def gamma_regions(scenario: Scenario, chamber: Chamber) -> list:
    return [gamma_region(p, chamber) for p in scenario.points]


@functools.lru_cache(maxsize=8192)
def _basis_inverse(dirs):
    return inverse([list(g) for g in dirs])


@functools.lru_cache(maxsize=8192)
def _system_arrays_cached(sys):
    return _system_arrays(sys)


def _apex_system(apex, generators) -> LinearSystem:
    """``{apex + sum r_k dir_k}`` as a system in weight space (exact projection)."""
    d = len(apex)
    dirs = [g for g, _ in generators]
    if not dirs:
        return LinearSystem(d, tuple(Constraint(tuple(int(i == j) for j in range(d)), apex[i], EQ) for i in range(d)))
    inv = _basis_inverse(tuple(tuple(g) for g in dirs)) if len(dirs) == d else None
    if inv is not None:
        # r = (xi - apex) D^{-1};  r_k >= 0  <=>  <xi, col_k> >= <apex, col_k>
        cons = []
        for k, (_, strict) in enumerate(generators):
            col = [inv[i][k] for i in range(d)]
            cons.append(Constraint(tuple(col), dot(col, apex), GT if strict else GE))
        return LinearSystem(d, tuple(cons))
    # variables: xi (d of them) then r (one per generator)
    nv = d + len(dirs)
    cons = []
    for i in range(d):
        row = [0] * nv
        row[i] = 1
        for k, g in enumerate(dirs):
            row[d + k] = -g[i]
        cons.append(Constraint(tuple(row), apex[i], EQ))
    for k, (_, strict) in enumerate(generators):
        row = [0] * nv
        row[d + k] = 1
        cons.append(Constraint(tuple(row), 0, GT if strict else GE))
    proj = project(LinearSystem(nv, tuple(cons)), list(range(d)))
    if proj is None:  # pragma: no cover - the apex itself (or a nearby point) is always a member
        raise AssertionError("empty Gamma region")
    return proj


def membership_certificate(region: GammaRegion, xi) -> Optional[tuple]:
    """``(apex, r)`` with ``xi = apex - sum r_k lam^C_k`` respecting strictness, or ``None``."""
    xi = tuple(int(x) for x in xi)
    dirs = [g for g, _ in region.generators]
    m = len(dirs)
    for apex in region.apexes:
        cons = []
        for i in range(len(xi)):
            cons.append(Constraint(tuple(g[i] for g in dirs), xi[i] - apex[i], EQ))
        for k, (_, strict) in enumerate(region.generators):
            cons.append(Constraint(tuple(int(j == k) for j in range(m)), 0, GT if strict else GE))
        if not m:
            if xi == apex:
                return apex, ()
            continue
        r = feasible(LinearSystem(m, tuple(cons)))
        if r is not None:
            return apex, r
    return None


def gamma_contains(region: GammaRegion, xi) -> bool:
    xi = tuple(int(x) for x in xi)
    return any(sys.contains(xi) for sys in region.systems())


def _system_arrays(sys: LinearSystem):
    A, b, strict = [], [], []
    for c in sys.constraints:
        rows = integer_rows([list(c.normal) + [c.offset]])[0]
        coeffs, off = rows[:-1], rows[-1]
        if c.rel == EQ:
            A += [coeffs, [-x for x in coeffs]]
            b += [off, -off]
            strict += [False, False]
        else:
            A.append(coeffs)
            b.append(off)
            strict.append(c.rel == GT)
    return np.array(A, dtype=object).reshape(len(A), sys.dim), np.array(b, dtype=object), np.array(strict, dtype=bool)


_INT64_SAFE = 1 << 62


@functools.lru_cache(maxsize=8192)
def _system_arrays_int64(sys):
    A, b, strict = _system_arrays(sys)
    if len(A) and max(int(np.abs(A).max()), int(np.abs(b).max())) >= (1 << 20):
        return None
    return A.astype(np.int64), b.astype(np.int64), strict


def contains_many(region: GammaRegion, points) -> np.ndarray:
    """Vectorized membership for an ``(N, rank)`` integer array."""
    if isinstance(points, np.ndarray) and points.dtype == np.int64:
        small = points.reshape(-1, region.rank)
        fits = not small.size or int(np.abs(small).max()) < (1 << 40)
    else:
        small, fits = None, False
    big = None
    out = np.zeros(len(points), dtype=bool)
    for sys in region.systems():
        arrs = _system_arrays_int64(sys) if fits else None
        if arrs is not None:
            A, b, strict = arrs
        else:
            if big is None:
                big = np.asarray(points, dtype=object).reshape(-1, region.rank)
            A, b, strict = _system_arrays_cached(sys)
        if not len(A):
            out[:] = True
            continue
        vals = (small if arrs is not None else big).dot(A.T)
        ok = np.where(strict, vals > b, vals >= b)
        out |= ok.all(axis=1)
    return out


# ---------------------------------------------------------------------------
# windows


def _ordered(points: Iterable) -> list:
    return sorted({tuple(int(x) for x in p) for p in points}, key=lambda p: (sum(abs(x) for x in p), p))


def box_window(scenario: Scenario, margin: int = 3) -> list:
    """Lattice points of the apex bounding box grown by ``margin``, small norms first."""
    ap = scenario.apexes()
    lo = [min(a[i] for a in ap) - margin for i in range(scenario.rank)]
    hi = [max(a[i] for a in ap) + margin for i in range(scenario.rank)]
    return _ordered(itertools.product(*[range(l, h + 1) for l, h in zip(lo, hi)]))


def support_window(scenario: Scenario, chambers=None) -> list:
    """Lattice points that can carry cohomology or index at all.

    Every term's support satisfies ``<xi, theta> <= <apex, theta>`` for theta
    in the closure of its chamber, and the chambers cover the whole space, so
    ``<xi, x> <= max_p <apex_p, x>`` for every extreme chamber ray ``x``.
    """
    chambers = chambers if chambers is not None else enumerate_chambers(scenario)
    directions = set()
    for i in range(scenario.rank):
        for s in (1, -1):
            directions.add(tuple(s * int(i == j) for j in range(scenario.rank)))
    for c in chambers:
        directions.add(c.representative)
    ap = scenario.apexes()
    cons = [Constraint(tuple(-x for x in v), -max(dot(a, v) for a in ap), GE) for v in sorted(directions)]
    return _ordered(lattice_points(LinearSystem(scenario.rank, tuple(cons))))


# ---------------------------------------------------------------------------
# profiles and the index


def lhs_profiles(scenario: Scenario, chamber: Chamber, window: Sequence) -> np.ndarray:
    """``c[i, k]`` = coefficient of ``t^k e^{window[i]}`` on the fixed-point side."""
    return sum_coefficients_many(polarized_terms(scenario, chamber), window, n=scenario.dim)


def lhs_profile(scenario: Scenario, chamber: Chamber, xi) -> list:
    return [int(x) for x in lhs_profiles(scenario, chamber, [xi])[0]]


def _alternating(profiles: np.ndarray) -> np.ndarray:
    signs = np.array([(-1) ** k for k in range(profiles.shape[1])], dtype=object)
    return profiles.dot(signs)


def index_coefficients(scenario: Scenario, window: Sequence, chambers=None) -> dict:
    """Index coefficient of each window weight, checked equal across chambers."""
    chambers = chambers if chambers is not None else enumerate_chambers(scenario)
    window = [tuple(int(x) for x in w) for w in window]
    ref = None
    for c in chambers:
        vals = _alternating(lhs_profiles(scenario, c, window))
        if ref is None:
            ref, ref_c = vals, c
        elif not np.array_equal(vals, ref):
            bad = next(i for i in range(len(window)) if vals[i] != ref[i])
            raise ChamberInconsistency(
                f"index at {window[bad]} is {ref[bad]} in chamber {ref_c.representative} "
                f"but {vals[bad]} in chamber {c.representative}"
            )
    if ref is None:
        return {w: 0 for w in window}
    return {w: int(v) for w, v in zip(window, ref)}


def index_coefficient(scenario: Scenario, xi, chambers=None) -> int:
    xi = tuple(int(x) for x in xi)
    return index_coefficients(scenario, [xi], chambers)[xi]


def index_character(scenario: Scenario, window=None, chambers=None) -> FormalCharacter:
    """The equivariant index as a character (window defaults to the certified one)."""
    chambers = chambers if chambers is not None else enumerate_chambers(scenario)
    window = window if window is not None else support_window(scenario, chambers)
    return FormalCharacter(index_coefficients(scenario, window, chambers), rank=scenario.rank)


# ---------------------------------------------------------------------------
# support verdicts


EXCLUDED, FORCED, UNKNOWN = "excluded", "forced", "unknown"


@dataclass
class ObstructionWitness:
    weight: tuple
    degree: int
    forcing_chamber: Chamber
    excluding_chamber: Chamber
    forcing_certificate: tuple  # (point label, apex, r)
    excluding_certificate: tuple  # degree-k regions of the excluding chamber, none containing the weight
    forced_multiplicity: int
    forced_degrees: tuple = ()

    def summary(self) -> str:
        return (
            f"weight {self.weight} is forced into H^{self.degree} by chamber {self.forcing_chamber.representative} "
            f"(multiplicity {self.forced_multiplicity}) and excluded from it by chamber "
            f"{self.excluding_chamber.representative}"
        )


@dataclass
class SupportVerdict:
    weight: tuple
    status: list  # per degree
    forcing: dict = field(default_factory=dict)  # degree -> (chamber, multiplicity)
    excluding: dict = field(default_factory=dict)  # degree -> chamber
    witnesses: list = field(default_factory=list)

    @property
    def obstructed(self) -> bool:
        return bool(self.witnesses)

    def multiplicity(self, k: int) -> Optional[int]:
        return self.forcing[k][1] if k in self.forcing else None


class _Tables:
    """Membership of a batch of weights in every ``Gamma^{k,C}``."""

    def __init__(self, scenario: Scenario, chambers, points):
        self.scenario = scenario
        self.chambers = list(chambers)
        self.points = [tuple(int(x) for x in p) for p in points]
        arr = np.array(self.points, dtype=object).reshape(len(self.points), scenario.rank)
        if arr.size and int(np.abs(arr).max()) < (1 << 40):
            arr = arr.astype(np.int64)
        n = scenario.dim
        # member[c][k] is a boolean array over points
        self.member = []
        self.regions = []
        for c in self.chambers:
            regs = gamma_regions(scenario, c)
            self.regions.append(regs)
            per_k = [np.zeros(len(self.points), dtype=bool) for _ in range(n + 1)]
            for reg in regs:
                per_k[reg.degree] |= contains_many(reg, arr)
            self.member.append(per_k)
        self._profiles = {}

    def profile(self, ci: int, i: int) -> list:
        key = (ci, i)
        if key not in self._profiles:
            self._profiles[key] = lhs_profile(self.scenario, self.chambers[ci], self.points[i])
        return self._profiles[key]

    def verdict(self, i: int) -> SupportVerdict:
        n = self.scenario.dim
        xi = self.points[i]
        status = [UNKNOWN] * (n + 1)
        forcing, excluding = {}, {}
        for k in range(n + 1):
            for ci, per_k in enumerate(self.member):
                if not per_k[k][i]:
                    excluding.setdefault(k, self.chambers[ci])
                    continue
                below = k > 0 and per_k[k - 1][i]
                above = k < n and per_k[k + 1][i]
                if below or above or k in forcing:
                    continue
                # neighbours vanish, so the degree-k coefficient is the multiplicity
                mult = self.profile(ci, i)[k]
                if mult > 0:
                    forcing[k] = (self.chambers[ci], mult)
        witnesses = []
        for k in range(n + 1):
            if k in forcing and k in excluding:
                fc, mult = forcing[k]
                witnesses.append(self._witness(xi, k, fc, excluding[k], mult, tuple(sorted(forcing))))
            status[k] = FORCED if k in forcing else EXCLUDED if k in excluding else UNKNOWN
        return SupportVerdict(xi, status, forcing, excluding, witnesses)

    def _witness(self, xi, k, fc, ec, mult, forced_degrees):
        fci = self.chambers.index(fc)
        eci = self.chambers.index(ec)
        cert = None
        for reg in self.regions[fci]:
            if reg.degree == k:
                c = membership_certificate(reg, xi)
                if c is not None:
                    cert = (reg.owner[0],) + c
                    break
        excl = tuple(reg.owner[0] for reg in self.regions[eci] if reg.degree == k)
        return ObstructionWitness(xi, k, fc, ec, cert, excl, mult, forced_degrees)


def support_verdict(scenario: Scenario, xi, chambers=None) -> SupportVerdict:
    """Which degrees a weight is forced into or excluded from, over all chambers."""
    chambers = chambers if chambers is not None else enumerate_chambers(scenario)
    return _Tables(scenario, chambers, [xi]).verdict(0)


def support_verdicts(scenario: Scenario, points, chambers=None) -> list:
    chambers = chambers if chambers is not None else enumerate_chambers(scenario)
    t = _Tables(scenario, chambers, points)
    return [t.verdict(i) for i in range(len(t.points))]


def detect_obstruction(scenario: Scenario, candidates=None, chambers=None, margin: int = 3) -> Optional[ObstructionWitness]:
    """First weight (small norms first) forced and excluded in the same degree."""
    chambers = chambers if chambers is not None else enumerate_chambers(scenario)
    candidates = _ordered(candidates) if candidates is not None else box_window(scenario, margin)
    t = _Tables(scenario, chambers, candidates)
    n = scenario.dim
    # cheap screen before computing multiplicities
    for i in range(len(t.points)):
        hit = False
        for k in range(n + 1):
            ins = [per_k[k][i] for per_k in t.member]
            if all(ins):
                continue
            for per_k in t.member:
                if per_k[k][i] and not (k > 0 and per_k[k - 1][i]) and not (k < n and per_k[k + 1][i]):
                    hit = True
                    break
            if hit:
                break
        if not hit:
            continue
        v = t.verdict(i)
        if v.witnesses:
            return v.witnesses[0]
    return None


# ---------------------------------------------------------------------------
# strong and weak inequalities


@dataclass
class StrongReport:
    chamber: Chamber
    window: list
    holds_on_window: bool
    Q: dict  # weight -> list of q_k
    violations: list  # (weight, degree or "remainder", value)


@dataclass
class WeakReport:
    chamber: Chamber
    window: list
    holds_on_window: bool
    violations: list  # (weight, degree, cohomology multiplicity, fixed-point bound)


def _cohomology_profiles(cohomology: MorsePolynomial, window, n) -> np.ndarray:
    if cohomology.degree > n:
        raise InputError(f"cohomology of degree {cohomology.degree} exceeds the dimension {n}")
    out = np.zeros((len(window), n + 1), dtype=object)
    out[:] = 0
    for i, w in enumerate(window):
        for k, c in enumerate(cohomology.coeffs):
            out[i, k] = c[w]
    return out


def verify_strong(scenario: Scenario, chamber: Chamber, cohomology: MorsePolynomial, window) -> StrongReport:
    """Check ``LHS - sum t^k char H^k = (1+t) Q`` with ``Q >= 0`` on the window."""
    window = [tuple(int(x) for x in w) for w in window]
    n = scenario.dim
    lhs = lhs_profiles(scenario, chamber, window) if scenario.points else np.zeros((len(window), n + 1), dtype=object)
    rhs = _cohomology_profiles(cohomology, window, n)
    Q, bad = {}, []
    for i, w in enumerate(window):
        p = [int(a - b) for a, b in zip(lhs[i], rhs[i])]
        q, exact = divide_one_plus_t(p)
        if not exact:
            bad.append((w, "remainder", sum(x if k % 2 == 0 else -x for k, x in enumerate(p))))
        for k, x in enumerate(q):
            if x < 0:
                bad.append((w, k, x))
        if any(q):
            Q[w] = q
    return StrongReport(chamber, window, not bad, Q, bad)


def weak_check(scenario: Scenario, chamber: Chamber, cohomology: MorsePolynomial, window) -> WeakReport:
    """Degree-wise ``char H^k <= sum_{n(p,C)=k}`` of the fixed-point terms, on the window."""
    window = [tuple(int(x) for x in w) for w in window]
    n = scenario.dim
    lhs = lhs_profiles(scenario, chamber, window) if scenario.points else np.zeros((len(window), n + 1), dtype=object)
    rhs = _cohomology_profiles(cohomology, window, n)
    bad = []
    for i, w in enumerate(window):
        for k in range(n + 1):
            if rhs[i, k] > lhs[i, k]:
                bad.append((w, k, int(rhs[i, k]), int(lhs[i, k])))
    return WeakReport(chamber, window, not bad, bad)


# ---------------------------------------------------------------------------
# toric cohomology


def toric_h0_hn(fan: Fan, pl: PLFunction) -> tuple:
    """Supports of ``H^0`` and ``H^n``, each weight of multiplicity one."""
    return lattice_points(gamma_zero_system(fan, pl)), lattice_points(gamma_top_system(fan, pl))


def toric_cohomology_2d(fan: Fan, pl: PLFunction) -> MorsePolynomial:
    """Full cohomology of a line bundle on a toric surface from index and verdicts."""
    if fan.rank != 2:
        raise InputError("toric_cohomology_2d needs a rank-2 fan")
    rep = validate(fan)
    if not rep.ok:
        raise InputError(f"fan is not smooth and complete: {rep}")
    scenario = fixed_point_data(fan, pl)
    chambers = enumerate_chambers(scenario)
    window = support_window(scenario, chambers)
    index = index_coefficients(scenario, window, chambers)
    nonzero = [w for w in window if index[w] != 0]
    triples = []
    for v in support_verdicts(scenario, nonzero, chambers):
        w = v.weight
        allowed = [k for k, s in enumerate(v.status) if s != EXCLUDED]
        if len(allowed) != 1:
            raise AssignmentAmbiguous(f"weight {w} (index {index[w]}) could sit in degrees {allowed}")
        k = allowed[0]
        if (-1) ** k * index[w] <= 0:
            raise AssignmentAmbiguous(f"weight {w} has index {index[w]} of the wrong sign for degree {k}")
        triples.append((k, w, abs(index[w])))
    return MorsePolynomial.from_triples(2, 2, triples)
