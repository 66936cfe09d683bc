"""Root systems, Weyl groups, flag-manifold fixed points and the non-Abelian
Morse inequalities.

Coordinates: weights are written in the basis of fundamental weights (Dynkin
labels), so the simple roots are the rows of the Cartan matrix
``A[j][k] = <alpha_j, alpha_k^vee>``, the simple reflection ``s_i`` sends
``lam`` to ``lam - lam_i alpha_i`` and ``rho = (1, ..., 1)``.  Elements of the
Lie algebra of the torus are written in the coroot basis, so pairing a weight
with ``theta`` is the ordinary dot product.  The invariant form on weights is
``(lam, mu) = lam F mu^T`` with ``F = A^{-1} D``, ``D = diag((alpha_j, alpha_j)/2)``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Optional, Sequence

import numpy as np

from .chambers import Chamber, enumerate_chambers
from .charring import FormalCharacter, MorsePolynomial, PolarizedTerm, divide_one_plus_t, sum_coefficients_many
from .errors import InputError, OracleMismatch
from .fan import FixedPointDatum, Scenario
from .lattice import det, dot, inverse
from .morse import index_coefficients, lhs_profiles, support_window, verify_strong

CARTAN = {
    "A1": ([[2]], [1]),
    "A2": ([[2, -1], [-1, 2]], [1, 1]),
    "A1xA1": ([[2, 0], [0, 2]], [1, 1]),
    # alpha_1 long, alpha_2 short
    "B2": ([[2, -2], [-1, 2]], [1, Fraction(1, 2)]),
    # alpha_1 short, alpha_2 long
    "G2": ([[2, -1], [-3, 2]], [Fraction(1, 3), 1]),
    "A3": ([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], [1, 1, 1]),
}

WEYL_ORDER = {"A1": 2, "A2": 6, "A1xA1": 4, "B2": 8, "G2": 12, "A3": 24}


def _vec(v) -> tuple:
    return tuple(int(x) for x in v)


@dataclass(frozen=True)
class RootSystem:
    name: str
    cartan: tuple
    sym: tuple  # (alpha_j, alpha_j) / 2

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @functools.cached_property
    def simple_roots(self) -> tuple:
        return tuple(tuple(row) for row in self.cartan)

    @functools.cached_property
    def form(self):
        inv = inverse([list(r) for r in self.cartan])
        return tuple(tuple(inv[i][j] * Fraction(self.sym[j]) for j in range(self.rank)) for i in range(self.rank))

    def inner(self, a, b) -> Fraction:
        F = self.form
        return sum(Fraction(a[i]) * F[i][j] * b[j] for i in range(self.rank) for j in range(self.rank))

    def coroot_pairing(self, lam, alpha) -> Fraction:
        """``<lam, alpha^vee> = 2 (lam, alpha) / (alpha, alpha)``."""
        return 2 * self.inner(lam, alpha) / self.inner(alpha, alpha)

    def root_coords(self, lam) -> tuple:
        """Coordinates in the basis of simple roots."""
        inv = inverse([list(r) for r in self.cartan])
        return tuple(sum(Fraction(lam[j]) * inv[j][i] for j in range(self.rank)) for i in range(self.rank))

    def reflect(self, lam, i: int) -> tuple:
        return tuple(a - lam[i] * b for a, b in zip(lam, self.simple_roots[i]))

    def reflect_root(self, lam, alpha) -> tuple:
        c = self.coroot_pairing(lam, alpha)
        out = tuple(Fraction(a) - c * b for a, b in zip(lam, alpha))
        return tuple(int(x) if x.denominator == 1 else x for x in out)

    @functools.cached_property
    def roots(self) -> tuple:
        seen = set(self.simple_roots)
        frontier = list(self.simple_roots)
        while frontier:
            nxt = []
            for r in frontier:
                for i in range(self.rank):
                    s = self.reflect(r, i)
                    if s not in seen:
                        seen.add(s)
                        nxt.append(s)
            frontier = nxt
        return tuple(sorted(seen))

    @functools.cached_property
    def positive_roots(self) -> tuple:
        out = []
        for r in self.roots:
            c = self.root_coords(r)
            if all(x >= 0 for x in c):
                out.append(r)
            elif not all(x <= 0 for x in c):  # pragma: no cover - roots are always all-+ or all--
                raise AssertionError(f"root {r} is neither positive nor negative")
        return tuple(sorted(out))

    @property
    def rho(self) -> tuple:
        return (1,) * self.rank

    def is_positive(self, root) -> bool:
        return tuple(root) in set(self.positive_roots)

    def is_dominant(self, lam) -> bool:
        return all(x >= 0 for x in lam)

    def dominant_conjugate(self, lam) -> tuple:
        lam = _vec(lam)
        while True:
            i = next((i for i, x in enumerate(lam) if x < 0), None)
            if i is None:
                return lam
            lam = self.reflect(lam, i)


def root_system(name: str) -> RootSystem:
    key = name.upper().replace("×", "X")
    key = {"A1XA1": "A1xA1"}.get(key, key)
    if key not in CARTAN:
        raise InputError(f"unsupported root system {name!r}; choose from {sorted(CARTAN)}")
    A, d = CARTAN[key]
    return RootSystem(key, tuple(tuple(r) for r in A), tuple(Fraction(x) for x in d))


@dataclass(frozen=True)
class WeylElement:
    """``lam -> lam @ matrix`` on row vectors of Dynkin labels."""

    matrix: tuple
    word: tuple

    def __call__(self, lam) -> tuple:
        n = len(self.matrix)
        return tuple(sum(lam[i] * self.matrix[i][j] for i in range(n)) for j in range(n))

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def det(self) -> int:
        return int(det([list(r) for r in self.matrix]))

    def name(self) -> str:
        return "e" if not self.word else "".join(f"s{i + 1}" for i in self.word)

    def compose(self, other: "WeylElement") -> "WeylElement":
        """``self o other``."""
        n = len(self.matrix)
        M = tuple(
            tuple(sum(other.matrix[i][k] * self.matrix[k][j] for k in range(n)) for j in range(n)) for i in range(n)
        )
        return WeylElement(M, self.word + other.word)


def _reflection_matrix(rs: RootSystem, i: int) -> tuple:
    n = rs.rank
    return tuple(tuple(int(a == b) - (rs.simple_roots[i][b] if a == i else 0) for b in range(n)) for a in range(n))


@functools.lru_cache(maxsize=None)
def generate_weyl(rs: RootSystem) -> tuple:
    """All Weyl group elements with reduced words, by breadth-first search."""
    n = rs.rank
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    gens = [WeylElement(_reflection_matrix(rs, i), (i,)) for i in range(n)]
    seen = {ident: WeylElement(ident, ())}
    frontier = [seen[ident]]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                v = g.compose(w)
                if v.matrix not in seen:
                    seen[v.matrix] = v
                    nxt.append(v)
        frontier = nxt
    out = tuple(sorted(seen.values(), key=lambda w: (w.length, w.word)))
    if rs.name in WEYL_ORDER and len(out) != WEYL_ORDER[rs.name]:  # pragma: no cover
        raise AssertionError(f"|W({rs.name})| = {len(out)}")
    return out


def length_from_roots(rs: RootSystem, w: WeylElement) -> int:
    """``|w(Delta+) cap Delta-|``."""
    pos = set(rs.positive_roots)
    return sum(1 for a in rs.positive_roots if w(a) not in pos)


def _check_subsystem(rs: RootSystem, delta_s) -> tuple:
    ds = tuple(sorted({_vec(a) for a in delta_s}))
    roots = set(rs.roots)
    for a in ds:
        if a not in roots:
            raise InputError(f"{a} is not a root of {rs.name}")
        if tuple(-x for x in a) not in ds:
            raise InputError("isotropy roots must be closed under negation")
    for a, b in itertools.combinations(ds, 2):
        s = tuple(x + y for x, y in zip(a, b))
        if s in roots and s not in ds:
            raise InputError("isotropy roots must be closed under root addition")
    return ds


def relative_length(rs: RootSystem, w: WeylElement, delta_s=()) -> int:
    """``|w(Delta+ minus Delta_S+) cap Delta-|``."""
    ds = set(_check_subsystem(rs, delta_s))
    pos = set(rs.positive_roots)
    return sum(1 for a in rs.positive_roots if a not in ds and w(a) not in pos)


def det_S(rs: RootSystem, w: WeylElement, delta_s=()) -> int:
    return (-1) ** relative_length(rs, w, delta_s) * w.det


# ---------------------------------------------------------------------------
# flag manifolds and characters


def flag_fixed_data(rs: RootSystem, lam) -> Scenario:
    """Fixed points of the full flag manifold with the line bundle of weight ``lam``."""
    lam = _vec(lam)
    if len(lam) != rs.rank:
        raise InputError(f"weight {lam} is not of rank {rs.rank}")
    if not rs.is_dominant(lam):
        raise InputError(f"{lam} is not dominant")
    pts = []
    for w in generate_weyl(rs):
        pts.append(FixedPointDatum(w.name(), tuple(w(a) for a in rs.positive_roots), FormalCharacter.monomial(w(lam))))
    return Scenario(rs.rank, len(rs.positive_roots), tuple(pts), name=f"flag-{rs.name}")


def weight_set(rs: RootSystem, lam) -> list:
    """Weights of the irreducible representation of highest weight ``lam``."""
    lam = _vec(lam)
    seen = {lam}
    frontier = [lam]
    while frontier:
        nxt = []
        for mu in frontier:
            for a in rs.simple_roots:
                nu = tuple(x - y for x, y in zip(mu, a))
                if nu in seen:
                    continue
                dom = rs.dominant_conjugate(nu)
                diff = rs.root_coords(tuple(x - y for x, y in zip(lam, dom)))
                if all(c >= 0 and c.denominator == 1 for c in diff):
                    seen.add(nu)
                    nxt.append(nu)
        frontier = nxt
    return sorted(seen)


def freudenthal(rs: RootSystem, lam) -> FormalCharacter:
    """Weight multiplicities by Freudenthal's recursion."""
    lam = _vec(lam)
    if not rs.is_dominant(lam):
        raise InputError(f"{lam} is not dominant")
    weights = weight_set(rs, lam)
    depth = {mu: sum(rs.root_coords(tuple(x - y for x, y in zip(lam, mu)))) for mu in weights}
    rho = rs.rho
    lr = tuple(a + b for a, b in zip(lam, rho))
    top = rs.inner(lr, lr)
    mult = {}
    wset = set(weights)
    for mu in sorted(weights, key=lambda m: depth[m]):
        if mu == lam:
            mult[mu] = 1
            continue
        acc = Fraction(0)
        for a in rs.positive_roots:
            k = 1
            while True:
                nu = tuple(x + k * y for x, y in zip(mu, a))
                if nu not in wset:
                    break
                acc += mult[nu] * rs.inner(nu, a)
                k += 1
        mr = tuple(a + b for a, b in zip(mu, rho))
        m = 2 * acc / (top - rs.inner(mr, mr))
        if m.denominator != 1:  # pragma: no cover
            raise OracleMismatch(f"non-integral Freudenthal multiplicity {m} at {mu}")
        mult[mu] = int(m)
    return FormalCharacter(mult, rank=rs.rank)


def weyl_character(rs: RootSystem, lam, window=None, check: bool = True) -> FormalCharacter:
    """Character from the fixed-point formula on the flag manifold, checked against Freudenthal."""
    sc = flag_fixed_data(rs, lam)
    chambers = enumerate_chambers(sc)
    window = window if window is not None else support_window(sc, chambers)
    ch = FormalCharacter(index_coefficients(sc, window, chambers), rank=rs.rank)
    if check:
        oracle = freudenthal(rs, lam)
        wset = {tuple(w) for w in window}
        expected = FormalCharacter({w: c for w, c in oracle.items() if w in wset}, rank=rs.rank)
        if ch != expected:
            raise OracleMismatch(f"fixed-point character {ch} differs from Freudenthal {expected}")
    return ch


def weyl_numerator(rs: RootSystem, lam, mult=1) -> FormalCharacter:
    """``sum_w det(w) e^{w(lam + rho) - rho}``."""
    out = {}
    for w in generate_weyl(rs):
        mu = tuple(a - b for a, b in zip(w(tuple(x + y for x, y in zip(lam, rs.rho))), rs.rho))
        out[mu] = out.get(mu, 0) + w.det * mult
    return FormalCharacter(out, rank=rs.rank)


def divide_by_one_minus(ch: FormalCharacter, alpha) -> FormalCharacter:
    """Exact quotient ``ch / (1 - e^{-alpha})`` of a finite character."""
    alpha = _vec(alpha)
    supp = list(ch.support())
    # q(xi) = sum_{j >= 0} ch(xi + j alpha); an exact quotient lives on the alpha-strings of the support
    span = len(supp)
    q = {}
    for x in supp:
        for j in range(span + 1):
            xi = tuple(a - j * b for a, b in zip(x, alpha))
            if xi in q:
                continue
            q[xi] = sum(ch[tuple(a + k * b for a, b in zip(xi, alpha))] for k in range(span + j + 1))
    out = FormalCharacter({k: v for k, v in q.items() if v}, rank=ch.rank)
    if out - out.shift(tuple(-x for x in alpha)) != ch:
        raise InputError(f"character is not divisible by 1 - e^-{alpha}")
    return out


# ---------------------------------------------------------------------------
# orbit data and the non-Abelian assembly


@dataclass(frozen=True)
class OrbitDatum:
    label: str
    isotropy_roots: tuple = ()
    multiplicities: tuple = ()  # ((Lambda, m), ...) with m rational
    extra_weights: tuple = ()
    stabilizer_words: tuple = ()  # extra generators of W_U beyond the reflections of Delta_S

    def __post_init__(self):
        object.__setattr__(self, "isotropy_roots", tuple(_vec(a) for a in self.isotropy_roots))
        mults = self.multiplicities
        if isinstance(mults, dict):
            mults = tuple(mults.items())
        object.__setattr__(self, "multiplicities", tuple((_vec(l), Fraction(m)) for l, m in mults))
        object.__setattr__(self, "extra_weights", tuple(_vec(w) for w in self.extra_weights))
        object.__setattr__(self, "stabilizer_words", tuple(tuple(int(i) for i in w) for w in self.stabilizer_words))


def _element_from_word(rs: RootSystem, word) -> WeylElement:
    out = WeylElement(tuple(tuple(int(i == j) for j in range(rs.rank)) for i in range(rs.rank)), ())
    for i in word:
        if not 0 <= i < rs.rank:
            raise InputError(f"simple reflection index {i} out of range")
        out = out.compose(WeylElement(_reflection_matrix(rs, i), (i,)))
    return out


def _subgroup(rs: RootSystem, delta_s, extra_words=()) -> list:
    """Elements of the group generated by reflections in ``delta_s`` and extra words."""
    W = generate_weyl(rs)
    by_matrix = {w.matrix: w for w in W}
    gens = []
    for a in delta_s:
        img = {w.matrix for w in W if w(a) == tuple(-x for x in a) and _is_reflection(rs, w, a)}
        gens.extend(by_matrix[m] for m in img)
    for word in extra_words:
        gens.append(by_matrix[_element_from_word(rs, word).matrix])
    ident = next(w for w in W if not w.word)
    seen = {ident.matrix}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                v = g.compose(w)
                if v.matrix not in seen:
                    seen.add(v.matrix)
                    nxt.append(by_matrix[v.matrix])
        frontier = nxt
    return [by_matrix[m] for m in sorted(seen, key=lambda m: (by_matrix[m].length, by_matrix[m].word))]


def _is_reflection(rs, w, a) -> bool:
    # s_a fixes the hyperplane orthogonal to a: check on a basis of weights
    for i in range(rs.rank):
        e = tuple(int(i == j) for j in range(rs.rank))
        if w(e) != rs.reflect_root(e, a):
            return False
    return True


def _sub_rho2(rs, delta_s_pos) -> tuple:
    """``2 rho_S`` (integral)."""
    return tuple(sum(a[i] for a in delta_s_pos) for i in range(rs.rank))


def subsystem_character(rs: RootSystem, delta_s, lam) -> FormalCharacter:
    """Character of the irreducible ``Delta_S``-module of highest weight ``lam``."""
    pos_all = set(rs.positive_roots)
    ds_pos = [a for a in delta_s if a in pos_all]
    lam = _vec(lam)
    for a in ds_pos:
        c = rs.coroot_pairing(lam, a)
        if c < 0 or c.denominator != 1:
            raise InputError(f"{lam} is not dominant for the isotropy roots")
    if not ds_pos:
        return FormalCharacter.monomial(lam)
    WS = _subgroup(rs, delta_s)
    rho2 = _sub_rho2(rs, ds_pos)
    num = {}
    for w in WS:
        # w(lam + rho_S) - rho_S = w(lam) + (w(2 rho_S) - 2 rho_S) / 2
        shift = tuple(x - y for x, y in zip(w(rho2), rho2))
        if any(s % 2 for s in shift):  # pragma: no cover
            raise AssertionError("w rho_S - rho_S is not integral")
        mu = tuple(a + s // 2 for a, s in zip(w(lam), shift))
        sign = (-1) ** sum(1 for a in ds_pos if w(a) not in pos_all)
        num[mu] = num.get(mu, 0) + sign
    ch = FormalCharacter(num, rank=rs.rank)
    for a in ds_pos:
        ch = divide_by_one_minus(ch, a)
    return ch


def _scaled_multiplicities(orbits) -> int:
    return lcm(1, *(m.denominator for o in orbits for _, m in o.multiplicities))


def expand_orbits(rs: RootSystem, orbits: Sequence[OrbitDatum], scale: int = 1) -> Scenario:
    """Torus-level fixed-point data of a union of Weyl orbits (fibers scaled by ``scale``)."""
    W = generate_weyl(rs)
    pts = []
    dims = set()
    for o in orbits:
        ds = _check_subsystem(rs, o.isotropy_roots)
        pos_all = set(rs.positive_roots)
        base_weights = [a for a in rs.positive_roots if a not in ds] + list(o.extra_weights)
        dims.add(len(base_weights))
        WU = _subgroup(rs, ds, o.stabilizer_words)
        WS = _subgroup(rs, ds)
        ws_mats = {w.matrix for w in WS}
        wu_mats = {w.matrix for w in WU}
        # W_U must preserve the isotropy weights at the representative
        if any(sorted(u(x) for x in base_weights) != sorted(base_weights) for u in WU):
            raise InputError(f"orbit {o.label}: isotropy weights are not invariant under the stabilizer")
        # char E_{p_S} = sum_Lam m_Lam sum_{u in W_U / W_S} u(char R^S_Lam)
        fiber = FormalCharacter.zero(rs.rank)
        coset_reps = _coset_reps(WU, ws_mats)
        for lam, m in o.multiplicities:
            mm = m * scale
            if mm.denominator != 1:
                raise InputError(f"orbit {o.label}: multiplicity {m} is not integral after scaling by {scale}")
            base = subsystem_character(rs, ds, lam)
            for u in coset_reps:
                fiber = fiber + int(mm) * base.map_weights(u)
        for w in _coset_reps(W, wu_mats):
            ws = tuple(w(x) for x in base_weights)
            fw = fiber.map_weights(w)
            if not fw.is_nonnegative():
                raise InputError(f"orbit {o.label}: fiber character at {w.name()} has negative multiplicities")
            pts.append(FixedPointDatum(f"{o.label}:{w.name()}", ws, fw))
    if len(dims) > 1:
        raise InputError("orbits of different dimension")
    n = dims.pop() if dims else len(rs.positive_roots)
    return Scenario(rs.rank, n, tuple(pts), name=f"orbits-{rs.name}")


def _coset_reps(G, sub_mats) -> list:
    """Left coset representatives ``g H``, shortest first."""
    seen, reps = set(), []
    sub = [np.array(m, dtype=np.int64) for m in sub_mats]
    for g in G:
        gm = np.array(g.matrix, dtype=np.int64)
        # lam -> lam @ (h @ g) is g o h
        coset = frozenset(tuple(map(tuple, h @ gm)) for h in sub)
        if coset & seen:
            continue
        seen |= coset
        reps.append(g)
    return reps


def orbit_partition(labels: Sequence, group: Sequence, action: Callable) -> list:
    """Partition fixed-point labels into orbits of ``action(g, label)``."""
    labels = list(labels)
    lset = set(labels)
    out, done = [], set()
    for p in labels:
        if p in done:
            continue
        orbit = {p}
        frontier = [p]
        while frontier:
            q = frontier.pop()
            for g in group:
                r = action(g, q)
                if r not in lset:
                    raise InputError(f"action sends {q!r} to {r!r}, which is not a fixed point")
                if r not in orbit:
                    orbit.add(r)
                    frontier.append(r)
        done |= orbit
        out.append(sorted(orbit, key=labels.index))
    return out


def positive_chamber(rs: RootSystem, scenario: Scenario, chambers=None) -> Chamber:
    """A chamber meeting the positive Weyl chamber in an open cone (first in order)."""
    chambers = chambers if chambers is not None else enumerate_chambers(scenario)
    for c in chambers:
        if all(dot(a, c.representative) > 0 for a in rs.positive_roots):
            return c
    raise InputError("no chamber lies in the positive Weyl chamber")


def nonabelian_terms(rs: RootSystem, orbits: Sequence[OrbitDatum], chamber: Chamber, scale: int = 1) -> list:
    """Signed polarized terms of the non-Abelian fixed-point side."""
    theta = chamber.representative
    if not all(dot(a, theta) > 0 for a in rs.positive_roots):
        raise InputError("the chamber does not meet the positive Weyl chamber")
    out = []
    rho = rs.rho
    for o in orbits:
        ds = _check_subsystem(rs, o.isotropy_roots)
        for w in generate_weyl(rs):
            num = {}
            for lam, m in o.multiplicities:
                mm = m * scale
                if mm.denominator != 1:
                    raise InputError(f"orbit {o.label}: multiplicity {m} not integral after scaling")
                mu = tuple(a - b for a, b in zip(w(tuple(x + y for x, y in zip(lam, rho))), rho))
                num[mu] = num.get(mu, 0) + int(mm)
            dens, shift, flips = [], [0] * rs.rank, 0
            for x in o.extra_weights:
                wx = w(x)
                if dot(wx, theta) == 0:
                    raise InputError(f"weight {wx} lies on a wall of the chamber")
                if dot(wx, theta) > 0:
                    dens.append(wx)
                else:
                    flips += 1
                    dens.append(tuple(-y for y in wx))
                    shift = [s + y for s, y in zip(shift, wx)]
            ch = FormalCharacter(num, rank=rs.rank).shift(shift)
            if not ch:
                continue
            out.append(PolarizedTerm(relative_length(rs, w, ds) + flips, ch, tuple(dens), theta, sign=det_S(rs, w, ds), label=f"{o.label}:{w.name()}"))
    return out


def nonabelian_rhs(rs: RootSystem, cohomology: dict, n: int) -> list:
    """Per degree ``sum_w det(w) sum_Lam m^k_Lam e^{w(Lam + rho) - rho}``."""
    out = [FormalCharacter.zero(rs.rank) for _ in range(n + 1)]
    for k, reps in cohomology.items():
        if not 0 <= k <= n:
            raise InputError(f"degree {k} outside 0..{n}")
        for lam, m in dict(reps).items():
            if m < 0:
                raise InputError("negative multiplicity")
            if not rs.is_dominant(lam):
                raise InputError(f"{tuple(lam)} is not dominant")
            out[k] = out[k] + weyl_numerator(rs, _vec(lam), int(m))
    return out


def torus_cohomology(rs: RootSystem, cohomology: dict, n: int) -> MorsePolynomial:
    coeffs = [FormalCharacter.zero(rs.rank) for _ in range(n + 1)]
    for k, reps in cohomology.items():
        for lam, m in dict(reps).items():
            coeffs[k] = coeffs[k] + int(m) * freudenthal(rs, _vec(lam))
    return MorsePolynomial(tuple(coeffs))


@dataclass
class NonabelianReport:
    chamber: Chamber
    window: list
    lhs: dict  # weight -> per-degree coefficients
    rhs: dict
    divisible: bool
    remainders: list
    torus_agrees: bool
    mismatches: list
    torus_report: object
    at_minus_one_agrees: bool

    @property
    def consistent(self) -> bool:
        return self.divisible and self.torus_agrees and self.torus_report.holds_on_window and self.at_minus_one_agrees


def assemble_nonabelian(rs: RootSystem, orbits: Sequence[OrbitDatum], cohomology: dict, window, chamber: Optional[Chamber] = None) -> NonabelianReport:
    """Both sides of the non-Abelian inequalities on a window, cross-checked at torus level.

    ``cohomology`` maps a degree to ``{dominant weight: multiplicity}``.
    """
    window = [_vec(w) for w in window]
    scale = _scaled_multiplicities(orbits)
    torus = expand_orbits(rs, orbits, scale) if orbits else None
    n = torus.dim if torus is not None else len(rs.positive_roots)
    if chamber is None:
        if torus is not None and torus.points:
            chamber = positive_chamber(rs, torus)
        else:
            theta = tuple(1 for _ in range(rs.rank))
            chamber = Chamber((), (), theta)
    terms = nonabelian_terms(rs, orbits, chamber, scale)
    L = sum_coefficients_many(terms, window, n=n) if window else np.zeros((0, n + 1), dtype=object)
    rhs_chars = nonabelian_rhs(rs, {k: {l: m * scale for l, m in dict(v).items()} for k, v in cohomology.items()}, n)
    lhs, rhs, rems = {}, {}, []
    for i, w in enumerate(window):
        lp = [Fraction(int(x), scale) for x in L[i]]
        rp = [Fraction(c[w], scale) for c in rhs_chars]
        lhs[w], rhs[w] = lp, rp
        diff = [a - b for a, b in zip(lp, rp)]
        if any(x.denominator != 1 for x in lp):
            raise InputError(f"non-integral fixed-point side at {w}: {lp}")
        _, exact = divide_one_plus_t([int(x) for x in diff])
        if not exact:
            rems.append(w)
    # torus level: multiply torus profiles by prod_{alpha > 0} (1 - e^{-alpha})
    pos = rs.positive_roots
    mism = []
    if torus is not None and torus.points:
        shifts = {}
        for A in itertools.chain.from_iterable(itertools.combinations(pos, k) for k in range(len(pos) + 1)):
            s = tuple(sum(a[i] for a in A) for i in range(rs.rank))
            shifts[s] = shifts.get(s, 0) + (-1) ** len(A)
        ext = sorted({tuple(a + b for a, b in zip(w, s)) for w in window for s in shifts})
        T = lhs_profiles(torus, chamber, ext)
        tmap = {w: T[i] for i, w in enumerate(ext)}
        hk = torus_cohomology(rs, {k: {l: m * scale for l, m in dict(v).items()} for k, v in cohomology.items()}, n)
        for w in window:
            conv = [0] * (n + 1)
            conv_r = [0] * (n + 1)
            for s, sign in shifts.items():
                x = tuple(a + b for a, b in zip(w, s))
                for k in range(n + 1):
                    conv[k] += sign * int(tmap[x][k])
                    conv_r[k] += sign * hk.coeffs[k][x]
            if [Fraction(c, scale) for c in conv] != lhs[w] or [Fraction(c, scale) for c in conv_r] != rhs[w]:
                mism.append(w)
        rep = verify_strong(torus, chamber, hk, ext)
    else:
        from .morse import StrongReport

        rep = StrongReport(chamber, [], True, {}, [])
    alt = all(
        sum((-1) ** k * lhs[w][k] for k in range(n + 1)) == sum((-1) ** k * rhs[w][k] for k in range(n + 1)) for w in window
    )
    return NonabelianReport(chamber, window, lhs, rhs, not rems, rems, not mism, mism, rep, alt)


def flag_orbit(rs: RootSystem, lam) -> OrbitDatum:
    """The single orbit of the full flag manifold with the line bundle of weight ``lam``."""
    return OrbitDatum("flag", (), ((lam, 1),), ())
