"""Formal characters, Morse polynomials and polarized geometric-series terms.

A :class:`FormalCharacter` is a finitely supported map ``weight -> int``.  A
:class:`PolarizedTerm` stands for the formal series

    numerator * prod_k 1 / (1 - e^{-lambda_k})

expanded on the side where every ``lambda_k`` pairs positively with a chamber
representative.  Coefficients are extracted one weight at a time by an exact
finite count, so no series is ever truncated.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError, PolarizationError, SingularEvaluation
from .kernels import count_vector_partitions

SINGULAR_TOL = 1e-12


def _weight(v) -> tuple:
    return tuple(int(x) for x in v)


class FormalCharacter:
    """Element of the group ring ``Z[L*]`` with finite support."""

    __slots__ = ("rank", "_terms")

    def __init__(self, terms: Mapping | Iterable = (), rank: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for w, c in items:
            w = _weight(w)
            if int(c) != c:
                raise InputError(f"non-integral multiplicity {c} at {w}")
            acc[w] = acc.get(w, 0) + int(c)
        self._terms = {w: c for w, c in acc.items() if c != 0}
        ranks = {len(w) for w in acc}
        if rank is None:
            if len(ranks) != 1:
                raise InputError("rank of an empty or mixed character must be given explicitly")
            rank = ranks.pop()
        elif ranks - {rank}:
            raise InputError(f"weights of rank {sorted(ranks)} in a rank-{rank} character")
        self.rank = rank

    @classmethod
    def monomial(cls, weight, mult: int = 1):
        weight = _weight(weight)
        return cls({weight: mult}, rank=len(weight))

    @classmethod
    def zero(cls, rank: int):
        return cls({}, rank=rank)

    @classmethod
    def from_weights(cls, weights: Iterable, rank: int | None = None):
        """Each listed weight with multiplicity one (repeats accumulate)."""
        return cls(((w, 1) for w in weights), rank=rank)

    # mapping-like access
    def __getitem__(self, weight) -> int:
        return self._terms.get(_weight(weight), 0)

    def items(self):
        return sorted(self._terms.items())

    def support(self) -> list:
        return sorted(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms))

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, FormalCharacter):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self):
        return hash((self.rank, frozenset(self._terms.items())))

    def __repr__(self):
        inner = ", ".join(f"{w}: {c}" for w, c in self.items())
        return f"FormalCharacter({{{inner}}}, rank={self.rank})"

    def _check(self, other):
        if not isinstance(other, FormalCharacter):
            raise InputError(f"expected a FormalCharacter, got {type(other).__name__}")
        if other.rank != self.rank:
            raise InputError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other):
        self._check(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, 0) + c
        return FormalCharacter(out, rank=self.rank)

    def __neg__(self):
        return FormalCharacter({w: -c for w, c in self._terms.items()}, rank=self.rank)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return FormalCharacter({w: other * c for w, c in self._terms.items()}, rank=self.rank)
        self._check(other)
        out: dict = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = tuple(a + b for a, b in zip(w1, w2))
                out[w] = out.get(w, 0) + c1 * c2
        return FormalCharacter(out, rank=self.rank)

    __rmul__ = __mul__

    def shift(self, weight):
        """Multiply by ``e^weight``."""
        weight = _weight(weight)
        return FormalCharacter({tuple(a + b for a, b in zip(w, weight)): c for w, c in self._terms.items()}, rank=self.rank)

    def map_weights(self, fn):
        """Push forward along ``fn`` (used for Weyl group actions)."""
        out: dict = {}
        for w, c in self._terms.items():
            v = _weight(fn(w))
            out[v] = out.get(v, 0) + c
        return FormalCharacter(out, rank=self.rank)

    def is_nonnegative(self) -> bool:
        return all(c > 0 for c in self._terms.values())

    def dimension(self) -> int:
        return sum(self._terms.values())


def char_add(a: FormalCharacter, b: FormalCharacter) -> FormalCharacter:
    return a + b


def char_mul(a: FormalCharacter, b: FormalCharacter) -> FormalCharacter:
    return a * b


@dataclass(frozen=True)
class MorsePolynomial:
    """``sum_k t^k coeffs[k]`` with each ``coeffs[k]`` a formal character."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(self.coeffs)
        if not cs:
            raise InputError("a Morse polynomial needs at least the degree-0 coefficient")
        if len({c.rank for c in cs}) != 1:
            raise InputError("Morse polynomial coefficients of different rank")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def zero(cls, rank: int, n: int):
        return cls(tuple(FormalCharacter.zero(rank) for _ in range(n + 1)))

    @classmethod
    def from_triples(cls, rank: int, n: int, triples: Iterable):
        """From ``(degree, weight, multiplicity)`` triples."""
        acc = [dict() for _ in range(n + 1)]
        for k, w, m in triples:
            if not 0 <= k <= n:
                raise InputError(f"degree {k} outside 0..{n}")
            if m < 0:
                raise InputError(f"negative multiplicity {m} at degree {k}, weight {tuple(w)}")
            if len(w) != rank:
                raise InputError(f"weight {tuple(w)} is not of rank {rank}")
            w = _weight(w)
            acc[k][w] = acc[k].get(w, 0) + m
        return cls(tuple(FormalCharacter(d, rank=rank) for d in acc))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def rank(self) -> int:
        return self.coeffs[0].rank

    def profile(self, weight) -> list:
        """Coefficient of ``e^weight`` in each degree."""
        return [c[weight] for c in self.coeffs]

    def support(self) -> list:
        out = set()
        for c in self.coeffs:
            out.update(c.support())
        return sorted(out)

    def at_minus_one(self) -> FormalCharacter:
        acc = FormalCharacter.zero(self.rank)
        for k, c in enumerate(self.coeffs):
            acc = acc + (c if k % 2 == 0 else -c)
        return acc


@dataclass(frozen=True)
class PolarizedTerm:
    """``sign * t^t_degree * numerator / prod(1 - e^{-den})`` expanded along ``theta1``."""

    t_degree: int
    numerator: FormalCharacter
    denominators: tuple
    theta1: tuple
    sign: int = 1
    label: str = ""

    def __post_init__(self):
        dens = tuple(_weight(v) for v in self.denominators)
        theta = _weight(self.theta1)
        object.__setattr__(self, "denominators", dens)
        object.__setattr__(self, "theta1", theta)
        if self.t_degree < 0:
            raise InputError("negative t-degree")
        if self.sign not in (1, -1):
            raise InputError("sign must be +1 or -1")
        r = self.numerator.rank
        if len(theta) != r or any(len(v) != r for v in dens):
            raise InputError("term data of mixed rank")
        for v in dens:
            if sum(a * b for a, b in zip(v, theta)) <= 0:
                raise PolarizationError(f"denominator {v} does not pair positively with {theta}")

    @property
    def rank(self) -> int:
        return self.numerator.rank


def term_coefficients(term: PolarizedTerm, targets, theta1=None, backend=None) -> np.ndarray:
    """Exact coefficients of ``e^target`` for a batch of targets (sign not applied)."""
    theta = _weight(theta1) if theta1 is not None else term.theta1
    for v in term.denominators:
        if sum(a * b for a, b in zip(v, theta)) <= 0:
            raise PolarizationError(f"denominator {v} does not pair positively with {theta}")
    targets = np.asarray([_weight(t) for t in targets], dtype=np.int64).reshape(-1, term.rank)
    out = np.zeros(len(targets), dtype=object)
    for mu, c in term.numerator.items():
        diff = np.asarray(mu, dtype=np.int64) - targets
        counts = count_vector_partitions(term.denominators, theta, diff, backend=backend)
        out = out + c * np.asarray(counts, dtype=object)
    return np.array([int(x) for x in out], dtype=object)


def term_coefficient(term: PolarizedTerm, target, theta1=None) -> int:
    """Coefficient of ``e^target`` in the expansion of ``term`` (sign not applied)."""
    return int(term_coefficients(term, [target], theta1)[0])


def _signed(items):
    for it in items:
        if isinstance(it, PolarizedTerm):
            yield it.sign, it
        else:
            s, t = it
            if s not in (1, -1):
                raise InputError("term sign must be +1 or -1")
            yield s * t.sign, t


def sum_coefficients_many(terms, targets, n: int | None = None, backend=None) -> np.ndarray:
    """Matrix ``c[i, k]``: coefficient of ``t^k e^{targets[i]}`` in the signed sum of terms."""
    pairs = list(_signed(terms))
    thetas = {t.theta1 for _, t in pairs}
    if len(thetas) > 1:
        raise InputError("terms expanded along different chamber representatives")
    if n is None:
        n = max((t.t_degree for _, t in pairs), default=0)
    targets = [_weight(t) for t in targets]
    out = np.zeros((len(targets), n + 1), dtype=object)
    out[:] = 0
    if not targets:
        return out
    for s, t in pairs:
        if t.t_degree > n:
            raise InputError(f"term of t-degree {t.t_degree} exceeds n={n}")
        out[:, t.t_degree] += s * term_coefficients(t, targets, backend=backend)
    return out


def sum_coefficients(terms, target, n: int | None = None) -> list:
    """Per-degree coefficients of ``e^target`` in the signed sum of terms."""
    return [int(x) for x in sum_coefficients_many(terms, [target], n)[0]]


def divide_one_plus_t(p: Sequence[int]):
    """Divide by ``1 + t``: returns ``(q, exact)`` with ``(1+t) q = p`` when exact."""
    p = [int(x) for x in p]
    q = []
    acc = 0
    for k in range(len(p) - 1):
        acc = p[k] - acc
        q.append(acc)
    remainder = sum(x if k % 2 == 0 else -x for k, x in enumerate(p))
    return q, remainder == 0


def multiply_one_plus_t(q: Sequence[int], length: int) -> list:
    out = [0] * length
    for k, x in enumerate(q):
        out[k] += x
        if k + 1 < length:
            out[k + 1] += x
    return out


# ---------------------------------------------------------------------------
# numeric evaluation


@dataclass(frozen=True)
class EvaluationPoint:
    """``theta`` in the Lie algebra; complex entries allowed."""

    theta: tuple

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(complex(x) for x in self.theta))


def _phase(weight, theta) -> complex:
    return cmath.exp(1j * sum(a * b for a, b in zip(weight, theta)))


def _as_point(at):
    return at.theta if isinstance(at, EvaluationPoint) else tuple(complex(x) for x in at)


def evaluate(obj, at) -> complex:
    """Evaluate under ``e^xi -> exp(i <xi, theta>)``.

    ``obj`` may be a character, a term, or an iterable of terms or
    ``(sign, term)`` pairs.  Terms are taken at ``t = -1``, so a list of
    polarized fixed-point terms evaluates to the rational-function form of
    the index.
    """
    theta = _as_point(at)
    if isinstance(obj, FormalCharacter):
        if len(theta) != obj.rank:
            raise InputError("evaluation point of the wrong dimension")
        return sum((c * _phase(w, theta) for w, c in obj.items()), 0j)
    if isinstance(obj, PolarizedTerm):
        obj = [obj]
    total = 0j
    for s, t in _signed(obj):
        val = evaluate(t.numerator, theta)
        for lam in t.denominators:
            d = 1 - _phase([-x for x in lam], theta)
            if abs(d) < SINGULAR_TOL:
                raise SingularEvaluation(f"1 - e^(-{lam}) vanishes at theta={theta}")
            val /= d
        total += s * (-1) ** t.t_degree * val
    return total


def evaluate_series(term: PolarizedTerm, at, cutoff: int) -> complex:
    """Partial sum of the expanded series over ``sum_k m_k <lambda_k, theta1> <= cutoff``.

    Converges to :func:`evaluate` when ``theta`` has imaginary part along
    ``theta1`` making every ``|e^{-i lambda}| < 1``.
    """
    theta = _as_point(at)
    pairs = [sum(a * b for a, b in zip(v, term.theta1)) for v in term.denominators]
    total = 0j

    def rec(k, budget, phase):
        nonlocal total
        if k == len(pairs):
            total += phase
            return
        m = 0
        step = _phase([-x for x in term.denominators[k]], theta)
        cur = phase
        while m * pairs[k] <= budget:
            rec(k + 1, budget - m * pairs[k], cur)
            cur *= step
            m += 1

    rec(0, cutoff, 1 + 0j)
    return term.sign * (-1) ** term.t_degree * total * evaluate(term.numerator, theta)
