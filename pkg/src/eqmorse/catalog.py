"""Built-in example data: projective spaces, Hirzebruch surfaces, the
Jurkiewicz threefold, Tolman's six-point data and flag manifolds."""

from __future__ import annotations

from .charring import FormalCharacter
from .errors import InputError
from .fan import Fan, FixedPointDatum, PLFunction, Scenario, fixed_point_data

# Jurkiewicz rays, in the order a..m
JURKIEWICZ_RAYS = {
    "a": (1, 0, 0),
    "b": (0, 1, 0),
    "c": (0, 0, 1),
    "d": (0, -2, -1),
    "e": (-1, 0, -2),
    "f": (-2, -1, 0),
    "g": (-1, -2, -1),
    "h": (-1, -1, -2),
    "i": (-2, -1, -1),
    "j": (-1, -2, -2),
    "k": (-2, -1, -2),
    "l": (-2, -2, -1),
    "m": (-1, -1, -1),
}

# outer cones, labelled as in the picture of the singular fan
OUTER_CONES = {
    "s0": "abc",
    "s1": "acf",
    "s2": "abd",
    "s3": "bce",
    "s4": "adf",
    "s5": "bde",
    "s6": "cef",
}

# triangulation of the singular cone {d,e,f}
INNER_CONES = [
    "gml", "mhj", "mjd", "mdg", "mlf", "mfi", "mik", "mke", "meh",
    "dfg", "fgl", "fie", "ike", "dhe", "djh",
]

# phi = -(e1+e2+e3) on the inner cones, 0 on {a,b,c}
JURKIEWICZ_PL = {
    "a": 0, "b": 0, "c": 0,
    "d": 3, "e": 3, "f": 3,
    "g": 4, "h": 4, "i": 4,
    "j": 5, "k": 5, "l": 5,
    "m": 3,
}


def _fan_from_letters(cones: dict, rays: dict) -> Fan:
    names = list(rays)
    idx = {n: i for i, n in enumerate(names)}
    return Fan(
        rank=3,
        rays=tuple(rays[n] for n in names),
        max_cones=tuple(tuple(idx[ch] for ch in c) for c in cones.values()),
        labels=tuple(names),
        cone_labels=tuple(cones),
    )


def jurkiewicz_fan() -> Fan:
    """The smooth complete fan with 22 max cones obtained by subdividing {d,e,f}."""
    cones = dict(OUTER_CONES)
    for k, c in enumerate(INNER_CONES):
        cones[f"s{7 + k}"] = c
    return _fan_from_letters(cones, JURKIEWICZ_RAYS)


def singular_fan() -> Fan:
    """The 8-cone fan before subdivision; the cone {d,e,f} is not unimodular."""
    rays = {k: JURKIEWICZ_RAYS[k] for k in "abcdef"}
    cones = dict(OUTER_CONES)
    cones["s'"] = "def"
    return _fan_from_letters(cones, rays)


def jurkiewicz_pl() -> PLFunction:
    return PLFunction(tuple(JURKIEWICZ_PL[k] for k in JURKIEWICZ_RAYS))


def jurkiewicz() -> Scenario:
    return fixed_point_data(jurkiewicz_fan(), jurkiewicz_pl(), name="jurkiewicz")


def cpn_fan(n: int) -> Fan:
    if n < 1:
        raise InputError("n must be at least 1")
    rays = [tuple(-1 for _ in range(n))] + [tuple(int(i == j) for j in range(n)) for i in range(n)]
    # p_i (i <= n) sits on the cone omitting e_i, p_{n+1} on the positive orthant
    omit = list(range(1, n + 1)) + [0]
    cones = [tuple(k for k in range(n + 1) if k != i) for i in omit]
    return Fan(n, tuple(rays), tuple(cones), labels=tuple(f"v{i}" for i in range(n + 1)),
               cone_labels=tuple(f"p{i}" for i in range(1, n + 2)))


def cpn_pl(n: int, r: int) -> PLFunction:
    """``O(r)``: the fiber at ``p_i`` is ``r e_i`` and at ``p_{n+1}`` it is trivial."""
    return PLFunction((-r,) + (0,) * n)


def cpn(n: int, r: int) -> Scenario:
    return fixed_point_data(cpn_fan(n), cpn_pl(n, r), name=f"cp{n}")


def hirzebruch_fan(a: int) -> Fan:
    rays = ((1, 0), (0, 1), (-1, 0), (-a, -1))
    # the fixed point p_i sits on the cone {v_i, v_{i+1}}
    cones = ((0, 1), (1, 2), (2, 3), (3, 0))
    if a < 0:
        raise InputError("a must be non-negative")
    return Fan(2, rays, cones, labels=("v1", "v2", "v3", "v4"), cone_labels=("p1", "p2", "p3", "p4"))


def hirzebruch_pl(r: int, s: int) -> PLFunction:
    return PLFunction((0, 0, -r, -s))


def hirzebruch(a: int, r: int, s: int) -> Scenario:
    return fixed_point_data(hirzebruch_fan(a), hirzebruch_pl(r, s), name="hirzebruch")


# Tolman's data: isotropy weights are the negatives of these sets
_TOLMAN_NEG_WEIGHTS = [
    [(1, 0), (0, 1), (1, 1)],
    [(1, 0), (0, 1), (-1, -1)],
    [(1, 0), (0, -1), (1, -1)],
    [(-1, 0), (0, -1), (1, -1)],
    [(-1, 0), (-1, 1), (-2, 1)],
    [(-1, 0), (-1, 1), (2, -1)],
]
TOLMAN_FIBERS = [(0, 0), (3, 3), (0, 2), (3, 2), (5, 0), (-1, 3)]


def tolman(xi4=(3, 2)) -> Scenario:
    fibers = list(TOLMAN_FIBERS)
    fibers[3] = tuple(xi4)
    pts = []
    for k, (ws, xi) in enumerate(zip(_TOLMAN_NEG_WEIGHTS, fibers), start=1):
        pts.append(FixedPointDatum(f"p{k}", tuple(tuple(-x for x in w) for w in ws), FormalCharacter.monomial(xi)))
    return Scenario(2, 3, tuple(pts), name="tolman")


def flag(type_name: str, lam) -> Scenario:
    from .weyl import flag_fixed_data, root_system

    return flag_fixed_data(root_system(type_name), lam)


BUILTINS = {
    "cp1": lambda r=2: cpn(1, r),
    "cp2": lambda r=2: cpn(2, r),
    "cpn": lambda n=2, r=2: cpn(n, r),
    "hirzebruch": lambda a=1, r=1, s=1: hirzebruch(a, r, s),
    "jurkiewicz": lambda: jurkiewicz(),
    "tolman": lambda xi4=(3, 2): tolman(xi4),
    "flag-a1": lambda lam=(2,): flag("A1", lam),
    "flag-a2": lambda lam=(1, 1): flag("A2", lam),
}
