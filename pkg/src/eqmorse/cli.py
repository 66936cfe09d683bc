"""Command-line front end.

Usage::

    eqmorse COMMAND INPUT.json [options]
    eqmorse example NAME [--r R --s S --a A --n N --lambda L] COMMAND [options]

Exit codes: 0 consistent, 1 violation or obstruction found, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import catalog
from .chambers import enumerate_chambers, find_chamber, polarizing_index
from .errors import EqMorseError, InputError
from .fan import strictly_convex, validate
from .io import Loaded, load, load_cohomology, save
from .morse import (
    box_window,
    detect_obstruction,
    gamma_regions,
    index_coefficient,
    index_coefficients,
    membership_certificate,
    support_verdicts,
    toric_cohomology_2d,
    verify_strong,
    weak_check,
)
from .svg import index_csv, verdict_csv, write_svg

COMMANDS = (
    "validate", "fixed-points", "chambers", "index", "gamma", "verdict",
    "morse-check", "obstruction", "toric-cohomology", "flag", "export",
)
EXAMPLES = tuple(catalog.BUILTINS)


@dataclass
class Result:
    code: int
    payload: dict
    text: list = field(default_factory=list)
    csv: Optional[str] = None


def _vector(s: str) -> tuple:
    try:
        return tuple(int(x) for x in s.replace(" ", "").split(",") if x != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from exc


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--chamber", type=_vector, help="integral vector inside the chamber, e.g. 2,1")
    p.add_argument("--weight", type=_vector, help="a single weight, e.g. 1,2")
    p.add_argument("--margin", type=int, default=3, help="window margin around the fiber weights")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--svg", help="write a rank-2 picture to this path")
    p.add_argument("--cohomology", help="cohomology triples file (morse-check)")
    p.add_argument("--output", help="output path (export)")
    p.add_argument("--type", dest="rs_type", default=None, help="root system type (flag)")


def _add_params(p: argparse.ArgumentParser):
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--lambda", dest="lam", type=_vector)
    p.add_argument("--xi4", type=_vector, help="fiber weight at the fourth Tolman point")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eqmorse", description="Equivariant holomorphic Morse inequalities.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("input", nargs="?" if name == "flag" else None, help="fan or scenario JSON file")
        _add_common(sp)
        if name == "flag":
            _add_params(sp)
    sub.add_parser("example", help="run a command on a built-in example (see eqmorse example -h)", add_help=False)
    return p


def build_example_parser() -> argparse.ArgumentParser:
    ex = argparse.ArgumentParser(prog="eqmorse example", description="Run a command on a built-in example.")
    ex.add_argument("name", choices=EXAMPLES)
    ex.add_argument("action", choices=COMMANDS)
    _add_common(ex)
    _add_params(ex)
    return ex


@dataclass
class Context:
    loaded: Optional[Loaded]
    args: argparse.Namespace
    flag: Optional[tuple] = None  # (root system name, lambda)

    @property
    def scenario(self):
        return self.loaded.scenario

    def chambers(self):
        if not hasattr(self, "_chambers"):
            self._chambers = enumerate_chambers(self.scenario)
        return self._chambers

    def chamber(self):
        chs = self.chambers()
        if self.args.chamber is not None:
            return find_chamber(chs, self.args.chamber)
        return chs[0]

    def window(self):
        if self.args.weight is not None:
            if len(self.args.weight) != self.scenario.rank:
                raise InputError(f"weight {self.args.weight} is not of rank {self.scenario.rank}")
            return [self.args.weight]
        if self.args.margin < 0:
            raise InputError("margin must be non-negative")
        return box_window(self.scenario, self.args.margin)


def _builtin(args) -> Context:
    name = args.name
    r = args.r if args.r is not None else 2
    if name == "cp1":
        return Context(Loaded(catalog.cpn(1, r), catalog.cpn_fan(1), catalog.cpn_pl(1, r)), args)
    if name in ("cp2", "cpn"):
        n = 2 if name == "cp2" else (args.n if args.n is not None else 2)
        return Context(Loaded(catalog.cpn(n, r), catalog.cpn_fan(n), catalog.cpn_pl(n, r)), args)
    if name == "hirzebruch":
        a = args.a if args.a is not None else 1
        r = args.r if args.r is not None else 1
        s = args.s if args.s is not None else 1
        return Context(Loaded(catalog.hirzebruch(a, r, s), catalog.hirzebruch_fan(a), catalog.hirzebruch_pl(r, s)), args)
    if name == "jurkiewicz":
        return Context(Loaded(catalog.jurkiewicz(), catalog.jurkiewicz_fan(), catalog.jurkiewicz_pl()), args)
    if name == "tolman":
        return Context(Loaded(catalog.tolman(args.xi4 or (3, 2))), args)
    if name in ("flag-a1", "flag-a2"):
        t = "A1" if name == "flag-a1" else "A2"
        lam = args.lam if args.lam is not None else ((2,) if t == "A1" else (1, 1))
        return Context(Loaded(catalog.flag(t, lam)), args, flag=(t, lam))
    raise InputError(f"unknown example {name!r}")  # pragma: no cover - argparse restricts names


# ---------------------------------------------------------------------------
# commands


def _w(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _need_fan(ctx):
    if ctx.loaded.fan is None:
        raise InputError("this command needs fan input, not raw fixed-point data")


def cmd_validate(ctx) -> Result:
    _need_fan(ctx)
    rep = validate(ctx.loaded.fan)
    payload = {
        "simplicial": rep.simplicial, "smooth": rep.smooth, "complete": rep.complete,
        "n_cones": rep.n_cones, "failing_cones": list(rep.failing_cones),
        "strictly_convex": strictly_convex(ctx.loaded.fan, ctx.loaded.pl) if rep.ok else None,
    }
    text = [f"{k}: {v}" for k, v in payload.items()]
    return Result(0 if rep.ok else 1, payload, text)


def cmd_fixed_points(ctx) -> Result:
    pts = [
        {"label": p.label, "weights": [list(w) for w in p.isotropy_weights],
         "fiber": [[list(w), c] for w, c in p.fiber_character.items()]}
        for p in ctx.scenario.points
    ]
    text = [f"{len(pts)} fixed points, rank {ctx.scenario.rank}, dimension {ctx.scenario.dim}"]
    for p in ctx.scenario.points:
        fib = " + ".join(f"{c}e^{_w(w)}" if c != 1 else f"e^{_w(w)}" for w, c in p.fiber_character.items())
        text.append(f"{p.label}: weights {' '.join(_w(w) for w in p.isotropy_weights)}  fiber {fib}")
    return Result(0, {"fixed_points": pts}, text)


def cmd_chambers(ctx) -> Result:
    rows = []
    for c in ctx.chambers():
        idx = {p.label: polarizing_index(p, c) for p in ctx.scenario.points}
        rows.append({"name": c.name(), "representative": list(c.representative), "polarizing_index": idx})
    text = [f"{len(rows)} chambers"]
    for r in rows:
        text.append(f"{r['name']} {_w(r['representative'])}: " + " ".join(f"{k}={v}" for k, v in r["polarizing_index"].items()))
    return Result(0, {"chambers": rows}, text)


def cmd_index(ctx) -> Result:
    sc = ctx.scenario
    if ctx.args.weight is not None:
        c = index_coefficient(sc, ctx.window()[0], ctx.chambers())
        return Result(0, {"weight": list(ctx.args.weight), "coeff": c}, [f"index at {_w(ctx.args.weight)}: {c}"])
    coeffs = index_coefficients(sc, ctx.window(), ctx.chambers())
    nz = {w: c for w, c in coeffs.items() if c}
    text = [f"{len(nz)} weights with non-zero coefficient in a window of {len(coeffs)}"]
    text += [f"{_w(w)}: {c}" for w, c in nz.items()]
    if ctx.args.svg:
        write_svg(ctx.args.svg, window=list(nz))
    return Result(0, {"coefficients": [[list(w), c] for w, c in nz.items()]}, text, index_csv(nz, sc.rank))


def cmd_gamma(ctx) -> Result:
    ch = ctx.chamber()
    regs = gamma_regions(ctx.scenario, ch)
    rows, text = [], [f"chamber {ch.name()} {_w(ch.representative)}"]
    for reg in regs:
        row = {
            "point": reg.owner[0], "degree": reg.degree, "apexes": [list(a) for a in reg.apexes],
            "generators": [[list(g), strict] for g, strict in reg.generators],
        }
        gens = ", ".join(f"{_w(g)}{'>' if s else '>='}" for g, s in reg.generators)
        line = f"{reg.owner[0]} degree {reg.degree}: apex {' '.join(_w(a) for a in reg.apexes)} directions {gens}"
        if ctx.args.weight is not None:
            cert = membership_certificate(reg, ctx.args.weight)
            row["contains"] = cert is not None
            row["certificate"] = None if cert is None else [list(cert[0]), [str(x) for x in cert[1]]]
            line += f"  contains {_w(ctx.args.weight)}: {cert is not None}"
        rows.append(row)
        text.append(line)
    if ctx.args.svg:
        write_svg(ctx.args.svg, regions=regs, marks=[ctx.args.weight] if ctx.args.weight else [])
    return Result(0, {"chamber": list(ch.representative), "regions": rows}, text)


def cmd_verdict(ctx) -> Result:
    sc = ctx.scenario
    vs = support_verdicts(sc, ctx.window(), ctx.chambers())
    rows, text, bad = [], [], []
    for v in vs:
        rows.append({"weight": list(v.weight), "status": list(v.status),
                     "multiplicity": {k: m for k, (_, m) in sorted(v.forcing.items())}})
        if ctx.args.weight is not None or any(s != "excluded" for s in v.status):
            text.append(f"{_w(v.weight)}: " + " ".join(f"H{k}:{s}" for k, s in enumerate(v.status)))
        if v.obstructed:
            bad.append(v)
            text.append("  obstruction: " + v.witnesses[0].summary())
    if ctx.args.svg:
        write_svg(ctx.args.svg, window=[v.weight for v in vs if any(s == "forced" for s in v.status)], marks=[v.weight for v in bad])
    return Result(1 if bad else 0, {"verdicts": rows, "obstructed": [list(v.weight) for v in bad]}, text, verdict_csv(vs, sc.rank))


def _cohomology(ctx):
    sc = ctx.scenario
    if ctx.args.cohomology:
        return load_cohomology(ctx.args.cohomology, sc.rank, sc.dim)
    if ctx.loaded.fan is not None and sc.rank == 2:
        return toric_cohomology_2d(ctx.loaded.fan, ctx.loaded.pl)
    raise InputError("morse-check needs --cohomology for this input")


def cmd_morse_check(ctx) -> Result:
    sc = ctx.scenario
    coh = _cohomology(ctx)
    window = ctx.window()
    chs = [ctx.chamber()] if ctx.args.chamber is not None else ctx.chambers()
    rows, text, bad = [], [], False
    for ch in chs:
        st = verify_strong(sc, ch, coh, window)
        wk = weak_check(sc, ch, coh, window)
        bad |= not st.holds_on_window or not wk.holds_on_window
        rows.append({
            "chamber": list(ch.representative), "strong": st.holds_on_window, "weak": wk.holds_on_window,
            "strong_violations": [[list(w), k, v] for w, k, v in st.violations[:20]],
            "weak_violations": [[list(w), k, a, b] for w, k, a, b in wk.violations[:20]],
        })
        text.append(f"{ch.name()} {_w(ch.representative)}: strong {'holds' if st.holds_on_window else 'fails'}, "
                    f"weak {'holds' if wk.holds_on_window else 'fails'}")
        for w, k, v in st.violations[:3]:
            text.append(f"  strong: {_w(w)} degree {k}: {v}")
    text.insert(0, f"window of {len(window)} weights")
    return Result(1 if bad else 0, {"window_size": len(window), "chambers": rows}, text)


def cmd_obstruction(ctx) -> Result:
    sc = ctx.scenario
    cands = [ctx.args.weight] if ctx.args.weight is not None else None
    wit = detect_obstruction(sc, candidates=cands, chambers=ctx.chambers(), margin=ctx.args.margin)
    if wit is None:
        return Result(0, {"obstruction": None}, ["no obstruction found on the window"])
    payload = {"obstruction": {
        "weight": list(wit.weight), "degree": wit.degree, "forced_degrees": list(wit.forced_degrees),
        "forcing_chamber": list(wit.forcing_chamber.representative),
        "excluding_chamber": list(wit.excluding_chamber.representative),
        "forcing_point": wit.forcing_certificate[0], "multiplicity": wit.forced_multiplicity,
    }}
    text = ["obstruction: " + wit.summary(), f"forced degrees: {list(wit.forced_degrees)}"]
    if ctx.args.svg:
        ch = wit.forcing_chamber
        write_svg(ctx.args.svg, regions=gamma_regions(sc, ch), marks=[wit.weight])
    return Result(1, payload, text)


def cmd_toric_cohomology(ctx) -> Result:
    _need_fan(ctx)
    coh = toric_cohomology_2d(ctx.loaded.fan, ctx.loaded.pl)
    text, rows = [], []
    for k, ch in enumerate(coh.coeffs):
        text.append(f"H{k}: " + (" ".join(f"{_w(w)}x{c}" if c != 1 else _w(w) for w, c in ch.items()) or "0"))
        rows.append([[list(w), c] for w, c in ch.items()])
    return Result(0, {"cohomology": rows}, text)


def cmd_flag(ctx) -> Result:
    from .weyl import assemble_nonabelian, flag_orbit, generate_weyl, root_system, weyl_character

    if ctx.flag is not None:
        t, lam = ctx.flag
    else:
        if ctx.args.rs_type is None or ctx.args.lam is None:
            raise InputError("flag needs --type and --lambda")
        t, lam = ctx.args.rs_type, ctx.args.lam
    rs = root_system(t)
    ch = weyl_character(rs, lam)
    window = sorted(ch.support())
    rep = assemble_nonabelian(rs, [flag_orbit(rs, lam)], {0: {tuple(lam): 1}}, window)
    payload = {
        "type": rs.name, "lambda": list(lam), "weyl_order": len(generate_weyl(rs)),
        "character": [[list(w), c] for w, c in ch.items()], "dimension": ch.dimension(),
        "nonabelian_consistent": rep.consistent,
    }
    text = [f"{rs.name}, highest weight {_w(lam)}: dimension {ch.dimension()}, |W| = {payload['weyl_order']}"]
    text += [f"{_w(w)}: {c}" for w, c in ch.items()]
    text.append(f"non-Abelian inequalities with H0 = R_lambda: {'consistent' if rep.consistent else 'inconsistent'}")
    return Result(0 if rep.consistent else 1, payload, text, index_csv(dict(ch.items()), rs.rank))


def cmd_export(ctx) -> Result:
    if not ctx.args.output:
        raise InputError("export needs --output")
    save(ctx.loaded, ctx.args.output)
    return Result(0, {"written": ctx.args.output}, [f"wrote {ctx.args.output}"])


HANDLERS = {
    "validate": cmd_validate, "fixed-points": cmd_fixed_points, "chambers": cmd_chambers,
    "index": cmd_index, "gamma": cmd_gamma, "verdict": cmd_verdict, "morse-check": cmd_morse_check,
    "obstruction": cmd_obstruction, "toric-cohomology": cmd_toric_cohomology, "flag": cmd_flag,
    "export": cmd_export,
}


def _emit(res: Result, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(res.payload, indent=1, sort_keys=True) + "\n")
    elif fmt == "csv":
        if res.csv is None:
            raise InputError("csv output is not available for this command")
        out.write(res.csv)
    else:
        out.write("\n".join(res.text) + "\n")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        if argv and argv[0] == "example":
            # options may sit between the example name and the command
            args = build_example_parser().parse_intermixed_args(argv[1:])
            args.command = "example"
        else:
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.command is None:
        parser.print_usage(err)
        return 2
    try:
        if args.command == "example":
            ctx = _builtin(args)
            action = args.action
        else:
            action = args.command
            if args.input is None:
                if action != "flag":
                    raise InputError("missing input file")
                ctx = Context(None, args)
            else:
                ctx = Context(load(args.input), args)
        if args.svg and ctx.loaded is not None and ctx.scenario.rank != 2:
            raise InputError("--svg is only supported for rank-2 data")
        res = HANDLERS[action](ctx)
        _emit(res, args.format, out)
        return res.code
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except EqMorseError as exc:
        err.write(f"error: {exc}\n")
        return 1


def main() -> None:  # pragma: no cover
    sys.exit(run())
