"""Command line interface.

Configurations are JSON documents of the form

    {"lines": [{"id": "a", "t": "0", "s": "0"}, ...]}

with slopes and intercepts as rational strings.  Morphism literals:

    [a,b]           transversal generator of Hom(a,b)
    th(a,b)^n@a     step power at the (a,b) intersection, on the diagonal of a
    th(a,b)^k*dl(a,b)@a   dressed delta (k = n-1 copies of the step)
    dl(a,b)@a       delta one-form at the (a,b) intersection
    one@a           diagonal unit

Exit codes: 0 success, 1 a residual check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .geometry import ConfigError, LineConfig
from .products import BasisMorphism, mk_closed_with_branch, trans
from .scalars import rat
from .svg import emit_svg
from .transfer import transfer_product
from .verify import (CLOSED_BRANCHES, SweepReport, sweep_oracle, sweep_sdr,
                     sweep_stasheff)


def parse_config(text: str) -> LineConfig:
    try:
        doc = json.loads(text)
        rows = [(str(row["id"]), rat(row["t"]), rat(row["s"]))
                for row in doc["lines"]]
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ConfigError(f"malformed configuration document: {exc}") from exc
    return LineConfig.build(rows)


def config_to_json(cfg: LineConfig) -> str:
    from .scalars import rat_str
    rows = [{"id": ln.id, "t": rat_str(ln.t), "s": rat_str(ln.s)}
            for ln in cfg.lines]
    return json.dumps({"lines": rows})


_TRANS_RE = re.compile(r"^\[(\w+),(\w+)\]$")
_DIAG_RE = re.compile(
    r"^(?:th\((\w+),(\w+)\)(?:\^(\d+))?\*?)?(dl\((\w+),(\w+)\))?@(\w+)$")


def parse_morphism(cfg: LineConfig, text: str) -> BasisMorphism:
    text = text.strip()
    m = _TRANS_RE.match(text)
    if m:
        cfg.intersect(m.group(1), m.group(2))
        return trans(m.group(1), m.group(2))
    if text.startswith("one@"):
        obj = text[4:]
        cfg.line(obj)
        return BasisMorphism("unit", obj, obj)
    m = _DIAG_RE.match(text)
    if m and (m.group(1) or m.group(4)):
        th_a, th_b, th_n, dl_part, dl_a, dl_b, obj = m.groups()
        if th_a is not None:
            x = cfg.intersect(th_a, th_b).x
            n = int(th_n) if th_n else 1
            if dl_part is None:
                return BasisMorphism("theta", obj, obj, x, n)
            if cfg.intersect(dl_a, dl_b).x != x:
                raise ConfigError("mixed-point dressed delta literal")
            return BasisMorphism("delta", obj, obj, x, n + 1)
        x = cfg.intersect(dl_a, dl_b).x
        return BasisMorphism("delta", obj, obj, x, 1)
    raise ConfigError(f"unparsable morphism literal: {text!r}")


def _load_cfg(path: str) -> LineConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _partner(cfg: LineConfig, a: str, x) -> str:
    for b in cfg.ids():
        if b != a and cfg.intersect(a, b).x == x:
            return b
    raise ConfigError(f"no intersection point on line {a!r} at x={x}")


def render_velement(cfg: LineConfig, v) -> str:
    """Canonical text with diagonal points named by their line pairs."""
    from .stepforms import _mono_terms
    if v.is_zero():
        return "0"
    parts = []
    if not v.trans.is_zero():
        parts.extend(_mono_terms(v.trans, f"[{v.source},{v.target}]"))
    a = v.source
    if not v.step0.const.is_zero():
        parts.extend(_mono_terms(v.step0.const, f"one@{a}"))
    for (x, n), c in v.step0.terms:
        b = _partner(cfg, a, x)
        pow_ = f"^{n}" if n != 1 else ""
        parts.extend(_mono_terms(c, f"th({a},{b}){pow_}@{a}"))
    for (x, n), c in v.step1.terms:
        b = _partner(cfg, a, x)
        lead = (f"th({a},{b})^{n-1}*" if n > 2
                else (f"th({a},{b})*" if n == 2 else ""))
        parts.extend(_mono_terms(c, f"{lead}dl({a},{b})@{a}"))
    return " + ".join(parts).replace("+ -", "- ")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="linecat")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("intersections", help="list pairwise intersection points")
    p.add_argument("config")

    p = sub.add_parser("product", help="evaluate a k-fold product")
    p.add_argument("config")
    p.add_argument("morphisms", nargs="+")
    p.add_argument("--via", choices=["closed", "hpt", "both"], default="closed")

    p = sub.add_parser("check", help="run the identity sweeps")
    p.add_argument("config")
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--nmax", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=200)

    p = sub.add_parser("sdr", help="check the homotopy identities")
    p.add_argument("config")
    p.add_argument("--nmax", type=int, default=4)

    p = sub.add_parser("hpt-trace", help="per-tree transfer contributions")
    p.add_argument("config")
    p.add_argument("morphisms", nargs="+")

    p = sub.add_parser("svg", help="emit an SVG figure")
    p.add_argument("config")
    p.add_argument("--polygon", nargs="+", default=None,
                   help="line ids of a cyclic polygon selection")
    p.add_argument("--tree", action="store_true")
    p.add_argument("--strict", action="store_true")
    p.add_argument("-o", "--output", default="-")

    args = ap.parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _run(args) -> int:
    cfg = _load_cfg(args.config)

    if args.cmd == "intersections":
        ids = cfg.ids()
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                p = cfg.intersect(a, b)
                print(f"v[{a}{b}] = {p} degree {cfg.morphism_degree(a, b)}")
        return 0

    if args.cmd == "product":
        ws = [parse_morphism(cfg, w) for w in args.morphisms]
        closed, branch = mk_closed_with_branch(cfg, ws)
        if args.via == "closed":
            print(render_velement(cfg, closed))
            return 0
        transferred = transfer_product(cfg, ws)
        if args.via == "hpt":
            print(render_velement(cfg, transferred))
            return 0
        print(f"closed   {render_velement(cfg, closed)}")
        print(f"transfer {render_velement(cfg, transferred)}")
        if closed != transferred:
            print("MISMATCH")
            return 1
        return 0

    if args.cmd == "check":
        report = SweepReport()
        sweep_stasheff(cfg, kmax=args.kmax, nmax=args.nmax, seed=args.seed,
                       budget=args.budget, report=report)
        oracle = SweepReport()
        sweep_oracle(cfg, kmax=min(args.kmax, 5), nmax=args.nmax,
                     seed=args.seed, budget=args.budget, report=oracle)
        failures = report.failures + oracle.failures
        for line in report.lines + oracle.lines:
            if "RESIDUAL 0" not in line:
                print(line)
        hit = sorted(report.branches | oracle.branches)
        missed = sorted(set(CLOSED_BRANCHES) - set(hit))
        print(f"stasheff tuples {report.tuples_checked} failures {report.failures}")
        print(f"oracle tuples {oracle.tuples_checked} failures {oracle.failures}")
        print("branches hit: " + " ".join(hit))
        if missed:
            print("branches missed: " + " ".join(missed))
        return 1 if failures else 0

    if args.cmd == "sdr":
        failures = sweep_sdr(cfg, nmax=args.nmax)
        for f in failures:
            print(f"FAIL hom{f.pair} {f.generator} {f.identity}: {f.residual}")
        print(f"sdr generators checked on {len(cfg.ids())**2} hom pairs; "
              f"failures {len(failures)}")
        return 1 if failures else 0

    if args.cmd == "hpt-trace":
        ws = [parse_morphism(cfg, w) for w in args.morphisms]
        contribs = []
        total = transfer_product(cfg, ws, collect=contribs)
        for c in contribs:
            print(f"TREE {c.tree} I {c.i_count} K "
                  f"{'-' if c.k_sign < 0 else '+'} EDGES "
                  f"{''.join(o or '.' for o in c.edge_orientations) or '-'} "
                  f"VALUE {render_velement(cfg, c.value)}")
        print(f"TOTAL {render_velement(cfg, total)}")
        return 0

    if args.cmd == "svg":
        try:
            text = emit_svg(cfg, polygon_ids=args.polygon, with_tree=args.tree,
                            strict=args.strict)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        if args.output == "-":
            sys.stdout.write(text)
        else:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        return 0

    raise AssertionError(args.cmd)


if __name__ == "__main__":
    sys.exit(main())
