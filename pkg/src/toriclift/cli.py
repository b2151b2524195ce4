"""Command-line front end.  Exit codes: 0 ok, 1 validation failure, 2 hypothesis violation."""
from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import cover as cov
from . import divisor as dv
from .cohomology import cohomology_table, verify_kv_vanishing
from .errors import HypothesisError, ToricError, ValidationError
from .fan import (
    FIXTURE_BUILDERS,
    blowup_p2,
    hirzebruch,
    is_complete,
    is_smooth,
    product,
    projective_space,
    star_subdivision,
    validate,
    walls_paired,
)
from .io import (
    canonical_json,
    load_cover_spec,
    load_divisor,
    load_fan,
    rational_json,
)
from .witt import strong_lifting_certificate, witt_table

EXIT_OK, EXIT_INVALID, EXIT_HYPOTHESIS = 0, 1, 2


@dataclass
class Workspace:
    """Objects loaded by one invocation; each passed validation when it was registered."""

    fmt: str = "json"
    fans: dict = field(default_factory=dict)
    divisors: dict = field(default_factory=dict)
    covers: dict = field(default_factory=dict)

    def fan(self, ref, check=True):
        if ref not in self.fans:
            self.fans[ref] = load_fan(ref, check=check)
        return self.fans[ref]

    def divisor(self, path, fan_ref=None):
        if path not in self.divisors:
            fan = self.fan(fan_ref) if fan_ref else None
            self.divisors[path] = load_divisor(path, fan)
        return self.divisors[path]

    def cover(self, path):
        if path not in self.covers:
            self.covers[path] = load_cover_spec(path)
        return self.covers[path]

    def emit(self, obj, text=None):
        if self.fmt == "text" and text is not None:
            sys.stdout.write(text.rstrip("\n") + "\n")
        else:
            sys.stdout.write(canonical_json(obj))


def _q(x) -> str:
    return str(x)


# --------------------------------------------------------------------------
# fan
# --------------------------------------------------------------------------

def _build_fan(ws: Workspace, kind: str, args):
    name, _, arg = kind.partition(":")
    if name == "p2":
        return projective_space(2)
    if name == "pn":
        return projective_space(int(arg))
    if name == "hirzebruch":
        return hirzebruch(int(arg))
    if name == "product":
        if len(args.factors) != 2:
            raise ValidationError("product needs two factors (fixture names or fan files)")
        return product(ws.fan(args.factors[0]), ws.fan(args.factors[1]))
    if name == "blowup":
        if arg:
            return blowup_p2(int(arg))
        if not args.factors or not args.ray:
            raise ValidationError("blowup needs blowup:k, or a fan and --ray")
        ray = tuple(int(x) for x in args.ray.split(","))
        return star_subdivision(ws.fan(args.factors[0]), ray)
    if kind in FIXTURE_BUILDERS:
        return FIXTURE_BUILDERS[kind]()
    raise ValidationError(f"unknown fan kind {kind!r}")


def cmd_fan_new(ws, args):
    f = _build_fan(ws, args.kind, args)
    text = canonical_json(f.to_json())
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_fan_check(ws, args):
    f = ws.fan(args.file, check=False)
    problems = list(validate(f))
    report = {"valid": not problems, "problems": problems}
    if not problems:
        report["smooth"] = is_smooth(f)
        report["complete"] = is_complete(f) if f.rank <= 3 else "unsupported"
        if f.rank > 3:
            report["walls_paired"] = walls_paired(f)
    lines = ["valid" if not problems else "INVALID"] + [f"  {p}" for p in problems]
    if not problems:
        lines += [f"smooth: {report['smooth']}", f"complete: {report['complete']}"]
    ws.emit(report, "\n".join(lines))
    return EXIT_OK if not problems else EXIT_INVALID


# --------------------------------------------------------------------------
# div / coh
# --------------------------------------------------------------------------

def cmd_div(ws, args):
    D = ws.divisor(args.file, args.fan)
    op = args.op
    if op == "round":
        out = {
            "round_down": [rational_json(c) for c in dv.round_down(D).coeffs],
            "round_up": [rational_json(c) for c in dv.round_up(D).coeffs],
            "frac": [rational_json(c) for c in dv.frac(D).coeffs],
            "upper_frac": [rational_json(c) for c in dv.upper_frac(D).coeffs],
        }
        text = "\n".join(f"{k}: {[_q(c) for c in getattr(dv, k)(D).coeffs]}" for k in out)
    elif op == "classgroup":
        cg = dv.class_group(D.fan)
        out = {"free_rank": cg.free_rank, "torsion": list(cg.torsion)}
        if D.is_integral():
            free, tors = cg.class_of(D)
            out["class"] = {"free": list(free), "torsion": list(tors)}
        else:
            out["class"] = {"free": [rational_json(x) for x in cg.qclass_of(D)], "torsion": None}
        text = f"Cl = Z^{cg.free_rank}" + "".join(f" + Z/{t}" for t in cg.torsion) + f"\nclass: {out['class']}"
    elif op == "ample":
        out = {"cartier": dv.is_cartier(D), "nef": dv.is_nef(D), "ample": dv.is_ample(D)}
        text = "\n".join(f"{k}: {v}" for k, v in out.items())
    elif op == "polytope":
        P = dv.section_polytope(D)
        pts = P.lattice_points() if D.is_integral() else dv.section_polytope(dv.round_down(D)).lattice_points()
        out = {
            "vertices": [[rational_json(x) for x in v] for v in P.vertices],
            "dimension": P.dimension(),
            "lattice_points": [list(u) for u in pts],
        }
        text = f"vertices: {[[_q(x) for x in v] for v in P.vertices]}\nlattice points: {len(pts)}"
    elif op == "h0":
        n = dv.h0(dv.round_down(D))
        out = {"h0": n}
        text = f"h0 = {n}"
    else:  # argparse restricts choices
        raise ValidationError(op)
    ws.emit(out, text)
    return EXIT_OK


def cmd_coh_table(ws, args):
    D = ws.divisor(args.file, args.fan)
    t = cohomology_table(D, args.char)
    text = "  ".join(f"h^{i} = {x}" for i, x in enumerate(t.h))
    ws.emit(t.to_json(), text)
    return EXIT_OK


# --------------------------------------------------------------------------
# vanish
# --------------------------------------------------------------------------

def _kv_text(rep) -> str:
    return (
        f"h^i(K + ceil H) = {list(rep.h)} (char {rep.p})\n"
        f"claimed vanishing for i in {list(rep.claimed_range)}: {'pass' if rep.claimed_range_pass else 'FAIL'}\n"
        f"h^i(-ceil H) = {list(rep.log_h)}: {'pass' if rep.log_claimed_pass else 'FAIL'}"
    )


def cmd_vanish_kv(ws, args):
    fan = ws.fan(args.fan)
    H = load_divisor(args.H, fan)
    rep = verify_kv_vanishing(fan, H, args.p)
    ws.emit(rep.to_json(), _kv_text(rep))
    return EXIT_OK if rep.claimed_range_pass and rep.log_claimed_pass else EXIT_INVALID


def cmd_vanish_sweep(ws, args):
    fan = ws.fan(args.fan)
    rng = random.Random(args.seed)
    reports = []
    for _ in range(args.count):
        H = dv.random_ample_divisor(fan, rng, max_den=args.max_den)
        reports.append(verify_kv_vanishing(fan, H, args.p))
    ok = all(r.claimed_range_pass and r.log_claimed_pass for r in reports)
    out = {
        "seed": args.seed,
        "count": args.count,
        "p": args.p,
        "all_pass": ok,
        "full_vanishing": all(r.full_vanishing for r in reports),
        "reports": [r.to_json() for r in reports],
    }
    text = f"seed {args.seed}: {sum(r.claimed_range_pass and r.log_claimed_pass for r in reports)}/{args.count} pass"
    ws.emit(out, text)
    return EXIT_OK if ok else EXIT_INVALID


# --------------------------------------------------------------------------
# witt / lift / cover
# --------------------------------------------------------------------------

def _witt_text(t) -> str:
    els = [f"({a},{b})" for a, b in t["elements"]]
    w = max(len(e) for e in els)
    lines = []
    for name in ("add", "mul"):
        lines.append(f"{name} over W_2(F_{t['p']}):")
        lines.append(" " * (w + 1) + " ".join(e.rjust(w) for e in els))
        for e, row in zip(els, t[name]):
            lines.append(e.rjust(w) + " " + " ".join(f"({a},{b})".rjust(w) for a, b in row))
    return "\n".join(lines)


def cmd_witt_table(ws, args):
    t = witt_table(args.p)
    ws.emit(t, _witt_text(t))
    return EXIT_OK


def cmd_lift_certify(ws, args):
    fan = ws.fan(args.fan)
    cert = strong_lifting_certificate(fan, args.p, count=args.count)
    text = (
        f"certificate {'valid' if cert.valid else 'INVALID'} over W_2(F_{args.p})\n"
        f"picard lift: {cert.picard_lift_ok}, section surjectivity: {cert.section_surjectivity_ok} "
        f"({len(cert.section_witnesses)} classes)"
    )
    ws.emit(cert.to_json(), text)
    return EXIT_OK if cert.valid else EXIT_INVALID


def cmd_cover(ws, args):
    spec = ws.cover(args.spec)
    report = cov.analyze(spec, with_lift=args.op == "lift")
    ws.emit(report.to_json(), report.summary())
    if args.op == "lift" and not report.lift["success"]:
        return EXIT_INVALID
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toriclift", description="Exact toric geometry workbench.")
    ap.add_argument("--format", choices=("json", "text"), default="json")
    sub = ap.add_subparsers(dest="group", required=True)

    fan = sub.add_parser("fan").add_subparsers(dest="cmd", required=True)
    p = fan.add_parser("new", help="build a fan: p2, pn:k, hirzebruch:n, product A B, blowup:k or blowup FAN --ray x,y")
    p.add_argument("kind")
    p.add_argument("factors", nargs="*")
    p.add_argument("--ray")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_fan_new)
    p = fan.add_parser("check")
    p.add_argument("file")
    p.set_defaults(func=cmd_fan_check)

    p = sub.add_parser("div")
    p.add_argument("op", choices=("round", "classgroup", "ample", "polytope", "h0"))
    p.add_argument("file")
    p.add_argument("--fan")
    p.set_defaults(func=cmd_div)

    coh = sub.add_parser("coh").add_subparsers(dest="cmd", required=True)
    p = coh.add_parser("table")
    p.add_argument("file")
    p.add_argument("--char", type=int, default=0)
    p.add_argument("--fan")
    p.set_defaults(func=cmd_coh_table)

    van = sub.add_parser("vanish").add_subparsers(dest="cmd", required=True)
    p = van.add_parser("kv")
    p.add_argument("fan")
    p.add_argument("H")
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_vanish_kv)
    p = van.add_parser("sweep", help="random ample Q-divisors")
    p.add_argument("fan")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--max-den", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_vanish_sweep)

    witt = sub.add_parser("witt").add_subparsers(dest="cmd", required=True)
    p = witt.add_parser("table")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--format", dest="local_format", choices=("json", "text"))
    p.set_defaults(func=cmd_witt_table)

    lift = sub.add_parser("lift").add_subparsers(dest="cmd", required=True)
    p = lift.add_parser("certify")
    p.add_argument("fan")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--count", type=int, default=20)
    p.set_defaults(func=cmd_lift_certify)

    cover = sub.add_parser("cover")
    cover.add_argument("op", choices=("analyze", "lift"))
    cover.add_argument("spec")
    cover.set_defaults(func=cmd_cover)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    ws = Workspace(fmt=getattr(args, "local_format", None) or args.format)
    try:
        return args.func(ws, args)
    except HypothesisError as e:
        print(f"error: hypothesis violated: {e}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except ToricError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
