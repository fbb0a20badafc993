"""Command-line front end.

Every command builds a :class:`Report` and renders it in one of three
formats.  ``structured`` is JSON with the stable schema

    {"schema": "surfdyn.report/1", "command": str, "entry": str | null,
     "summary": {str: scalar | list}, "columns": [str], "rows": [[scalar]],
     "warnings": [str]}

Exit codes: 0 ok, 2 data-consistency, 3 capability or missing data,
4 resource budget, 5 precision.
"""
import argparse
from dataclasses import dataclass, field
import json
import sys
import warnings

from . import cremona as cr, curves, growth, hilbert
from .errors import CapabilityError, DataConsistencyError, InsufficientDataError, SurfdynError
from .io import Catalog, read_json, stability_to_dict, write_json
from .verify import SUITES, run_suites

SCHEMA = "surfdyn.report/1"
FORMATS = ("table", "delimited", "structured")


@dataclass
class Report:
    command: str
    entry: object = None
    summary: dict = field(default_factory=dict)
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    exit_code: int = 0

    def as_dict(self):
        return {"schema": SCHEMA, "command": self.command, "entry": self.entry,
                "summary": self.summary, "columns": self.columns, "rows": self.rows,
                "warnings": self.warnings}


def _cell(v):
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(str(x) for x in v) + ")"
    if v is None:
        return "-"
    return str(v)


def render(rep, fmt):
    if fmt == "structured":
        return json.dumps(rep.as_dict(), indent=2, default=str)
    lines = []
    if fmt == "delimited":
        for k, v in rep.summary.items():
            lines.append(f"# {k}\t{_cell(v)}")
        if rep.columns:
            lines.append("\t".join(rep.columns))
            lines.extend("\t".join(_cell(c) for c in row) for row in rep.rows)
    else:
        width = max((len(k) for k in rep.summary), default=0)
        for k, v in rep.summary.items():
            lines.append(f"{k.ljust(width)}  {_cell(v)}")
        if rep.columns:
            cells = [rep.columns] + [[_cell(c) for c in row] for row in rep.rows]
            ws = [max(len(r[i]) for r in cells) for i in range(len(rep.columns))]
            if lines:
                lines.append("")
            for r in cells:
                lines.append("  ".join(c.rjust(w) for c, w in zip(r, ws)).rstrip())
    for w in rep.warnings:
        lines.append(f"warning: {w}")
    return "\n".join(lines)


def _entry(cat, name, need=None):
    if not name:
        raise CapabilityError("this command needs --entry")
    try:
        e = cat[name]
    except KeyError as exc:
        raise CapabilityError(str(exc.args[0])) from None
    if need and need not in e.spec:
        raise CapabilityError(f"entry {name} has no {need} data")
    return e


# -- commands ----------------------------------------------------------------


def cmd_list(cat, args):
    rows = [[e.name, e.kind, ",".join(k for k in ("map", "coordinate", "family") if k in e.spec)]
            for e in cat]
    return Report("list", None, {"catalog": str(cat.root)}, ["name", "kind", "files"], rows)


def cmd_classify(cat, args):
    e = _entry(cat, args.entry, "map")
    M = e.pullback()
    g = growth.classify(M.P, M.stability, e.spec.get("fibration", False))
    return Report("classify", e.name, growth.verdict_report(g))


def cmd_hilbert(cat, args):
    e = _entry(cat, args.entry, "map")
    L, M, D = e.lattice(), e.pullback(), e.ample()
    n_max = args.n_max or 20
    seq = hilbert.hilbert_sequence(L, M, D, n_max)
    rows = [list(r) for r in seq.rows()]
    summary = {"D": list(D.coeffs), "n_max": n_max, "caveat": seq.caveat}
    g = growth.classify(M.P, M.stability)
    summary["map_rho"] = g.rho.describe()
    summary["map_j"] = g.j
    try:
        rho_h, j_h = hilbert.fit_growth(seq.h[1:])
        summary["fit_rate"] = round(rho_h, 6)
        summary["fit_exponent"] = j_h
        if g.rho.exceeds_one():
            summary["relation"] = (f"h-rate {rho_h:.4f} ~ rho^2 = {g.rho.value ** 2:.4f}: "
                                   "(D_n.D_n) dominates h(n)")
        else:
            summary["relation"] = f"h(n) ~ n^{j_h}, predicted n^(j+2) = n^{g.j + 2}"
    except (DataConsistencyError, InsufficientDataError) as exc:
        summary["fit"] = f"not available: {exc}"
    rec = hilbert.selfint_recurrence_check(L, M, D, min(n_max, 30))
    summary["selfint_recurrence"] = (f"holds with N = {rec.N} ({rec.checked} pairs)" if rec.applicable
                                     else f"skipped: {rec.reason}")
    return Report("hilbert", e.name, summary, ["n", "D_n", "(D_n.D_n)", "(D_n.K)", "h"], rows)


def _coordinate(e):
    if "coordinate" not in e.spec:
        raise CapabilityError(f"entry {e.name} has no coordinate map")
    return e.coordinate()


def _attach(e, cert):
    if "map" in e.spec:
        path = e.map_path
    else:
        path = e.root / e.spec["coordinate"]
    d = read_json(path)
    d["stability"] = stability_to_dict(cert)
    write_json(path, d)
    return str(path)


def cmd_orbit(cat, args):
    e = _entry(cat, args.entry)
    M, Mi = _coordinate(e)
    horizon = args.horizon or 12
    cert = cr.stability_check(M, Mi, horizon)
    rows = []
    for label, _, img in M.contracted_curves:
        for k, q in cr.orbit(M, img, horizon):
            rows.append([label, k + 1, list(q) if q is not None else "undefined"])
    summary = {"map": M.describe(), "horizon": horizon, "stability": cert.kind}
    if cert.witness:
        summary["witness"] = (f"curve {cert.witness['curve']} reaches the fundamental point "
                              f"{tuple(cert.witness['point'])} after {cert.witness['n']} step(s)")
    if args.attach:
        summary["attached_to"] = _attach(e, cert)
    return Report("orbit", e.name, summary, ["curve", "n", "sigma^n(curve)"], rows)


def cmd_degseq(cat, args):
    e = _entry(cat, args.entry)
    M, _ = _coordinate(e)
    n_max = args.n_max or 4
    degs = cr.degree_sequence(M, n_max, (args.max_degree, cr.MAX_DIGITS))
    return Report("degseq", e.name, {"map": M.describe(), "degrees": degs},
                  ["n", "deg sigma^n"], [[n, d] for n, d in enumerate(degs, start=1)])


def cmd_scan(cat, args):
    e = _entry(cat, args.entry)
    M, Mi = _coordinate(e)
    horizon = args.horizon or 10
    scan = cr.unbalanced_scan(M, Mi, horizon, seed=args.seed)
    rows = [[list(ev.point), len(ev.backward_orbit) - 1, len(ev.undefined_at), ev.flagged]
            for ev in scan.evidence]
    summary = {"horizon": horizon, "applicable": scan.applicable, "caveat": scan.caveat,
               "flagged": [list(p) for p in scan.points]}
    if scan.reason:
        summary["reason"] = scan.reason
    return Report("scan", e.name, summary,
                  ["point", "backward steps", "k with sigma^k undefined", "flagged"], rows)


def cmd_curve(cat, args):
    e = _entry(cat, args.entry, "family")
    n_max = args.n_max or e.family_spec().get("n_max", 10)
    r = curves.product_growth(e.family(), n_max)
    summary = {"n_max": n_max, "violations": r.violations, "genus0_violations": r.genus0_violations,
               "no_generic": r.no_generic, "witnesses": len(r.witnesses)}
    return Report("curve", e.name, summary, ["n", "d_n", "e_n", "m(n)", "recurrence"],
                  [list(row) for row in r.rows()], exit_code=0 if r.ok else 2)


_RULES = {"sqrt": lambda a: curves.sqrt_rule, "shift": lambda a: curves.shift_rule(int(a or 2)),
          "power": lambda a: curves.power_rule(float(a or 0.5))}


def cmd_recurrence(cat, args):
    name, _, arg = (args.rule or "sqrt").partition(":")
    if name not in _RULES:
        raise CapabilityError(f"unknown rule {name!r}; choose sqrt, shift:q or power:beta")
    n_max = args.n_max or 100000
    r = curves.recurrence_lower_bound(1, _RULES[name](arg), n_max)
    summary = {"rule": args.rule or "sqrt", "n_max": n_max, "exponent": round(r.exponent, 6),
               "exponent_fit": round(r.exponent_fit, 6), "rate": round(r.rate, 10),
               "rate_fit": round(r.rate_fit, 10), "log f(n_max)": round(r.log_values[-1], 6)}
    return Report("recurrence", None, summary)


def cmd_verify(cat, args):
    checks = run_suites(cat, args.scope, args.seed)
    bad = [c for c in checks if not c.ok]
    summary = {"checks": len(checks), "failures": len(bad), "scope": args.scope, "seed": args.seed}
    rows = [[c.suite, c.name, "pass" if c.ok else "FAIL", c.detail] for c in checks
            if args.all or not c.ok]
    code = (bad[0].exit_code or 2) if bad else 0
    return Report("verify", None, summary, ["suite", "check", "result", "detail"], rows, exit_code=code)


COMMANDS = {"list": cmd_list, "classify": cmd_classify, "hilbert": cmd_hilbert, "orbit": cmd_orbit,
            "degseq": cmd_degseq, "scan": cmd_scan, "curve": cmd_curve, "recurrence": cmd_recurrence,
            "verify": cmd_verify}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalog", help="catalog directory (default: the bundled catalog)")
    common.add_argument("--entry", help="catalog entry name")
    common.add_argument("--n-max", type=int, help="sequence length")
    common.add_argument("--horizon", type=int, help="iteration horizon for orbit checks")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    common.add_argument("--format", choices=FORMATS, default="table")
    p = argparse.ArgumentParser(prog="surfdyn", description="Growth of birational surface maps.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("list", parents=[common], help="catalog entries")
    sub.add_parser("classify", parents=[common], help="growth data and GK verdict")
    sub.add_parser("hilbert", parents=[common], help="Riemann-Roch sequence and growth fit")
    o = sub.add_parser("orbit", parents=[common], help="orbits of contracted curves, stability")
    o.add_argument("--attach", action="store_true", help="write the certificate into the entry's file")
    g = sub.add_parser("degseq", parents=[common], help="degrees of the iterates")
    g.add_argument("--max-degree", type=int, default=cr.MAX_DEGREE, help="degree budget")
    sub.add_parser("scan", parents=[common], help="unbalanced-point evidence")
    sub.add_parser("curve", parents=[common], help="curve-restriction growth table")
    r = sub.add_parser("recurrence", parents=[common], help="f(n) = f(n-1) + f(m(n)) numerics")
    r.add_argument("--rule", help="sqrt, shift:q or power:beta (default sqrt)")
    v = sub.add_parser("verify", parents=[common], help="invariant suites over the catalog")
    v.add_argument("--scope", default="all", help=f"comma list from {', '.join(SUITES)}")
    v.add_argument("--all", action="store_true", help="list passing checks too")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            cat = Catalog(args.catalog)
            rep = COMMANDS[args.command](cat, args)
        rep.warnings.extend(sorted({str(w.message) for w in caught}))
    except SurfdynError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CapabilityError.exit_code
    print(render(rep, args.format))
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
