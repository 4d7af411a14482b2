"""Command-line front end.

Every subcommand prints JSON (or CSV with --format csv) with sorted keys, so
identical invocations give identical bytes.  Exit codes: 0 success, 1 failed
verification, 2 usage error, 3 enumeration budget exceeded.
"""

import argparse
import csv
import io
import json
import sys

from . import mks, repth, verify
from .chars import gauss_sum, parse_char
from .etale import BudgetError
from .expsums import (composite_exotic_gauss, exotic_gauss, exotic_gauss_product,
                      kloosterman_log, lpolynomial, lpolynomial_residuals, parse_composite)
from .fields import FieldError, build_tower
from .glq import class_representative, enumerate_classes, parse_class, tower_for
from .symfunc import SymError

enc = verify.encode_complex


class UsageError(Exception):
    pass


def _tower(q):
    try:
        return tower_for(q)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc


def _alpha(args, tower):
    lam = args.lam or "+".join(s.split(":")[0] for s in args.alpha.split(",") if ":" in s)
    if not lam:
        raise UsageError("--lambda is required when --alpha has no levels")
    return parse_composite(tower, lam, args.alpha)


def cmd_field(args):
    if args.action != "info":
        raise UsageError(f"unknown field action {args.action!r}")
    try:
        tower = build_tower(args.p, args.f, args.max_deg)
        return tower.info()
    except FieldError as exc:
        raise UsageError(str(exc)) from exc


def cmd_gauss(args):
    tower = _tower(args.q)
    alpha = parse_char(tower, args.alpha)
    params = {"q": args.q, "alpha": args.alpha}
    if args.chi is None:
        val = gauss_sum(alpha)
    else:
        chi = parse_char(tower, args.chi)
        k = args.k or alpha.level
        m = args.m or chi.level
        if (k, m) != (alpha.level, chi.level):
            raise UsageError("--k/--m must match the character levels")
        params.update(k=k, m=m, chi=args.chi, path=args.path)
        if args.path == "direct":
            val = exotic_gauss(k, m, alpha, chi, budget=args.budget)
        else:
            val = exotic_gauss_product(k, m, alpha, chi)
    return {"params": params, "value_re": enc(val)["re"], "value_im": enc(val)["im"]}


def cmd_kl(args):
    tower = _tower(args.q)
    alpha = _alpha(args, tower)
    M = args.base * args.m
    val = kloosterman_log(alpha, M, args.xi, path=args.path, budget=args.budget)
    norm = val * args.q ** (-(alpha.k - 1) * M / 2)
    params = {"q": args.q, "lambda": list(alpha.parts), "alpha": str(alpha), "base": args.base,
              "m": args.m, "xi": args.xi, "path": args.path}
    return {"params": params, "value_re": enc(val)["re"], "value_im": enc(val)["im"],
            "normalized": enc(norm)}


def cmd_lpoly(args):
    tower = _tower(args.q)
    alpha = _alpha(args, tower)
    lp = lpolynomial(alpha, args.base, tower.from_log(args.base, args.xi), path=args.path,
                     budget=args.budget)
    tail, mism, pur = lpolynomial_residuals(lp)
    roots = sorted(lp.roots, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    return {"params": {"q": args.q, "lambda": list(alpha.parts), "alpha": str(alpha),
                       "base": args.base, "xi": args.xi},
            "coeffs": [enc(c) for c in lp.coeffs], "roots": [enc(r) for r in roots],
            "residuals": {"series_tail": float(f"{tail:.3g}"), "power_sums": float(f"{mism:.3g}"),
                          "purity": float(f"{pur:.3g}")}}


def cmd_mks(args):
    tower = _tower(args.q)
    alpha = _alpha(args, tower)
    label = parse_class(args.cls, args.q)
    query = mks.MKSQuery(alpha, label)
    if args.path == "brute":
        if alpha.s != 1:
            raise UsageError("the brute path takes a single character; use conv")
        val = mks.mks_bruteforce(alpha, label, budget=args.budget)
    elif args.path == "conv":
        val = mks.mks_convolve(query, budget=args.budget)
    else:
        val = mks.mks_hl(query)
    norm = mks.normalize(val, args.q, alpha.k, label.n)
    return {"params": {"q": args.q, "lambda": list(alpha.parts), "alpha": str(alpha),
                       "class": str(label)},
            "path": args.path, "value_re": enc(val)["re"], "value_im": enc(val)["im"],
            "normalized": enc(norm)}


def cmd_char_table(args):
    q, n = args.q, args.n
    _tower(q)
    params, table = repth.character_table(q, n)
    labels = enumerate_classes(q, n)
    return {"q": q, "n": n, "labels": [str(x) for x in labels],
            "sizes": [int(round(s)) for s in repth.class_sizes(q, n)],
            "parameters": [str(p) for p in params],
            "dimensions": [repth.dimension(p) for p in params],
            "characters": [[enc(v) for v in row] for row in table]}


def cmd_speh_table(args):
    q, k, c = args.q, args.k, args.c
    tower = _tower(q)
    if args.alpha:
        alpha = parse_char(tower, args.alpha)
    else:
        regs = verify.composites(q, (k,))
        if not regs:
            raise UsageError(f"no regular character at level {k}")
        alpha = regs[0].chars[0]
    if alpha.level != k:
        raise UsageError("--alpha must be at level k")
    rows = [{"class": str(lab), "value": enc(v)} for lab, v in repth.appendix_table(alpha, c)]
    out = {"q": q, "k": k, "c": c, "alpha": f"{alpha.level}:{alpha.index}", "support": rows}
    if k == 2 and c == 2:
        table = []
        found = {}
        for lab, i, tv, _ in verify.speh_table_rows(q, alpha.index):
            if i is not None:
                found.setdefault(i, []).append(str(lab))
        for i, (pattern, expr) in enumerate(verify.SPEH_TABLE):
            table.append({"row": i + 1, "shape": [[a, list(mu), v] for a, mu, v in pattern],
                          "value": expr, "classes": found.get(i, [])})
        out["table"] = table
    return out


def cmd_bessel(args):
    tower = _tower(args.q)
    alpha = _alpha(args, tower)
    label = parse_class(args.cls, args.q)
    c, k = label.n, alpha.k
    if args.path == "speh":
        val = repth.bessel_speh_value(alpha, c, class_representative(label, args.q).raw)
        star = args.q ** ((k - 1) * c * c / 2) * val
    else:
        star = mks.bessel_speh_hl(alpha, label)
        val = star * args.q ** (-(k - 1) * c * c / 2)
    return {"params": {"q": args.q, "lambda": list(alpha.parts), "alpha": str(alpha),
                       "class": str(label)},
            "path": args.path, "value_re": enc(val)["re"], "value_im": enc(val)["im"],
            "normalized": enc(star)}


def cmd_gamma(args):
    tower = _tower(args.q)
    alpha = _alpha(args, tower)
    phi = repth.parse_green(args.pi, args.q)
    phi_tau = repth.generic_parameter(alpha)
    eps = repth.epsilon0(phi, phi_tau)
    out = {"params": {"q": args.q, "lambda": list(alpha.parts), "alpha": str(alpha), "pi": str(phi)},
           "epsilon0": enc(eps), "exotic_gauss": enc(repth.kondo_scalar(phi, alpha, "closed"))}
    if not args.no_bessel:
        out["gamma"] = enc(repth.gamma_GK(phi, alpha))
    return out


def cmd_verify(args):
    if not args.all and not args.id:
        raise UsageError("give a check id or --all")
    if args.id and args.id not in verify.REGISTRY:
        raise UsageError(f"unknown check {args.id!r}; known: {', '.join(verify.REGISTRY)}")
    over = {"q": args.q, "k": args.k, "c": args.c, "n": args.n, "m": args.m}
    if args.lam:
        over["lam"] = [int(x) for x in args.lam.replace(",", "+").split("+")]
    if args.alpha:
        over["alpha"] = args.alpha
    if args.tol is not None:
        over["tol"] = args.tol
    ids = list(verify.REGISTRY) if args.all else [args.id]
    reports = []
    for cid in ids:
        pts = verify.default_grid(cid)
        keys = {k for pt in pts for k in pt} | {"tol", "alpha"}
        sub = {k: v for k, v in over.items() if k in keys}
        if args.all:
            sub = {k: v for k, v in sub.items() if k in ("q", "tol")}
        reports += verify.run_grid(cid, sub) if (pts or sub) else []
    lines = []
    for r in reports:
        d = r.to_dict(full=args.full)
        if args.timing:
            d["wall"] = round(r.wall, 3)
        else:
            d.pop("wall", None)
        lines.append(d)
    return {"_lines": lines, "_ok": all(r.passed for r in reports)}


def build_parser():
    # global options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", dest="sub_budget", type=int,
                        help="enumeration cap (default 1e8 or $ARTIFACT_BUDGET)")
    common.add_argument("--format", dest="sub_format", choices=("json", "csv"))
    ap = argparse.ArgumentParser(prog="artifact", description=__doc__.splitlines()[0])
    ap.add_argument("--budget", type=int, help="enumeration cap (default 1e8 or $ARTIFACT_BUDGET)")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    sub = ap.add_subparsers(dest="cmd", required=True)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **kw: _add(*a, parents=[common], **kw)

    p = sub.add_parser("field", help="field tower data")
    p.add_argument("action", choices=("info",))
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--f", type=int, default=1)
    p.add_argument("--max-deg", type=int, default=1)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("gauss", help="Gauss sum or exotic Gauss sum tau_{k,m}")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--alpha", required=True, help="character m:j")
    p.add_argument("--chi", help="character m:j")
    p.add_argument("--path", choices=("product", "direct"), default="product")
    p.set_defaults(func=cmd_gauss)

    def char_args(p):
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--lambda", dest="lam", help="partition like 2+1")
        p.add_argument("--alpha", required=True, help="comma list of m:j")

    p = sub.add_parser("kl", help="exotic Kloosterman sum")
    char_args(p)
    p.add_argument("--base", type=int, default=1)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--xi", type=int, required=True, help="discrete log at level base*m")
    p.add_argument("--path", choices=("auto", "brute", "fourier", "fiber"), default="auto")
    p.set_defaults(func=cmd_kl)

    p = sub.add_parser("lpoly", help="normalized L-polynomial and its roots")
    char_args(p)
    p.add_argument("--base", type=int, default=1)
    p.add_argument("--xi", type=int, required=True, help="discrete log at level base")
    p.add_argument("--path", choices=("auto", "brute", "fourier", "fiber"), default="auto")
    p.set_defaults(func=cmd_lpoly)

    p = sub.add_parser("mks", help="exotic matrix Kloosterman sum")
    char_args(p)
    p.add_argument("--class", dest="cls", required=True, help="a:j:[m1,...];...")
    p.add_argument("--path", choices=("brute", "conv", "hl"), default="hl")
    p.set_defaults(func=cmd_mks)

    p = sub.add_parser("char-table", help="character table of GL_n(F_q)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_char_table)

    p = sub.add_parser("speh-table", help="Speh character for a cuspidal tau")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--alpha", help="regular character k:j (default: the first one)")
    p.set_defaults(func=cmd_speh_table)

    p = sub.add_parser("bessel", help="Bessel-Speh special value")
    char_args(p)
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--path", choices=("speh", "hl"), default="speh")
    p.set_defaults(func=cmd_bessel)

    p = sub.add_parser("gamma", help="gamma factor, epsilon factor, exotic Gauss scalar")
    char_args(p)
    p.add_argument("--pi", required=True, help="Green parameter d:j:[mu];...")
    p.add_argument("--no-bessel", action="store_true", help="skip the Bessel-Speh gamma factor")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("verify", help="run identity checks")
    p.add_argument("id", nargs="?")
    p.add_argument("--all", action="store_true")
    for name in ("q", "k", "c", "n", "m"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--alpha")
    p.add_argument("--tol", type=float)
    p.add_argument("--full", action="store_true", help="include both sides in each report")
    p.add_argument("--timing", action="store_true", help="include wall times")
    p.set_defaults(func=cmd_verify)
    return ap


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = json.dumps(v, sort_keys=True)
        else:
            out[key] = v
    return out


def _emit(result, fmt, out):
    rows = result["_lines"] if isinstance(result, dict) and "_lines" in result else None
    if fmt == "json":
        if rows is not None:
            for r in rows:
                out.write(json.dumps(r, sort_keys=True) + "\n")
        else:
            out.write(json.dumps(result, sort_keys=True) + "\n")
        return
    flat = [_flatten(r) for r in (rows if rows is not None else [result])]
    cols = sorted({k for r in flat for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in flat:
        w.writerow(r)
    out.write(buf.getvalue())


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    for name in ("budget", "format"):
        val = getattr(args, "sub_" + name, None)
        if val is not None:
            setattr(args, name, val)
    try:
        result = args.func(args)
    except BudgetError as exc:
        sys.stderr.write(json.dumps({"error": "budget", "size": exc.size, "budget": exc.budget},
                                    sort_keys=True) + "\n")
        return 3
    except (UsageError, FieldError, SymError, ValueError, KeyError) as exc:
        sys.stderr.write(f"artifact: error: {exc}\n")
        return 2
    _emit(result, args.format, sys.stdout)
    if isinstance(result, dict) and "_ok" in result:
        return 0 if result["_ok"] else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
