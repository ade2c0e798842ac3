"""Command line front end.

Exit status 0 means a verdict or report was produced (a "false" verdict is
still a success); 1 is an operational error, 2 a configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import arith
from .config import RunConfig, Workspace
from .errors import ConfigError, EdsModelError


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("configuration (flags override EDSMODEL_* variables)")
    g.add_argument("--a", type=int, default=None, help="Weierstrass coefficient a (default 0)")
    g.add_argument("--b", type=int, default=None, help="Weierstrass coefficient b (default -2)")
    g.add_argument("--gen", default=None, help="generator as 'x,y', rationals allowed (default 3,5)")
    g.add_argument("--nmax", type=int, default=None, help="materialization bound (default 48)")
    g.add_argument("--budget", type=int, default=None, help="trial-division bound (default 10^6)")
    g.add_argument("--rho-iters", dest="rho_iters", type=int, default=None, help="rho iteration cap per cofactor")
    g.add_argument("--qmax", type=int, default=None, help="sieve bound for apparition data (default 5000)")
    g.add_argument("--m1", type=int, default=None, help="index multiplier for the protocol (default 1)")
    g.add_argument("--challenge", type=int, default=None, help="indicator prime used for challenges (default 19)")
    g.add_argument("--ledger", default=None, help="ledger JSON path")
    g.add_argument("--format", choices=["json", "csv", "table"], default=None)
    g.add_argument("--json", action="store_true", help="shorthand for --format json")
    return p


def _emit_rows(rows, fmt, out, columns=None):
    if fmt == "json":
        out.write(json.dumps(rows, indent=1, sort_keys=True) + "\n")
        return
    columns = columns or (list(rows[0]) if rows else [])
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in columns])
        return
    cells = [[_cell(r.get(c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    out.write("  ".join(c.ljust(wd) for c, wd in zip(columns, widths)).rstrip() + "\n")
    for row in cells:
        out.write("  ".join(v.ljust(wd) for v, wd in zip(row, widths)).rstrip() + "\n")


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    return "" if v is None else str(v)


def _emit_doc(doc, out):
    out.write(json.dumps(doc, indent=1, sort_keys=True, default=str) + "\n")


def _write_csv(rows, path, columns=None):
    buf = io.StringIO()
    _emit_rows(rows, "csv", buf, columns)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


# -- table builders -----------------------------------------------------------


def _factor_string(ledger, n):
    rec = ledger.require(n)
    parts = [f"{p}^{e}" for p, e in sorted(rec.bad_part.items())]
    for a, e in rec.entries.items():
        atom = ledger.atoms[a]
        parts.append(f"{atom.value}^{e}" if atom.kind == "IdentifiedPrime" else f"{atom.label}^{e}")
    return "*".join(parts) or "1"


def seq_rows(ws, upto=None):
    from .ledger import FactorLedger

    curve = ws.curve
    led = ws.ledger if ws.config.ledger_path else FactorLedger(curve)
    rows = []
    for n in range(1, (upto or curve.n_max) + 1):
        led.build(n)
        rec = curve.multiple(n)
        rows.append({
            "n": n,
            "x": arith.fmt_rational(rec.point.x),
            "y": arith.fmt_rational(rec.point.y),
            "den_x": _factor_string(led, n),
        })
    return rows


def apparition_rows(ws):
    return [{"q": r.q, "n_q": r.n_q, "base_val": r.base_val} for r in ws.apparition.sieve(ws.config.sieve_bound)]


def indicator_rows(ws, lmax):
    from .errors import NoPrimitivePart

    sets = ws.sets
    rows = []
    top = min(lmax, ws.curve.n_max)
    for l in arith.primes_up_to(top):
        j = 1
        while l**j <= top:
            try:
                atom = sets.indicator(l, j)
                rows.append({"l": l, "j": j, "atom": atom.label, "digits": arith.digits(atom.value), "status": atom.status})
            except NoPrimitivePart:
                rows.append({"l": l, "j": j, "atom": "NONE", "digits": 0, "status": "empty"})
            j += 1
    rows.sort(key=lambda r: (r["l"] ** r["j"], r["l"]))
    return rows


def ledger_rows(ledger):
    rows = []
    for n in sorted(ledger.indices):
        rec = ledger.indices[n]
        rows.append({
            "n": n,
            "bad": "*".join(f"{p}^{e}" for p, e in sorted(rec.bad_part.items())) or "1",
            "entries": " ".join(f"{a}^{e}" for a, e in rec.entries.items()),
            "primitive_atoms": len(ledger.primitive_atoms(n)),
        })
    return rows


def atom_rows(ledger, sets=None):
    rows = []
    for atom in sorted(ledger.atoms.values(), key=lambda a: (a.origin, a.kind, a.value)):
        row = {"id": atom.id, "kind": atom.kind, "origin": atom.origin, "value": atom.label,
               "digits": arith.digits(atom.value), "status": atom.status}
        if sets is not None:
            row["class"] = sets.classify(atom.id).tag
        rows.append(row)
    return rows


def density_rows(ws, xs):
    from .density import census

    return census(ws.sets, xs)


def hasse_rows(ws):
    from .density import hasse_check

    return hasse_check(ws.sets)


# -- command handlers -----------------------------------------------------------


def cmd_seq(ws, args, out):
    _emit_rows(seq_rows(ws), ws.config.fmt, out, ["n", "x", "y", "den_x"])


def cmd_ledger_build(ws, args, out):
    led = ws.load_ledger(required=False)
    led.build_all(args.upto)
    path = ws.config.ledger_path
    if path and not led.truncated:
        led.persist(path)
    blocks = sum(1 for a in led.atoms.values() if a.kind == "PrimitiveCofactor")
    _emit_doc({"path": path, "indices": len(led.indices), "atoms": len(led.atoms), "blocks": blocks,
               "persisted": bool(path) and not led.truncated}, out)


def cmd_ledger_show(ws, args, out):
    led = ws.ledger
    if args.atoms:
        _emit_rows(atom_rows(led, ws.sets), ws.config.fmt, out)
        return
    rows = ledger_rows(led)
    if args.n:
        rows = [r for r in rows if r["n"] == args.n]
    _emit_rows(rows, ws.config.fmt, out, ["n", "bad", "entries", "primitive_atoms"])


def cmd_apparition(ws, args, out):
    rows = apparition_rows(ws)
    if args.figure:
        from .figures import plot_apparition

        plot_apparition(ws.apparition.sieve(ws.config.sieve_bound), args.figure)
    _emit_rows(rows, ws.config.fmt, out, ["q", "n_q", "base_val"])


def cmd_indicators(ws, args, out):
    _emit_rows(indicator_rows(ws, args.lmax), ws.config.fmt, out, ["l", "j", "atom", "digits", "status"])


def cmd_ring(ws, args, out):
    ring = ws.ring
    x = arith.to_mpq(args.x)
    if args.op == "member":
        doc = ring.member_verdict(x).as_dict()
    else:
        if args.y is None:
            raise ValueError(f"ring check --op {args.op} needs two arguments")
        y = arith.to_mpq(args.y)
        doc = (ring.divides_verdict(x, y) if args.op == "divides" else ring.coprime_verdict(x, y)).as_dict()
    doc["args"] = [a for a in (args.x, args.y) if a is not None]
    _emit_doc(doc, out)


def _quads(ws, ks):
    return [ws.model.encode(int(k)) for k in ks]


def cmd_model(ws, args, out):
    model = ws.model
    op = args.model_cmd
    if op == "encode":
        q = model.encode(args.k)
        doc = {"k": args.k, "quadruple": q.as_list(), "pair": model.reduced_pair(q).as_list(),
               "nn_B": dict(sorted(model.nn_B(q).items()))}
    elif op == "decode":
        from .model import Quadruple

        q = Quadruple.from_list(args.quad)
        doc = {"quadruple": q.as_list(), "k": model.index(q)}
    elif op == "plus":
        doc = model.plus_check(*_quads(ws, args.k)).as_dict()
    elif op == "divide":
        doc = model.divide_check(*_quads(ws, args.k)).as_dict()
    elif op == "product":
        doc = model.direct_product_check(*_quads(ws, args.k)).as_dict()
    elif op == "times":
        doc = model.times_check(*_quads(ws, args.k)).as_dict()
    else:
        res = model.square_of_index(model.encode(args.k), repair=args.repair)
        doc = {"relation": "square", "k1": res.k1, "k4": res.k4, "verdict": res.k4 == res.k1**2, **res.transcript}
    _emit_doc(doc, out)


def cmd_fo(ws, args, out):
    from .firstorder import Witness

    proto = ws.protocol
    op = args.fo_cmd
    if op == "prove":
        w = proto.prove(int(args.z0), args.chal)
        doc = w.as_dict()
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(w.to_json())
        doc["verify"] = proto.verify(int(args.z0) ** 2, w.k1, args.chal, w).as_dict()
    elif op == "verify":
        with open(args.witness, encoding="utf-8") as fh:
            w = Witness.from_json(fh.read())
        doc = proto.verify(args.z, args.k1, args.chal, w).as_dict()
    elif op == "challenge":
        b = proto.challenge(args.z, args.k1)
        doc = {"z": args.z, "k1": args.k1, "b": str(b)}
        if args.exhaustive:
            doc["refutation"] = proto.refute_exhaustively(args.z, args.k1, b)
    elif op == "validate-m1":
        doc = proto.validate_m1()
    else:
        chal = [arith.to_mpq(c) for c in args.challenges.split(",")] if args.challenges else None
        doc = proto.integer_test(args.z0, chal, exhaustive=args.exhaustive)
    _emit_doc(doc, out)


def _parse_xs(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"--xs expects comma-separated integers: {exc}") from exc


def cmd_density(ws, args, out):
    from .density import decay_report

    rows = density_rows(ws, _parse_xs(args.xs))
    if args.figure:
        from .figures import plot_census

        plot_census(rows, args.figure)
    if ws.config.fmt == "json":
        _emit_doc({"rows": [r.as_dict() for r in rows], "decay": decay_report(rows)}, out)
    else:
        _emit_rows([r.as_dict() for r in rows], ws.config.fmt, out)


def cmd_hasse(ws, args, out):
    rep = hasse_rows(ws)
    if ws.config.fmt == "json":
        _emit_doc(rep, out)
    else:
        _emit_rows(rep["rows"], ws.config.fmt, out)


def cmd_report(ws, args, out):
    from . import figures
    from .density import decay_report

    os.makedirs(args.out, exist_ok=True)
    j = lambda name: os.path.join(args.out, name)  # noqa: E731
    written = []
    _write_csv(seq_rows(ws), j("seq.csv"), ["n", "x", "y", "den_x"])
    _write_csv(ledger_rows(ws.ledger), j("ledger.csv"))
    _write_csv(atom_rows(ws.ledger, ws.sets), j("atoms.csv"))
    _write_csv(apparition_rows(ws), j("apparition.csv"), ["q", "n_q", "base_val"])
    _write_csv(indicator_rows(ws, ws.curve.n_max), j("indicators.csv"))
    rows = density_rows(ws, _parse_xs(args.xs))
    _write_csv([r.as_dict() for r in rows], j("density.csv"))
    _write_csv(hasse_rows(ws)["rows"], j("hasse.csv"))
    written += ["seq.csv", "ledger.csv", "atoms.csv", "apparition.csv", "indicators.csv", "density.csv", "hasse.csv"]
    figures.plot_heights(ws.curve, j("heights.png"))
    figures.plot_apparition(ws.apparition.sieve(ws.config.sieve_bound), j("apparition.png"))
    figures.plot_census(rows, j("census.png"))
    written += ["heights.png", "apparition.png", "census.png"]
    _emit_doc({"out": args.out, "files": written, "decay": decay_report(rows), "m0": ws.sets.m0}, out)


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="edsmodel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("seq", parents=[common], help="multiples [n]P with factored denominators")
    p.set_defaults(func=cmd_seq)

    led = sub.add_parser("ledger", help="factor ledger").add_subparsers(dest="ledger_cmd", required=True)
    p = led.add_parser("build", parents=[common], help="build (or resume) and persist the ledger")
    p.add_argument("--upto", type=int, default=None)
    p.set_defaults(func=cmd_ledger_build)
    p = led.add_parser("show", parents=[common], help="per-index factorizations")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--atoms", action="store_true", help="list atoms with their classification")
    p.set_defaults(func=cmd_ledger_show)

    p = sub.add_parser("apparition", parents=[common], help="rank of apparition of good primes <= qmax")
    p.add_argument("--figure", default=None, help="write a PNG plot here")
    p.set_defaults(func=cmd_apparition)

    p = sub.add_parser("indicators", parents=[common], help="indicator atom of each prime power")
    p.add_argument("--lmax", type=int, default=48)
    p.set_defaults(func=cmd_indicators)

    ring = sub.add_parser("ring", help="ring queries").add_subparsers(dest="ring_cmd", required=True)
    p = ring.add_parser("check", parents=[common], help="membership, divisibility or coprimality")
    p.add_argument("--op", choices=["member", "divides", "coprime"], required=True)
    p.add_argument("x")
    p.add_argument("y", nargs="?")
    p.set_defaults(func=cmd_ring)

    model = sub.add_parser("model", help="index relations").add_subparsers(dest="model_cmd", required=True)
    p = model.add_parser("encode", parents=[common])
    p.add_argument("k", type=int)
    p = model.add_parser("decode", parents=[common])
    p.add_argument("quad", nargs=4, metavar="UVXY")
    for name, arity in (("plus", 3), ("divide", 2), ("product", 3), ("times", 3)):
        p = model.add_parser(name, parents=[common])
        p.add_argument("k", nargs=arity, type=int)
    p = model.add_parser("square", parents=[common])
    p.add_argument("k", type=int)
    p.add_argument("--repair", action="store_true", help="add the (k1+2) | (k4-4) condition")
    for p in model.choices.values():
        p.set_defaults(func=cmd_model)

    fo = sub.add_parser("fo", help="first-order protocol").add_subparsers(dest="fo_cmd", required=True)
    p = fo.add_parser("prove", parents=[common])
    p.add_argument("z0")
    p.add_argument("chal", metavar="b", help="ring element b")
    p.add_argument("--out", default=None, help="write the witness JSON here")
    p = fo.add_parser("verify", parents=[common])
    p.add_argument("z")
    p.add_argument("k1", type=int)
    p.add_argument("chal", metavar="b", help="ring element b")
    p.add_argument("--witness", required=True)
    p = fo.add_parser("challenge", parents=[common])
    p.add_argument("z")
    p.add_argument("k1", type=int)
    p.add_argument("--exhaustive", action="store_true")
    p = fo.add_parser("test", parents=[common])
    p.add_argument("z0")
    p.add_argument("--challenges", default=None, help="comma-separated challenge set (default 1,19)")
    p.add_argument("--exhaustive", action="store_true")
    fo.add_parser("validate-m1", parents=[common])
    for p in fo.choices.values():
        p.set_defaults(func=cmd_fo)

    p = sub.add_parser("density", parents=[common], help="indicator census")
    p.add_argument("--xs", default="10,100,1000,10000,100000")
    p.add_argument("--figure", default=None)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("hasse", parents=[common], help="l^j < 3p certificate")
    p.set_defaults(func=cmd_hasse)

    p = sub.add_parser("report", parents=[common], help="CSV tables and PNG figures into a directory")
    p.add_argument("--out", required=True)
    p.add_argument("--xs", default="10,100,1000,10000,100000,1000000")
    p.set_defaults(func=cmd_report)
    return parser


def run(argv=None, out=None, env=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        ws = Workspace(RunConfig.resolve(vars(args), env))
        args.func(ws, args, out)
    except ConfigError as exc:
        print(f"edsmodel: configuration error: {exc}", file=sys.stderr)
        return 2
    except (EdsModelError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"edsmodel: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
