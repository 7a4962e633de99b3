"""Command-line front end.

Every subcommand reads its inputs, calls one library entry point and prints
JSON, a plain-text table, or DOT.  Errors map to exit codes: 2 for
malformed input, 3 for violated preconditions, 4 for size-bound refusals.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import curve, hilbert, strata, zrep
from . import exactlin as el
from .errors import ConfigurationError, ContractViolation, LinkedChainsError, ParseError, SizeBoundError

EXIT_OK, EXIT_PARSE, EXIT_CONTRACT, EXIT_SIZE = 0, 2, 3, 4


def _read_json(source: str | None, what: str = "--input"):
    if source is None:
        raise ParseError(f"{what} is required")
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith(("{", "[")):
        text = source
    else:
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read {source}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {what}: {exc}") from exc


def _field(args):
    return el.field_from_name(args.field) if args.field else None


def _rep(args) -> zrep.ZRep:
    return zrep.from_dict(_read_json(args.input), _field(args))


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"{what} must be comma-separated integers") from exc


def _arrow(text: str) -> tuple[str, int]:
    kind, _, idx = text.partition(":")
    if kind not in (strata.UP, strata.DOWN) or not idx.lstrip("-").isdigit():
        raise ParseError("--arrow must look like up:0 or down:1")
    return kind, int(idx)


# --- rendering ------------------------------------------------------------


def _cell(x) -> str:
    if isinstance(x, bool) or x is None:
        return str(x).lower() if x is not None else "-"
    if isinstance(x, (list, tuple)):
        return "(" + ",".join(_cell(y) for y in x) + ")"
    if isinstance(x, dict):
        return x.get("label") or json.dumps(x, sort_keys=True)
    return str(x)


def render_table(rows: list[dict]) -> str:
    if not rows:
        return "(no rows)\n"
    cols = list(rows[0])
    cells = [[_cell(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[k]) for row in cells)) for k, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def emit(payload, fmt: str, rows: list[dict] | None = None, dot: str | None = None) -> str:
    if fmt == "dot":
        if dot is None:
            raise ContractViolation("this subcommand has no DOT output")
        return dot
    if fmt == "table":
        return render_table(rows if rows is not None else [payload])
    return json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n"


# --- subcommands ----------------------------------------------------------


def cmd_classify(args) -> str:
    v = _rep(args)
    r, anchor, dualized = zrep.anchored_type(v)
    out = {"type_vector": list(r.entries), "anchor": anchor, "dualized": dualized}
    if args.simple_basis:
        sb = zrep.simple_basis(v)
        out["simple_basis"] = {
            "strategy": sb.strategy,
            "changes": {str(i): m.dump() for i, m in sorted(sb.changes.items())},
        }
    return emit(out, args.format)


def cmd_strata(args) -> str:
    rows = strata.stratification_report(_rep(args), args.q, args.max_cells)
    flat = [{**row, "profile": row["profile"]["label"], "cell": None if row["cell"] is None else row["cell"]["dimension"]} for row in rows]
    return emit({"strata": rows}, args.format, flat)


def cmd_components(args) -> str:
    v = _rep(args)
    poset = strata.component_poset(v)
    nodes = [{"profile": p.label, "kind": poset.kinds[p]} for p in poset.nodes]
    payload = {
        "components": [p.label for p in poset.nodes if poset.kinds[p] == "component"],
        "nodes": nodes,
        "edges": [[a.label, b.label] for a, b in poset.edges],
    }
    return emit(payload, args.format, nodes, strata.poset_to_dot(poset))


def cmd_hilbert(args) -> str:
    box = _ints(args.box, "--box")
    if args.input:
        rows = hilbert.hilbert_table(_rep(args), box, pair_mode=args.pair_mode)
    elif args.r:
        rows = hilbert.hilbert_report(_ints(args.r, "--r"), box, args.pair_mode)
    else:
        raise ParseError("hilbert needs --r or --input")
    return emit({"rows": rows}, args.format, rows)


def cmd_oracle(args) -> str:
    v = _rep(args)
    points = strata.oracle_points(v, args.q, args.max_cells)
    groups = strata.group_by_profile(points)
    rows = [{"profile": p.label, "count": len(ws)} for p, ws in sorted(groups.items(), key=lambda kv: kv[0].flat)]
    payload = {
        "q": args.q,
        "total": len(points),
        "classes": rows,
        "points": [{"line": zrep.line_to_dict(el.PrimeField(args.q), w), "profile": p.label} for w, p in points],
    }
    return emit(payload, args.format, rows)


def cmd_lift(args) -> str:
    s = hilbert.make_smoothing(_ints(args.r, "--r"))
    rng = random.Random(args.seed)
    if args.line:
        lines = [zrep.line_from_dict(el.Q, _read_json(args.line, "--line"))]
    else:
        lines = [w for w, p in strata.rational_oracle_points(s.special, args.q, args.max_cells) if p.is_exact]
    rows = []
    for w in lines:
        lifted = hilbert.lift_subrep(s, w)
        rep = hilbert.lift_report(s, lifted)
        rep["random_points_ok"] = hilbert.check_lift_at_random_points(s, lifted, rng)
        rep["special"] = zrep.line_to_dict(el.Q, w)["vectors"]
        rows.append(rep)
    summary = [{"special": r["special"], "constant_in_t": r["constant_in_t"], "random_points_ok": r["random_points_ok"]} for r in rows]
    return emit({"lifts": rows, "count": len(rows)}, args.format, summary)


def cmd_deform(args) -> str:
    v = _rep(args)
    if args.line:
        w = zrep.line_from_dict(v.field, _read_json(args.line, "--line"))
        arrows = [_arrow(args.arrow)] if args.arrow else [(k, i) for i in v.arrows for k in (strata.UP, strata.DOWN)]
        targets = [(w, a) for a in arrows]
    else:
        targets = []
        for w, p in strata.rational_oracle_points(v, args.q, args.max_cells):
            if p.is_exact:
                continue
            for i, (up, down) in enumerate(zip(p.up_bits, p.down_bits)):
                if up == 0 and down == 0:
                    targets += [(w, (strata.UP, p.lo + i)), (w, (strata.DOWN, p.lo + i))]
    rows = []
    for w, arrow in targets:
        try:
            fam = strata.deformation_witness(v, w, arrow)
        except ContractViolation as exc:
            if args.line and args.arrow:
                raise
            rows.append({"arrow": f"{arrow[0]}:{arrow[1]}", "before": strata.profile_of(w, v).label, "after": None, "error": str(exc)})
            continue
        rows.append(
            {
                "arrow": f"{arrow[0]}:{arrow[1]}",
                "before": fam.before.label,
                "after": fam.after.label,
                "family": [[el.QT.dump(x) for x in vec] for vec in fam.family.vectors],
            }
        )
    summary = [{k: r.get(k) for k in ("arrow", "before", "after")} for r in rows]
    return emit({"witnesses": rows}, args.format, summary)


def _bundle(args) -> curve.CurveBundle:
    md = _ints(args.multidegree, "--multidegree")
    if len(md) != 2:
        raise ParseError("--multidegree takes two integers")
    twists = []
    for text in args.twist or []:
        parts = text.split(":")
        if len(parts) != 3:
            raise ParseError("--twist must look like Y:5:-1")
        twists.append(curve.Twist(parts[0], el.Q.parse(parts[1]), int(parts[2])))
    return curve.CurveBundle(tuple(md), el.Q.parse(args.gluing), tuple(twists))


def cmd_curve_rr(args) -> str:
    if args.input:
        line = curve.fixture_from_dict(_read_json(args.input))
        dual = curve.fixture_from_dict(_read_json(args.dual_input, "--dual-input"))
        rec = curve.rr_report_fixtures(line, dual, args.q)
        return emit(rec, args.format, [_rr_row(rec)])
    c = curve.NodalCurve()
    if args.sweep is not None:
        rows = []
        for dy in range(-args.sweep, args.sweep + 1):
            for dz in range(-args.sweep, args.sweep + 1):
                rec = curve.rr_report(c, curve.CurveBundle((dy, dz)), args.mode, args.q)
                rows.append({"multidegree": [dy, dz], **rec})
        return emit({"reports": rows}, args.format, [{"multidegree": r["multidegree"], **_rr_row(r)} for r in rows])
    b = _bundle(args)
    rec = curve.rr_report(c, b, args.mode, args.q)
    rec["h0_sequence"] = curve.h0_sequence(c, b)
    rec["window"] = list(curve.default_window(b))
    return emit(rec, args.format, [_rr_row(rec)])


def _rr_row(rec: dict) -> dict:
    return {k: rec[k] for k in ("frak_h0", "frak_h1", "deg", "g", "riemann_ok", "rr_ok")}


# --- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON file, '-' for stdin, or inline JSON")
    common.add_argument("--format", choices=["json", "table", "dot"], default="json")
    common.add_argument("--field", help="Q, Fp:<p> or Qt; overrides the field named in the input")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-cells", type=int, default=strata.DEFAULT_MAX_CELLS)

    parser = argparse.ArgumentParser(prog="linkedchains", description="Linked chains of vector spaces on the integer line.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="type vector of an exact (co)linked chain")
    p.add_argument("--simple-basis", action="store_true", help="also print the basis change to the canonical model")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("strata", parents=[common], help="exact profiles, cells and count polynomials")
    p.add_argument("--q", type=int, help="add finite-field point counts")
    p.set_defaults(func=cmd_strata)

    p = sub.add_parser("components", parents=[common], help="irreducible components and their meets")
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("hilbert", parents=[common], help="multigraded Hilbert function against the binomial formula")
    p.add_argument("--r", help="type vector, e.g. 1,1")
    p.add_argument("--box", required=True, help="degree bounds per factor, e.g. 2,2")
    p.add_argument("--pair-mode", choices=list(hilbert.PAIR_MODES), default="all")
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("oracle", parents=[common], help="enumerate line subrepresentations over F_q")
    p.add_argument("--q", type=int, default=2)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("lift", parents=[common], help="lift lines of an exact chain to its smoothing")
    p.add_argument("--r", required=True, help="type vector, e.g. 1,1")
    p.add_argument("--line", help="one line as JSON {lo, vectors}; default: every exact oracle point")
    p.add_argument("--q", type=int, default=3)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("deform", parents=[common], help="one-parameter families switching on zero arrows")
    p.add_argument("--line", help="one line as JSON {lo, vectors}; default: every non-exact oracle point")
    p.add_argument("--arrow", help="up:i or down:i")
    p.add_argument("--q", type=int, default=2)
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("curve-rr", parents=[common], help="Riemann-Roch data on two rational components or a fixture")
    p.add_argument("--multidegree", default="0,0")
    p.add_argument("--gluing", default="1")
    p.add_argument("--twist", action="append", help="component:point:multiplicity, repeatable")
    p.add_argument("--mode", choices=["construct", "oracle"], default="construct")
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--sweep", type=int, help="report every multidegree with entries bounded by this value")
    p.add_argument("--dual-input", help="fixture of the Serre dual when --input is a fixture")
    p.set_defaults(func=cmd_curve_rr)
    return parser


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
    except ParseError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except SizeBoundError as exc:
        err.write(f"refused: {exc}\n")
        return EXIT_SIZE
    except (ContractViolation, ConfigurationError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_CONTRACT
    except LinkedChainsError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_CONTRACT
    out.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
