"""Command-line front end.

Polygon input is either a generator spec (``cp2 1``, ``hirzebruch 1 3/2``,
``p1xp1 1 2``, ``twopoint 1 1``, ``file path``), a bare path, or the polygon
text format on standard input.  Exit status: 0 success, 1 domain error,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import families as fam
from .invariants import (
    INVARIANT_CSV_COLUMNS, action_report, futaki_vector, futaki_vector_per_edge,
    invariant_csv_values, topology,
)
from .measures import PolygonMeasures, measures
from .polygon import (
    DelzantError, MomentPolygon, blow_up, delzant_defects, fmt, gen_cp2,
    gen_hirzebruch, gen_p1xp1, gen_two_point_blowup, read_polygon, to_rational,
    write_polygon,
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# spec parsing


def _rational_arg(token: str) -> Fraction:
    try:
        return to_rational(token)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return Fraction(token)  # decimal forms such as 0.5
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"malformed rational {token!r}") from None


def _int_arg(token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise UsageError(f"expected an integer, got {token!r}") from None


_ARITY = {"cp2": (1,), "hirzebruch": (1, 2), "p1xp1": (2,), "twopoint": (0, 2),
          "symtwopoint": (0,), "file": (1,), "chop": None}


def parse_generator_spec(text: str | Sequence[str]):
    """Turn a generator spec into a :class:`MomentPolygon` or :class:`FamilySpec`.

    ``hirzebruch <k>``, ``twopoint`` and ``symtwopoint`` without parameter
    values, and ``chop <path> <vertex>:<param> ...``, name families.
    """
    tokens = text.split() if isinstance(text, str) else list(text)
    if not tokens:
        raise UsageError("empty generator spec")
    name, args = tokens[0].lower(), tokens[1:]
    if name not in _ARITY:
        raise UsageError(f"unknown generator {tokens[0]!r}")
    arity = _ARITY[name]
    if arity is not None and len(args) not in arity:
        raise UsageError(f"generator {name} takes {' or '.join(map(str, arity))} argument(s)")
    if name == "cp2":
        return gen_cp2(_rational_arg(args[0]))
    if name == "p1xp1":
        return gen_p1xp1(_rational_arg(args[0]), _rational_arg(args[1]))
    if name == "hirzebruch":
        k = _int_arg(args[0])
        if len(args) == 1:
            return fam.hirzebruch(k)
        return gen_hirzebruch(k, _rational_arg(args[1]))
    if name == "twopoint":
        if not args:
            return fam.two_point()
        return gen_two_point_blowup(_rational_arg(args[0]), _rational_arg(args[1]))
    if name == "symtwopoint":
        return fam.symmetric_two_point()
    if name == "file":
        return _read_file(args[0])
    if len(args) < 2:
        raise UsageError("chop takes a polygon path and at least one vertex:param pair")
    base = _read_file(args[0])
    chops = []
    for item in args[1:]:
        v, _, i = item.partition(":")
        chops.append((_int_arg(v), _int_arg(i) if i else len(chops)))
    return fam.chop_family(base, chops)


def _read_file(path: str) -> MomentPolygon:
    if path == "-":
        return read_polygon(sys.stdin.read())
    try:
        with open(path) as fh:
            return read_polygon(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _polygon_input(tokens: Sequence[str]) -> MomentPolygon:
    if not tokens or tokens == ["-"]:
        return read_polygon(sys.stdin.read())
    if len(tokens) == 1 and (os.path.exists(tokens[0]) or tokens[0].lower() not in _ARITY):
        return _read_file(tokens[0])
    obj = parse_generator_spec(tokens)
    if not isinstance(obj, MomentPolygon):
        raise UsageError(f"{' '.join(tokens)!r} names a family; give parameter values")
    return obj


def _family_input(tokens: Sequence[str]) -> fam.FamilySpec:
    obj = parse_generator_spec(tokens)
    if not isinstance(obj, fam.FamilySpec):
        raise UsageError(f"{' '.join(tokens)!r} is a single polygon, not a family")
    return obj


# ---------------------------------------------------------------------------
# rendering


def _num(value, as_float: bool) -> str:
    s = fmt(value) if isinstance(value, Fraction) else str(value)
    if as_float and isinstance(value, Fraction):
        s += f" ({float(value):.17g})"
    return s


def _pair(p, as_float) -> str:
    return f"({_num(p[0], as_float)}, {_num(p[1], as_float)})"


def _pi(value, as_float) -> str:
    s = str(value)
    if as_float:
        s += f" ({float(value):.17g})"
    return s


def _csv(header, rows, as_float=False, float_cols=()) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    extra = [f"{c}_float" for c in float_cols] if as_float else []
    w.writerow(list(header) + extra)
    for row in rows:
        cells = [fmt(v) if isinstance(v, Fraction) else str(v) for v in row]
        if as_float:
            idx = {c: i for i, c in enumerate(header)}
            cells += [f"{float(row[idx[c]]):.17g}" if row[idx[c]] != "" else "" for c in float_cols]
        w.writerow(cells)
    return buf.getvalue()


def _measure_text(m: PolygonMeasures, f: bool) -> str:
    (p11, p12), (_, p22) = m.inertia
    return "".join([
        f"area = {_num(m.area, f)}\n",
        f"perimeter = {_num(m.lambda_perimeter, f)}\n",
        f"interior_barycenter = {_pair(m.interior_barycenter, f)}\n",
        f"boundary_barycenter = {_pair(m.boundary_barycenter, f)}\n",
        f"d = {_pair(m.displacement, f)}\n",
        f"inertia = [[{_num(p11, f)}, {_num(p12, f)}], [{_num(p12, f)}, {_num(p22, f)}]]\n",
    ])


# ---------------------------------------------------------------------------
# verbs


def cmd_gen(args) -> str:
    return write_polygon(_polygon_input(args.spec))


def cmd_validate(args) -> tuple[str, int]:
    P = _polygon_input(args.spec)
    defects = delzant_defects(P)
    if not defects:
        return f"ok: convex Delzant polygon with {len(P)} vertices\n", 0
    lines = [f"vertex ({fmt(d.vertex[0])}, {fmt(d.vertex[1])}) [index {d.index}]: "
             f"corner determinant {d.det} (|det| = {abs(d.det)}, expected 1)\n" for d in defects]
    return "not Delzant\n" + "".join(lines), 1


def cmd_measure(args) -> str:
    P = _polygon_input(args.spec)
    m = measures(P)
    if args.csv:
        cols = PolygonMeasures.CSV_COLUMNS
        return _csv(cols, [m.csv_values()], args.float, cols)
    out = _measure_text(m, args.float)
    if args.oracle:
        from .oracle import mc_moment_oracle
        out += f"# Monte-Carlo check, {args.oracle} samples, seed {args.seed}\n"
        for i, j in ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)):
            est, err = mc_moment_oracle(P, i, j, args.oracle, args.seed)
            out += f"# moment x^{i} y^{j}: estimate {est:.6g} +- {err:.2g}\n"
    return out


def cmd_action(args) -> str:
    P = _polygon_input(args.spec)
    r = action_report(P)
    f = args.float
    if args.csv:
        cols = INVARIANT_CSV_COLUMNS
        return _csv(cols, [invariant_csv_values(r)], f, ("action", "calabi_coeff", "weyl_coeff"))
    lines = []
    if not r.delzant:
        lines.append("warning = polygon is not Delzant; topology and Weyl bound omitted")
    lines += [
        f"perimeter = {_num(r.chern_pairing, f)}",
        f"area = {_num(r.measures.area, f)}",
        f"c1.omega = {_num(r.chern_pairing, f)}",
        f"omega^2 = {_num(r.volume_pairing, f)}",
        f"d = {_pair(r.measures.displacement, f)}",
        f"quad_form = {_num(r.quad_form, f)}",
        f"futaki = ({_pi(r.futaki[0], f)}, {_pi(r.futaki[1], f)})",
        f"futaki_norm_sq = {_pi(r.futaki_norm_sq, f)}",
        f"action = {_num(r.virtual_action, f)}",
        f"calabi_bound = {_pi(r.calabi_bound, f)}",
    ]
    if r.topology is not None:
        lines += [
            f"euler = {r.topology.euler}",
            f"signature = {r.topology.signature}",
            f"weyl_bound = {_pi(r.weyl_bound, f)}",
            f"riemann_bound = {_pi(r.riemann_bound, f)}",
            f"ricci_bound = {_pi(r.ricci_bound, f)}",
        ]
    return "\n".join(lines) + "\n"


def cmd_futaki(args) -> str:
    P = _polygon_input(args.spec)
    closed, per_edge = futaki_vector(P), futaki_vector_per_edge(P)
    f = args.float
    if args.csv:
        rows = [[closed[0].coefficient, closed[1].coefficient,
                 per_edge[0].coefficient, per_edge[1].coefficient]]
        return _csv(("futaki1_coeff", "futaki2_coeff", "edge1_coeff", "edge2_coeff"), rows, f,
                    ("futaki1_coeff", "futaki2_coeff"))
    return (f"futaki = ({_pi(closed[0], f)}, {_pi(closed[1], f)})\n"
            f"futaki_per_edge = ({_pi(per_edge[0], f)}, {_pi(per_edge[1], f)})\n"
            f"agree = {'yes' if closed == per_edge else 'NO'}\n")


def cmd_topology(args) -> str:
    t = topology(_polygon_input(args.spec))
    if args.csv:
        return _csv(("euler", "signature", "b2"), [[t.euler, t.signature, t.b2]])
    return f"euler = {t.euler}\nsignature = {t.signature}\nb2 = {t.b2}\n"


def cmd_blowup(args) -> str:
    P = _polygon_input(args.spec)
    return write_polygon(blow_up(P, args.vertex, _rational_arg(args.eps)))


def _parse_grid(text: str, dim: int) -> list[fam.GridAxis]:
    axes = []
    for part in text.split(";"):
        fields = part.strip().split(":")
        if len(fields) != 3:
            raise UsageError(f"grid axis {part!r} must look like lo:hi:steps")
        axes.append(fam.GridAxis(_rational_arg(fields[0]), _rational_arg(fields[1]),
                                 _int_arg(fields[2])))
    if len(axes) == 1 and dim > 1:
        axes = axes * dim
    return axes


def cmd_scan(args) -> str:
    F = _family_input(args.spec)
    if not args.grid:
        raise UsageError("scan needs --grid lo:hi:steps[;lo:hi:steps]")
    rows = fam.scan(F, _parse_grid(args.grid, F.dimension))
    names = [f"p{i + 1}" for i in range(F.dimension)]
    header = names + ["action", "action_float"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(p) for p in r.params] + [fmt(r.action), f"{float(r.action):.17g}"])
    return buf.getvalue()


def cmd_minimize(args) -> tuple[str, int]:
    F = _family_input(args.spec)
    bracket = None
    if args.bracket:
        if len(args.bracket) % 2:
            raise UsageError("--bracket takes pairs lo hi")
        bracket = [(float(_rational_arg(lo)), float(_rational_arg(hi)))
                   for lo, hi in zip(args.bracket[::2], args.bracket[1::2])]
        if len(bracket) == 1 and F.dimension > 1:
            bracket = bracket * F.dimension
    init = [float(_rational_arg(v)) for v in args.init] if args.init else None
    cp = fam.minimize(F, bracket=bracket, init=init, tol=args.tol)
    witness = " ".join(fmt(w) for w in cp.witness)
    if args.csv:
        header = [f"p{i + 1}" for i in range(F.dimension)] + [
            "action_float", "witness", "action_witness", "gradient_norm", "classification"]
        row = [f"{p:.17g}" for p in cp.params] + [
            f"{cp.action_value:.17g}", witness, fmt(cp.action_value_exact_at_rational_witness),
            f"{cp.gradient_norm:.3e}", cp.classification]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerow(row)
        return buf.getvalue(), 0
    lines = [
        f"family = {F.label()}",
        "params = " + " ".join(f"{p:.17g}" for p in cp.params),
        f"action = {cp.action_value:.17g}",
        f"witness = {witness}",
        f"action_at_witness = {fmt(cp.action_value_exact_at_rational_witness)}",
        f"gradient_norm = {cp.gradient_norm:.3e}",
        f"classification = {cp.classification}",
    ]
    if cp.is_bach_flat_candidate:
        lines.append("note = critical class; Bach-flat candidate if an extremal metric exists")
    return "\n".join(lines) + "\n", 0


VERBS = {
    "validate": cmd_validate, "measure": cmd_measure, "action": cmd_action,
    "futaki": cmd_futaki, "topology": cmd_topology, "scan": cmd_scan,
    "minimize": cmd_minimize, "blowup": cmd_blowup, "gen": cmd_gen,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delzant",
        description="Exact virtual action and Futaki invariant of toric surfaces.")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    def common(p, spec_help="generator spec, polygon file, or nothing for stdin"):
        p.add_argument("spec", nargs="*", help=spec_help)
        p.add_argument("-o", "--output", help="write to this path instead of stdout")
        p.add_argument("--float", action="store_true", help="also print decimal values")
        p.add_argument("--csv", action="store_true", help="emit CSV with a header row")
        return p

    common(sub.add_parser("gen", help="write a generated polygon"))
    common(sub.add_parser("validate", help="check convexity and the Delzant condition"))
    m = common(sub.add_parser("measure", help="area, perimeter, barycenters, inertia"))
    m.add_argument("--oracle", type=int, metavar="SAMPLES",
                   help="append a Monte-Carlo cross-check of the moments")
    m.add_argument("--seed", type=int, default=0)
    common(sub.add_parser("action", help="virtual action and derived bounds"))
    common(sub.add_parser("futaki", help="Futaki vector, closed form and per edge"))
    common(sub.add_parser("topology", help="Euler number and signature"))
    b = sub.add_parser("blowup", help="chop a corner: blowup VERTEX EPS [spec]")
    b.add_argument("vertex", type=int)
    b.add_argument("eps")
    b.add_argument("spec", nargs="*")
    b.add_argument("-o", "--output")
    s = common(sub.add_parser("scan", help="tabulate the action over a family"),
               "family spec: hirzebruch K | twopoint | symtwopoint | chop PATH V:I ...")
    s.add_argument("--grid", help="lo:hi:steps per parameter, ';'-separated")
    mz = common(sub.add_parser("minimize", help="find a critical class of a family"),
                "family spec: hirzebruch K | twopoint | symtwopoint | chop PATH V:I ...")
    mz.add_argument("--tol", type=float, default=1e-10)
    mz.add_argument("--bracket", nargs="+", metavar="X",
                    help="lo hi (one pair, or one per parameter)")
    mz.add_argument("--init", nargs="+", metavar="X", help="starting point for 2-D families")
    return parser


def run(argv: Sequence[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = VERBS[args.verb](args)
    except UsageError as exc:
        print(f"delzant: usage error: {exc}", file=stderr)
        return 2
    except DelzantError as exc:
        print(f"delzant: error: {exc}", file=stderr)
        return 1
    text, code = result if isinstance(result, tuple) else (result, 0)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if code and args.verb == "validate":
        print("delzant: error: polygon is not Delzant", file=stderr)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
