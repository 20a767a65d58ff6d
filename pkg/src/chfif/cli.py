"""Command-line front end.

Exit status: 0 success, 1 a computation could not be carried out (for
example a comparison whose hypotheses do not hold), 2 validation failure,
64 usage error, 65 configuration parse error.  Failures print one line,
``error: <Kind>: <message>``, on stderr.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import empirical, evaluator, insertion, io, smoothness
from .errors import ChfifError, ConfigParseError, ValidationError

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_VALIDATION = 2
EXIT_USAGE = 64
EXIT_CONFIG = 65

COMMANDS = ("construct", "evaluate", "insert", "classify", "bounds", "boxdim", "compare", "render")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p):
    p.add_argument("--config", help="JSON run configuration (default: bundled four-point sample)")
    p.add_argument("--depth", type=int, help="refinement depth (default: config value)")
    p.add_argument("--seed", type=int, help="chaos-game seed (default: config value)")


def _add_insertion(p):
    p.add_argument("--x", type=float, dest="ix", help="inserted abscissa")
    p.add_argument("--y", type=float, dest="iy", help="inserted primary ordinate")
    p.add_argument("--z", type=float, dest="iz", help="inserted hidden ordinate")


def _add_exponents(p):
    p.add_argument("--lambda", dest="lam", type=float, nargs="+",
                   help="Hoelder exponents of p_n (default: 1 for every map)")
    p.add_argument("--mu", type=float, nargs="+",
                   help="Hoelder exponents of q_n (default: 1 for every map)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chfif", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("construct", help="build the IFS and report its maps")
    _add_common(p)
    p.add_argument("--check", action="store_true", help="fail unless join-up residual < 1e-10")

    p = sub.add_parser("evaluate", help="evaluate f1, f2 at an abscissa")
    _add_common(p)
    p.add_argument("--x", type=float, required=True, dest="x")
    p.add_argument("--eval-depth", type=int, default=evaluator.DEFAULT_EVAL_DEPTH)

    p = sub.add_parser("insert", help="insert a point and rebuild the IFS")
    _add_common(p)
    _add_insertion(p)
    p.add_argument("--classify", action="store_true", help="print the insertion kind")
    p.add_argument("--tol", type=float, default=insertion.DEFAULT_KNOT_TOL)
    p.add_argument("--output", help="write the inserted function table as CSV")

    p = sub.add_parser("classify", help="smoothness indices and class")
    _add_common(p)
    _add_insertion(p)
    _add_exponents(p)

    p = sub.add_parser("bounds", help="fractal-dimension bounds")
    _add_common(p)
    _add_insertion(p)
    _add_exponents(p)

    p = sub.add_parser("boxdim", help="box-counting dimension of a component graph")
    _add_common(p)
    p.add_argument("--component", choices=("f1", "f2"), default="f1")

    p = sub.add_parser("compare", help="compare smoothness and bounds before/after insertion")
    _add_common(p)
    _add_insertion(p)
    _add_exponents(p)

    p = sub.add_parser("render", help="emit the function table as CSV or SVG")
    _add_common(p)
    _add_insertion(p)
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--component", choices=("f1", "f2"), default="f1", help="SVG component")
    p.add_argument("--chaos", type=int, metavar="COUNT",
                   help="emit COUNT chaos-game points (sorted by x) instead of the refinement")
    p.add_argument("--output", help="output path (default: stdout)")
    return parser


class _Run:
    def __init__(self, args):
        self.args = args
        self.config = io.load_config(args.config)
        self.depth = args.depth if getattr(args, "depth", None) is not None else self.config.depth
        self.seed = args.seed if getattr(args, "seed", None) is not None else self.config.seed
        self.system = self.config.build()

    def insertion(self, required=True):
        a = self.args
        given = [getattr(a, k, None) for k in ("ix", "iy", "iz")]
        if any(v is not None for v in given):
            if any(v is None for v in given):
                raise UsageError("--x, --y and --z must be given together")
            x, y, z = given
            overrides = self.config.insertion.overrides if self.config.insertion else None
            return insertion.make_spec(self.system, x, y, z, overrides)
        if self.config.insertion is not None:
            c = self.config.insertion
            return insertion.make_spec(self.system, c.x, c.y, c.z, c.overrides)
        if required:
            raise UsageError("an insertion point is required (--x/--y/--z or config 'insertion')")
        return None

    def lip(self, system, k=None):
        a = self.args
        lam = getattr(a, "lam", None)
        mu = getattr(a, "mu", None)
        base = smoothness.lipschitz_of_affine(self.system, lam, mu)
        return base if k is None else base.split(k)


def _fmt(v) -> str:
    return repr(float(v))


def _out(lines):
    sys.stdout.write("\n".join(lines) + "\n")


def cmd_construct(run: _Run) -> int:
    s = run.system
    res = s.join_up_residual()
    lines = [f"maps: {s.n_maps}", f"join-up residual: {_fmt(res)}"]
    for n in range(1, s.N + 1):
        i = n - 1
        lines.append(
            f"map {n}: L=({_fmt(s.L_coeffs[i][0])}, {_fmt(s.L_coeffs[i][1])}) "
            f"alpha={_fmt(s.params.alpha[i])} beta={_fmt(s.params.beta[i])} "
            f"gamma={_fmt(s.params.gamma[i])} "
            f"p=({_fmt(s.p[i].value_at_x0)}, {_fmt(s.p[i].value_at_xN)}) "
            f"q=({_fmt(s.q[i].value_at_x0)}, {_fmt(s.q[i].value_at_xN)})"
        )
    _out(lines)
    if run.args.check and not res < 1e-10:
        sys.stderr.write(f"error: JoinUpResidual: {res!r} >= 1e-10\n")
        return EXIT_FAILED
    return EXIT_OK


def cmd_evaluate(run: _Run) -> int:
    f1, f2, b = evaluator.evaluate_at(run.system, run.args.x, run.args.eval_depth)
    _out([f"x: {_fmt(run.args.x)}", f"f1: {_fmt(f1)}", f"f2: {_fmt(f2)}", f"error_bound: {_fmt(b)}"])
    return EXIT_OK


def cmd_insert(run: _Run) -> int:
    spec = run.insertion()
    lines = []
    if run.args.classify:
        kind = insertion.classify_insertion(run.system, spec.x_hat, spec.y_hat, spec.z_hat, run.args.tol)
        lines.append(kind.kind.value)
    new = insertion.insert(run.system, spec)
    lines += [
        f"k: {spec.k}",
        f"rho_x: {_fmt(spec.rho_x)}",
        f"maps: {new.n_maps}",
        f"join-up residual: {_fmt(new.join_up_residual())}",
        f"split L residual: {_fmt(insertion.split_L_identity_check(run.system, spec))}",
    ]
    if spec.rho_y is not None and spec.rho_z is not None:
        lines.append(
            f"split p/q residual: {_fmt(insertion.split_pq_relation_check(run.system, spec))}"
        )
    _out(lines)
    if run.args.output:
        io.emit_csv(evaluator.sample_graph(new, run.depth), run.args.output)
    return EXIT_OK


def _indices_lines(prefix, ix):
    cls = smoothness.classify_smoothness(ix)
    lines = [
        f"{prefix}Omega: {_fmt(ix.Omega)}",
        f"{prefix}Gamma: {_fmt(ix.Gamma)}",
        f"{prefix}Theta: {_fmt(ix.Theta)}",
        f"{prefix}class: {cls.kind.value} ({cls.describe()})",
    ]
    over = [n for n, v in (("Omega", ix.Omega), ("Gamma", ix.Gamma), ("Theta", ix.Theta))
            if v > 1 + smoothness.ONE_TOL]
    if over:
        lines.append(f"{prefix}note: {', '.join(over)} > 1, class hypotheses not met")
    return lines


def cmd_classify(run: _Run) -> int:
    lip = run.lip(run.system)
    pre = smoothness.compute_indices(run.system, lip)
    lines = _indices_lines("", pre)
    spec = run.insertion(required=False)
    if spec is not None:
        new = insertion.insert(run.system, spec)
        post = smoothness.compute_indices(new, lip.split(spec.k))
        lines += _indices_lines("post ", post)
        pred = smoothness.predict_hat_category(
            pre, spec.k, spec.rho_x, lip, overrides_in_use=spec.overrides is not None, strict=False
        )
        for name in ("omega", "gamma", "theta"):
            fp = getattr(pred, name)
            lines.append(
                f"predicted {name}: " + ("not covered" if fp is None else f"{fp.category.value} [{fp.case}]")
            )
    _out(lines)
    return EXIT_OK


def _bounds_lines(prefix, b):
    return [
        f"{prefix}lower: {_fmt(b.lower)} ({b.variant})",
        f"{prefix}upper: {_fmt(b.upper)}",
        f"{prefix}applicable: {'yes' if b.applicable else 'no'}"
        + (f" ({', '.join(b.reasons)} = 1)" if b.reasons else ""),
    ]


def cmd_bounds(run: _Run) -> int:
    lip = run.lip(run.system)
    pre = smoothness.dimension_bounds(run.system, smoothness.compute_indices(run.system, lip))
    lines = _bounds_lines("", pre)
    spec = run.insertion(required=False)
    if spec is not None:
        new = insertion.insert(run.system, spec)
        post = smoothness.dimension_bounds(new, smoothness.compute_indices(new, lip.split(spec.k)))
        lines += _bounds_lines("post ", post)
    _out(lines)
    return EXIT_OK


def cmd_boxdim(run: _Run) -> int:
    g = evaluator.sample_graph(run.system, run.depth)
    pts = empirical.normalize_to_unit_square(g.grid, g.component(run.args.component))
    est = empirical.box_dimension(pts)
    _out([f"points: {len(g)}", f"dimension: {_fmt(est.slope)}", f"r2: {_fmt(est.fit_r2)}"])
    return EXIT_OK


def cmd_compare(run: _Run) -> int:
    spec = run.insertion()
    lip = run.lip(run.system)
    new = insertion.insert(run.system, spec)
    pre = smoothness.compute_indices(run.system, lip)
    post = smoothness.compute_indices(new, lip.split(spec.k))
    outcome = smoothness.compare_smoothness(pre, post)
    lines = [f"smoothness: {outcome.value}"]
    bpre = smoothness.dimension_bounds(run.system, pre)
    bpost = smoothness.dimension_bounds(new, post)
    v = smoothness.compare_bounds(bpre, bpost)
    lines += [
        f"upper: {_fmt(bpre.upper)} -> {_fmt(bpost.upper)} "
        f"({'decreased' if v.upper_decreased else 'INCREASED'}, margin {_fmt(v.upper_margin)})",
        f"lower: {_fmt(bpre.lower)} -> {_fmt(bpost.lower)} "
        f"({'increased' if v.lower_increased else 'DECREASED'}, margin {_fmt(v.lower_margin)})",
    ]
    _out(lines)
    return EXIT_OK


def cmd_render(run: _Run) -> int:
    a = run.args
    if a.chaos is not None:
        pts = evaluator.chaos_game(run.system, a.chaos, run.seed)
        pts = pts[np.argsort(pts[:, 0], kind="stable")]
        pre = evaluator.SampledFunction(pts[:, 0], pts[:, 1], pts[:, 2])
    else:
        pre = evaluator.sample_graph(run.system, run.depth)
    post = None
    spec = run.insertion(required=False)
    if spec is not None and a.format == "svg":
        post = evaluator.sample_graph(insertion.insert(run.system, spec), max(run.depth - 1, 0))
    if a.format == "csv":
        text = io.format_csv(pre)
    else:
        text = io.format_svg(pre, post, a.component)
    if a.output:
        io._write(a.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


_HANDLERS = {
    "construct": cmd_construct,
    "evaluate": cmd_evaluate,
    "insert": cmd_insert,
    "classify": cmd_classify,
    "bounds": cmd_bounds,
    "boxdim": cmd_boxdim,
    "compare": cmd_compare,
    "render": cmd_render,
}


def _diag(kind: str, message: str) -> None:
    sys.stderr.write(f"error: {kind}: {' '.join(str(message).split())}\n")


def run_command(argv=None) -> int:
    """Run one CLI invocation and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(f"a command is required: {', '.join(COMMANDS)}")
        return _HANDLERS[args.command](_Run(args))
    except UsageError as exc:
        _diag("UsageError", exc)
        return EXIT_USAGE
    except ConfigParseError as exc:
        _diag("ConfigParseError", exc)
        return EXIT_CONFIG
    except ValidationError as exc:
        _diag(type(exc).__name__, exc)
        return EXIT_VALIDATION
    except ChfifError as exc:
        _diag(type(exc).__name__, exc)
        return EXIT_FAILED


def main() -> None:
    sys.exit(run_command())
