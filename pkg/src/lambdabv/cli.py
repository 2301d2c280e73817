"""Command-line front end.

Every subcommand writes either CSV (one table, columns listed in the help
text) or a JSON document (``--format structured``).  With CSV output the
run summary goes to ``--summary`` if given, otherwise to stderr.

Exit status: 0 on success, 1 when the mathematics refuses (degenerate
modulus, criterion not violated, failed certificate), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import asdict

import numpy as np

from . import __version__
from .counterexample import (
    DEFAULT_N_LIMIT,
    build_g,
    find_violation,
    stage_supports,
    verify_divergence_ratio,
    verify_membership_bound,
    verify_summability,
)
from .embedding import EmbeddingParams, embed_report
from .errors import DomainError, UsageError
from .extremal import ExtremalProblem, brute_force_value, solve_closed_form
from .modulus import omega_q, shift_profile
from .sequences import parse_modulus, parse_sequence
from .stepfn import StepFunction, eval_at, loads
from .variation import DEFAULT_LIMIT, variation_exact, variation_greedy

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _param_arg(parse):
    """Inline form, JSON object, or path to a JSON file."""
    def convert(text):
        if os.path.isfile(text):
            with open(text) as fh:
                text = fh.read()
        try:
            return parse(text)
        except UsageError as exc:
            raise argparse.ArgumentTypeError(str(exc))
    convert.__name__ = parse.__name__.replace("parse_", "")
    return convert


def _relaxation(text):
    try:
        a, c = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a,c got {text!r}")
    return a, c


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lambdabv", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, default_format):
        p.add_argument("--output", "-o", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "structured"), default=default_format)
        p.add_argument("--summary", help="JSON summary file when --format csv")

    seq_help = "weights: constant:c | power:alpha | explicit:v1,v2,... | JSON | file"
    mod_help = "modulus: power:beta | power-log:beta,gamma | tabulated:d:w,... | JSON | file"

    p = sub.add_parser("variation", help="p-Lambda-variation; CSV columns a,b,increment")
    p.add_argument("--function", required=True, help="step function JSON file")
    p.add_argument("--lambda", dest="seq", required=True, type=_param_arg(parse_sequence), help=seq_help)
    p.add_argument("--p", type=float, default=1.0)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="branch and bound (refused above --limit)")
    mode.add_argument("--greedy", action="store_true", help="hill-climbing lower bound")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    common(p, "structured")

    p = sub.add_parser("modulus", help="integral modulus of continuity; CSV columns gamma,distance")
    p.add_argument("--function", required=True)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--profile", action="store_true", help="emit the shift-distance profile")
    common(p, "structured")

    p = sub.add_parser("embed-check", help="criterion terms; CSV columns n,E_n,k_star")
    p.add_argument("--lambda", dest="seq", required=True, type=_param_arg(parse_sequence), help=seq_help)
    p.add_argument("--omega", dest="mod", required=True, type=_param_arg(parse_modulus), help=mod_help)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--n-max", type=int, default=2 ** 14)
    p.add_argument("--samples", type=int, default=None)
    common(p, "csv")

    p = sub.add_parser("extremal", help="closed-form maximizer; CSV columns i,x_i")
    p.add_argument("--lambda", dest="seq", required=True, type=_param_arg(parse_sequence), help=seq_help)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--budget", type=float, default=1.0)
    p.add_argument("--resolution", type=int, default=200, help="grid oracle resolution (n <= 3)")
    common(p, "structured")

    p = sub.add_parser("counterexample",
                       help="build and certify the spike counterexample; CSV one row per stage")
    p.add_argument("--lambda", dest="seq", required=True, type=_param_arg(parse_sequence), help=seq_help)
    p.add_argument("--omega", dest="mod", required=True, type=_param_arg(parse_modulus), help=mod_help)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--stages", type=int, default=3)
    p.add_argument("--n-limit", type=int, default=DEFAULT_N_LIMIT)
    p.add_argument("--relax", type=_relaxation, default=(4.0, 1.0), metavar="A,C")
    p.add_argument("--g-out", help="write the constructed g as a step function file")
    common(p, "structured")
    return parser


# -- output -----------------------------------------------------------------

def write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".lambdabv-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(args, summary: dict, header, rows):
    if args.format == "structured":
        doc = dict(summary)
        doc["table"] = {"columns": list(header), "rows": [list(r) for r in rows]}
        text = json.dumps(doc, indent=2, default=_json_default) + "\n"
    else:
        text = _csv_text(header, rows)
        line = json.dumps(summary, default=_json_default)
        if args.summary:
            write_atomic(args.summary, line + "\n")
        else:
            print(line, file=sys.stderr)
    if args.output:
        write_atomic(args.output, text)
    else:
        sys.stdout.write(text)


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _read_function(path: str) -> StepFunction:
    try:
        with open(path) as fh:
            return loads(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read function file {path}: {exc.strerror}") from None


# -- subcommands --------------------------------------------------------------

def _cmd_variation(args):
    f = _read_function(args.function)
    if args.greedy:
        res = variation_greedy(f, args.seq, args.p)
    elif args.exact or len(f.breakpoints) <= args.limit:
        res = variation_exact(f, args.seq, args.p, args.limit)
    else:
        res = variation_greedy(f, args.seq, args.p)
    summary = {"value": res.value, "exact": res.exact, "norm": abs(eval_at(f, 0.0)) + res.value,
               "witness": res.witness.to_list(), "p": args.p, "lambda": args.seq.to_dict()}
    rows = [(a, b, eval_at(f, b) - eval_at(f, a)) for a, b in res.witness]
    _emit(args, summary, ("a", "b", "increment"), rows)


def _cmd_modulus(args):
    f = _read_function(args.function)
    value = omega_q(f, args.delta, args.q)
    summary = {"omega_q": value, "delta": args.delta, "q": args.q, "periodic": f.periodic}
    if args.profile:
        prof = shift_profile(f, args.delta, args.q)
        rows = list(zip(prof.gamma_breaks.tolist(), prof.distances.tolist()))
        summary["argmax_gamma"] = prof.argmax()
    else:
        rows = [(args.delta, value)]
    _emit(args, summary, ("gamma", "distance"), rows)


def _cmd_embed(args):
    params = EmbeddingParams(args.seq, args.mod, args.p, args.q)
    rep = embed_report(params, args.n_max, args.samples)
    summary = rep.summary()
    summary.update({"lambda": args.seq.to_dict(), "omega": args.mod.to_dict(), "p": args.p, "q": args.q})
    _emit(args, summary, ("n", "E_n", "k_star"), rep.rows())


def _cmd_extremal(args):
    prob = ExtremalProblem(args.seq, args.n, args.r, args.budget)
    sol = solve_closed_form(prob)
    summary = {"k_star": sol.k_star, "value": sol.value, "x": sol.x.tolist(),
               "vertex_oracle": brute_force_value(prob, mode="vertex")}
    if prob.n <= 3:
        summary["grid_oracle"] = brute_force_value(prob, args.resolution)
        summary["resolution"] = args.resolution
    _emit(args, summary, ("i", "x_i"), [(i + 1, x) for i, x in enumerate(sol.x.tolist())])


def _cmd_counterexample(args):
    params = EmbeddingParams(args.seq, args.mod, args.p, args.q)
    plan = find_violation(params, args.stages, args.n_limit, args.relax)
    g = build_g(plan, params.seq, params.p)
    if args.g_out:
        write_atomic(args.g_out, g.dumps() + "\n")
    membership = verify_membership_bound(plan, params.seq, params.p)
    norm = verify_summability(plan, params.seq, params.p)
    divergence = verify_divergence_ratio(g, plan, params, strict=False)
    supports = stage_supports(plan)
    summary = {
        "plan": plan.to_dict(),
        "supports": [[float(a), float(b)] for a, b in supports],
        "membership": [asdict(c) for c in membership],
        "norm": asdict(norm),
        "divergence": [asdict(c) for c in divergence],
        "certified": all(c.passed for c in divergence),
    }
    rows = [(st.k, st.n, st.m, st.s, st.N, st.phi, mc.value, mc.bound, dc.ratio, dc.guaranteed,
             dc.passed) for st, mc, dc in zip(plan.stages, membership, divergence)]
    _emit(args, summary, ("k", "n", "m", "s", "N", "phi", "variation", "variation_bound",
                          "ratio", "guaranteed_ratio", "passed"), rows)
    if not summary["certified"]:
        bad = next(c for c in divergence if not c.passed)
        print(f"lambdabv: stage {bad.k} ratio {bad.ratio:.6g} below {bad.guaranteed:.6g}",
              file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


COMMANDS = {
    "variation": _cmd_variation,
    "modulus": _cmd_modulus,
    "embed-check": _cmd_embed,
    "extremal": _cmd_extremal,
    "counterexample": _cmd_counterexample,
}


def dispatch(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args) or EXIT_OK
    except UsageError as exc:
        print(f"lambdabv {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"lambdabv {args.command}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main(argv=None):
    sys.exit(dispatch(argv))


if __name__ == "__main__":
    main()
