"""Command line interface: domain, solve, search and build."""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .closing import DEFAULT_SCAN, find_closing
from .closure import DEFAULT_Q_MAX, DEFAULT_RATIONAL_TOL, classify_closure
from .compose import build, load_spec
from .curve import CurveParams, QuadOptions, admissible_domain, c2_min, solve_arc
from .catalog import hopf_project
from .errors import CertificationFailure, SpiralError
from .report import (
    ARC_HEADER,
    arc_svg,
    arc_table,
    dumps,
    point_cloud_header,
    point_cloud_rows,
    write_csv,
    write_json,
    write_svg,
)
from .verify import flag_failures, sample_parameters, verify_chart

TOOL = "spiral-minimal"


def _params_args(p, with_c2=True):
    p.add_argument("--k1", type=int, required=True, help="intrinsic dimension of the first factor")
    p.add_argument("--k2", type=int, required=True, help="intrinsic dimension of the second factor")
    p.add_argument("--C1", type=float, required=True, help="ratio of angular momenta")
    if with_c2:
        p.add_argument("--C2", type=float, help="family parameter")


def _emit(obj, out):
    text = dumps(obj)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_domain(args):
    base = CurveParams(args.k1, args.k2, args.C1)
    cmin, s_star = c2_min(base)
    out = {"k1": base.k1, "k2": base.k2, "C1": base.C1, "c2_min": cmin, "s_star": s_star}
    if args.C2 is not None:
        dom = admissible_domain(base.with_c2(args.C2))
        out.update(C2=args.C2, s_minus=dom.s_minus, s_plus=dom.s_plus)
    _emit(out, args.output)
    return 0


def cmd_solve(args):
    if args.C2 is None:
        raise SystemExit("solve: --C2 is required")
    params = CurveParams(args.k1, args.k2, args.C1, args.C2, args.branch)
    arc = solve_arc(params, QuadOptions(grid_size=args.grid))
    cert = classify_closure(arc, args.tol, args.qmax)
    payload = {
        "tool": TOOL,
        "version": __version__,
        "params": {"k1": params.k1, "k2": params.k2, "C1": params.C1, "C2": params.C2,
                   "branch": params.branch},
        "domain": {"s_minus": arc.domain.s_minus, "s_plus": arc.domain.s_plus,
                   "s_star": arc.domain.s_star, "c2_min": arc.domain.c2_min_value},
        "J1": arc.J1,
        "J2": arc.J2,
        "quadrature_error": arc.quadrature_error,
        "tau_length": arc.tau_length,
        "closure": cert.to_dict(),
    }
    for path in args.export or ():
        ext = os.path.splitext(path)[1].lower()
        if ext == ".csv":
            write_csv(path, ARC_HEADER, arc_table(arc))
        elif ext == ".json":
            table = arc_table(arc)
            write_json(path, dict(payload, grid={h: table[:, i] for i, h in enumerate(ARC_HEADER)}))
        else:
            raise SystemExit(f"solve: unsupported export format {ext!r} (use .csv or .json)")
    if args.plot:
        write_svg(args.plot, arc_svg(arc))
    _emit(payload, args.output)
    return 0


def cmd_search(args):
    bracket = tuple(args.bracket) if args.bracket else None
    res = find_closing(args.k1, args.k2, args.C1, args.p, args.q, bracket=bracket,
                       scan=args.scan, threads=args.threads)
    _emit(
        {
            "tool": TOOL,
            "version": __version__,
            "k1": res.k1,
            "k2": res.k2,
            "C1": res.C1,
            "target": list(res.target),
            "bracket": list(res.bracket),
            "scan": args.scan,
            "identically_satisfied": res.identically_satisfied,
            "hits": [h.to_dict() for h in res.hits],
        },
        args.output,
    )
    return 0


def run_build(spec, seed=None, threads=1, verify=False, samples=None, rational_tol=None, q_max=None):
    """Build a composition and return (report dict, built tree, certification failures)."""
    seed = spec.get("seed", 0) if seed is None else seed
    samples = samples or spec.get("samples", 50)
    tree = build(spec, threads=threads, rational_tol=rational_tol, q_max=q_max)
    root = tree.chart
    report = {
        "tool": TOOL,
        "version": __version__,
        "schema": spec["schema"],
        "seed": seed,
        "spec": spec,
        "root": {"name": root.name, "dim": root.dim, "complex_dim": root.complex_dim,
                 "flags": root.flags},
        "nodes": list(tree.records),
        "verification": None,
    }
    failures = []
    if verify:
        ver = []
        for ptr, chart in tree.nodes:
            rep = verify_chart(chart, n_samples=samples, seed=seed, threads=threads)
            bad = flag_failures(chart, rep)
            failures += [f"{ptr}: {b}" for b in bad]
            ver.append({"pointer": ptr, "name": chart.name, "flags": chart.flags,
                        "summary": rep.summary(), "failures": bad})
        report["verification"] = ver
    return report, tree, failures


def cmd_build(args):
    spec = load_spec(args.spec)
    report, tree, failures = run_build(spec, seed=args.seed, threads=args.threads, verify=args.verify,
                                       samples=args.samples, rational_tol=args.tol, q_max=args.qmax)
    chart = tree.chart
    if args.export or args.hopf:
        U = sample_parameters(chart, args.points, report["seed"])
        Z = chart(U)
        if args.export:
            write_csv(args.export, point_cloud_header(chart.dim, chart.complex_dim + 1),
                      point_cloud_rows(U, Z))
        if args.hopf:
            H = np.array([hopf_project(z).coords for z in Z])
            write_csv(args.hopf, point_cloud_header(chart.dim, chart.complex_dim + 1),
                      point_cloud_rows(U, H))
    _emit(report, args.report)
    if failures:
        raise CertificationFailure("; ".join(failures))
    return 0


def make_parser():
    ap = argparse.ArgumentParser(prog=TOOL, description="Spiral minimal products in odd-dimensional spheres.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("domain", help="critical C2 and admissible interval")
    _params_args(p)
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_domain)

    p = sub.add_parser("solve", help="solve one arc and report closing integrals")
    _params_args(p)
    p.add_argument("--branch", type=int, choices=(1, -1), default=1)
    p.add_argument("--grid", type=int, default=201, help="number of tabulated s values")
    p.add_argument("--export", action="append", metavar="FILE", help="write the arc table (.csv or .json)")
    p.add_argument("--plot", metavar="FILE.svg", help="write an SVG plot of the arguments")
    p.add_argument("--tol", type=float, default=DEFAULT_RATIONAL_TOL, help="rational detection tolerance")
    p.add_argument("--qmax", type=int, default=DEFAULT_Q_MAX, help="largest denominator tried")
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("search", help="find C2 with J1 = pi p/q")
    _params_args(p, with_c2=False)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--bracket", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--scan", type=int, default=DEFAULT_SCAN, help="scan points in the bracket")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("build", help="construct a composition file and optionally certify it")
    p.add_argument("spec", help="composition JSON file")
    p.add_argument("--verify", action="store_true", help="run the finite-difference certificates")
    p.add_argument("--report", metavar="FILE", help="write the run report here instead of stdout")
    p.add_argument("--export", metavar="FILE.csv", help="point cloud of ambient coordinates")
    p.add_argument("--hopf", metavar="FILE.csv", help="Hopf-projected representatives of the point cloud")
    p.add_argument("--points", type=int, default=500, help="point cloud size")
    p.add_argument("--samples", type=int, help="certificate samples per chart (default 50)")
    p.add_argument("--seed", type=int, help="sampling seed (default from the spec, else 0)")
    p.add_argument("--tol", type=float, help="rational detection tolerance")
    p.add_argument("--qmax", type=int, help="largest denominator tried")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_build)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpiralError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
