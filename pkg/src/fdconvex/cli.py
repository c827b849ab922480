"""Command-line entry point: ``fdconvex <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path

from .combinatorics import Permutation
from .hessian import SimplexPoint, hessian_fd_check
from .matrices import frac_str
from .multigraphs import Multigraph, enumerate_multigraphs
from .pipeline import FORMATS, RunConfig, emit_report, verify
from .reduction import reduced_blocks
from .repset import ORBIT_BRUTEFORCE_LIMIT, orbit_count_bruteforce, orbit_count_formula

EXIT_OK, EXIT_ERROR, EXIT_NOT_PROVEN = 0, 1, 2


def _compact(g: Multigraph) -> Multigraph:
    """Relabel onto [k] keeping the relative order of the labels."""
    n = max(g.vertices)
    order = sorted(g.vertices) + sorted(set(range(1, n + 1)) - g.vertices)
    images = [0] * n
    for new, old in enumerate(order, start=1):
        images[old - 1] = new
    return g.relabel(Permutation(tuple(images)))


def cmd_enumerate(args) -> int:
    graphs = enumerate_multigraphs(args.edges)
    if args.format == "json":
        print(json.dumps({"edges": args.edges, "count": len(graphs),
                          "multigraphs": [str(g) for g in graphs]}, indent=2))
    else:
        print(len(graphs))
        for g in graphs:
            print(g)
    return EXIT_OK


def cmd_hessian_check(args) -> int:
    rng = random.Random(args.seed)
    worst = 0.0
    for s in range(args.samples):
        x = SimplexPoint.random(args.n, rng)
        dev = hessian_fd_check(args.n, args.degree, x, h=args.step)
        worst = max(worst, dev)
        print(f"sample {s}: max deviation {dev:.3e}")
    print(f"overall max deviation {worst:.3e}")
    return EXIT_OK


def cmd_orbit_count(args) -> int:
    print(f"formula: {orbit_count_formula(args.k)}")
    try:
        print(f"brute force: {orbit_count_bruteforce(args.k, args.n)}")
    except ValueError as exc:
        print(f"brute force: skipped ({exc}; limit {ORBIT_BRUTEFORCE_LIMIT})")
    return EXIT_OK


def cmd_blocks(args) -> int:
    g = Multigraph.parse(args.multigraph)
    if g.vertices != frozenset(range(1, g.k + 1)):
        g = _compact(g)
    b = reduced_blocks(g, scaled=not args.no_scale)
    if args.format == "json":
        print(json.dumps({"multigraph": str(g), "k": b.k, "scalar": frac_str(b.scalar),
                          "B1": b.B1.to_strings(), "B2": b.B2.to_strings()}, indent=2))
    else:
        print(f"multigraph {g}")
        print(f"k = {b.k}")
        print(f"scalar = {frac_str(b.scalar)}")
        for name, M in (("B1", b.B1), ("B2", b.B2)):
            print(f"{name}:")
            for row in M.to_strings():
                print("  " + " ".join(row))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = RunConfig(
        degree=args.degree,
        to_degree=args.to,
        jobs=args.jobs,
        fmt=args.format,
        certificate_dir=Path(args.certificates) if args.certificates else None,
        scaled=not args.no_scale,
        dump_blocks=args.dump_blocks,
    )
    reports = verify(cfg)
    sys.stdout.write(emit_report(reports, cfg.fmt))
    for r in reports:
        logging.getLogger(__name__).info("d=%d finished in %.1fs", r.degree, r.wall_time)
    return EXIT_OK if all(r.verdict == "CONVEX" for r in reports) else EXIT_NOT_PROVEN


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fdconvex", description="Convexity certification for f_d via constant block matrices.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", help="multigraphs with M edges up to isomorphism")
    e.add_argument("--edges", type=int, required=True)
    e.add_argument("--format", choices=("text", "json"), default="text")
    e.set_defaults(func=cmd_enumerate)

    h = sub.add_parser("hessian-check", help="finite differences vs the analytic Hessian")
    h.add_argument("--degree", type=int, required=True)
    h.add_argument("--n", type=int, required=True)
    h.add_argument("--samples", type=int, default=5)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--step", type=float, default=1e-4)
    h.set_defaults(func=cmd_hessian_check)

    o = sub.add_parser("orbit-count", help="orbits of S_{n-k} on pairs of edges")
    o.add_argument("--k", type=int, required=True)
    o.add_argument("--n", type=int, required=True)
    o.set_defaults(func=cmd_orbit_count)

    b = sub.add_parser("blocks", help="scalar, B1 and B2 for one multigraph")
    b.add_argument("--multigraph", required=True)
    b.add_argument("--format", choices=("text", "json"), default="text")
    b.add_argument("--no-scale", action="store_true")
    b.set_defaults(func=cmd_blocks)

    v = sub.add_parser("verify", help="certify every multigraph of one or more degrees")
    v.add_argument("--degree", type=int, required=True)
    v.add_argument("--to", type=int)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--format", choices=FORMATS, default="text")
    v.add_argument("--certificates", metavar="DIR")
    v.add_argument("--dump-blocks", action="store_true")
    v.add_argument("--no-scale", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
