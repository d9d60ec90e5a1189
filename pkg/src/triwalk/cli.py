"""Command-line front end.

Subcommands
-----------
``solve``    compute the visit field and/or absorption map with one engine
``mc``       shorthand for ``solve --method mc``
``compare``  run several engines on one problem and report disagreement
``table1``   check the benchmark absorption table for the (7,7) lattice

Exit status: 0 on success, 2 on usage or engine errors (bad geometry, a
solver that failed to converge), 3 when ``compare`` or ``table1`` finds a
disagreement beyond tolerance.

Output formats: ``csv`` (header ``kind,p,q,value`` plus a ``stderr`` column
for Monte Carlo runs) or ``json``.  Floats are serialized with ``repr``
semantics, i.e. the shortest string that round-trips to the same double.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from contextlib import nullcontext
from dataclasses import dataclass

from .closed_form import absorption_map, solve_exact
from .lattice import LatticeSpec, Site, SourceSpec, boundary_sites
from .linear_oracle import solve_oracle
from .montecarlo import WalkConfig, simulate, zscores

__all__ = ["main"]

_METHODS = ("exact", "oracle", "mc")

# Benchmark absorption probabilities for m = n = 7, source (4, 4), as
# printed in the reference table (six decimals, no rounding indication).
_TABLE1 = (
    (Site(0, 1), 0.012247),
    (Site(0, 2), 0.035646),
    (Site(0, 3), 0.054827),
    (Site(0, 4), 0.063296),
    (Site(0, 5), 0.056686),
    (Site(0, 6), 0.039811),
    (Site(0, 7), 0.020737),
    (Site(0, 8), 0.005743),
    (Site(1, 0), 0.026040),
    (Site(2, 0), 0.013797),
    (Site(3, 0), 0.069523),
    (Site(4, 0), 0.021476),
    (Site(1, 8), 0.005743),
    (Site(2, 8), 0.040253),
    (Site(3, 8), 0.015039),
    (Site(4, 8), 0.059725),
)
_TABLE1_TOL = 1e-6


@dataclass(frozen=True)
class RunRequest:
    """One solve invocation: problem, engine, and output disposition."""

    spec: LatticeSpec
    src: SourceSpec
    method: str
    what: str
    fmt: str
    out: str | None
    walks: int
    seed: int


def _interior_order(spec: LatticeSpec) -> list[Site]:
    return [Site(p, q) for q in range(1, spec.n + 1) for p in range(1, spec.m + 1)]


def _run_engine(req: RunRequest):
    """Return (field, absorption, stderr-or-None, sum_absorption)."""
    if req.method == "mc":
        est = simulate(req.spec, req.src, WalkConfig(walks=req.walks, seed=req.seed))
        return est.visit_mean, est.absorb_freq, est.absorb_stderr, est.total_absorb_freq
    solver = solve_exact if req.method == "exact" else solve_oracle
    sol = solver(req.spec, req.src)
    amap = absorption_map(sol)
    return sol.values, amap.probs, None, amap.total


def _emit_csv(fh, req: RunRequest, field, absorption, stderr) -> None:
    import csv

    writer = csv.writer(fh, lineterminator="\n")
    header = ["kind", "p", "q", "value"]
    if stderr is not None:
        header.append("stderr")
    writer.writerow(header)
    if req.what in ("field", "all"):
        for s in _interior_order(req.spec):
            row = ["field", s.p, s.q, repr(field[s])]
            if stderr is not None:
                row.append("")
            writer.writerow(row)
    if req.what in ("absorption", "all"):
        for s in boundary_sites(req.spec):
            row = ["absorption", s.p, s.q, repr(absorption[s])]
            if stderr is not None:
                row.append(repr(stderr[s]))
            writer.writerow(row)


def _emit_json(fh, req: RunRequest, field, absorption, stderr, total) -> None:
    doc: dict = {
        "spec": {"m": req.spec.m, "n": req.spec.n},
        "source": {"a": req.src.a, "b": req.src.b},
        "method": req.method,
    }
    if req.what in ("field", "all"):
        doc["field"] = [
            {"p": s.p, "q": s.q, "value": field[s]} for s in _interior_order(req.spec)
        ]
    if req.what in ("absorption", "all"):
        entries = []
        for s in boundary_sites(req.spec):
            e = {"p": s.p, "q": s.q, "value": absorption[s]}
            if stderr is not None:
                e["stderr"] = stderr[s]
            entries.append(e)
        doc["absorption"] = entries
        doc["sum_absorption"] = total
    json.dump(doc, fh, indent=2)
    fh.write("\n")


def cmd_solve(args: argparse.Namespace, method: str | None = None) -> int:
    req = RunRequest(
        spec=LatticeSpec(args.m, args.n),
        src=SourceSpec(args.a, args.b),
        method=method or args.method,
        what=args.what,
        fmt=args.format,
        out=args.out,
        walks=args.walks,
        seed=args.seed,
    )
    field, absorption, stderr, total = _run_engine(req)
    ctx = open(req.out, "w", newline="") if req.out else nullcontext(sys.stdout)
    with ctx as fh:
        if req.fmt == "csv":
            _emit_csv(fh, req, field, absorption, stderr)
        else:
            _emit_json(fh, req, field, absorption, stderr, total)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    methods = list(dict.fromkeys(s.strip() for s in args.method.split(",") if s.strip()))
    if len(methods) < 2:
        print("error: compare needs at least two methods", file=sys.stderr)
        return 2
    for name in methods:
        if name not in _METHODS:
            print(f"error: unknown method {name!r}", file=sys.stderr)
            return 2
    deterministic = [name for name in methods if name != "mc"]
    if "mc" in methods and not deterministic:
        print("error: mc comparison needs a deterministic reference method", file=sys.stderr)
        return 2

    spec = LatticeSpec(args.m, args.n)
    src = SourceSpec(args.a, args.b)
    solutions = {}
    for name in deterministic:
        sol = (solve_exact if name == "exact" else solve_oracle)(spec, src)
        solutions[name] = (sol.values, absorption_map(sol))

    breach = False
    for left, right in itertools.combinations(deterministic, 2):
        lf, la = solutions[left]
        rf, ra = solutions[right]
        dfield = max(abs(lf[s] - rf[s]) for s in lf)
        dabs = max(abs(la.probs[s] - ra.probs[s]) for s in la.probs)
        worst = max(dfield, dabs)
        status = "ok" if worst <= args.tol else "BREACH"
        print(
            f"{left} vs {right}: max|field diff| = {dfield:.3e}, "
            f"max|absorption diff| = {dabs:.3e}  [{status}]"
        )
        breach = breach or worst > args.tol

    if "mc" in methods:
        ref = deterministic[0]
        est = simulate(spec, src, WalkConfig(walks=args.walks, seed=args.seed))
        z = zscores(est, solutions[ref][1])
        zmax = max(abs(v) for v in z.values())
        status = "ok" if zmax <= 4.0 else "BREACH"
        print(
            f"mc vs {ref}: max|z| = {zmax:.3f} over {len(z)} boundary sites "
            f"(walks={args.walks}, seed={args.seed})  [{status}]"
        )
        breach = breach or zmax > 4.0

    print("result: FAIL" if breach else "result: PASS")
    return 3 if breach else 0


def cmd_table1(args: argparse.Namespace) -> int:
    spec = LatticeSpec(7, 7)
    src = SourceSpec(4, 4)
    amap = absorption_map(solve_exact(spec, src))
    bad = 0
    for site, published in _TABLE1:
        observed = amap.probs[site]
        dev = abs(observed - published)
        flag = dev > _TABLE1_TOL
        bad += flag
        mark = "  MISMATCH" if flag else ""
        print(
            f"P({site.p},{site.q})  published={published:.6f}  "
            f"observed={observed!r}  |dev|={dev:.3e}{mark}"
        )
    print(f"{bad} of {len(_TABLE1)} entries deviate by more than {_TABLE1_TOL:g}")
    return 3 if bad else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triwalk",
        description=(
            "Visit fields and boundary-absorption maps for random walks on a "
            "finite triangular lattice with absorbing zig-zag boundaries."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_geometry(p: argparse.ArgumentParser) -> None:
        p.add_argument("--m", type=int, required=True, help="interior columns (p = 1..m)")
        p.add_argument("--n", type=int, required=True, help="interior rows (q = 1..n)")
        p.add_argument("--a", type=int, required=True, help="source column")
        p.add_argument("--b", type=int, required=True, help="source row")

    def add_output(p: argparse.ArgumentParser) -> None:
        p.add_argument("--what", choices=("field", "absorption", "all"), default="all")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="write to this file instead of stdout")

    def add_mc(p: argparse.ArgumentParser) -> None:
        p.add_argument("--walks", type=int, default=100_000)
        p.add_argument("--seed", type=int, default=0)

    p_solve = sub.add_parser("solve", help="run one engine and print its results")
    add_geometry(p_solve)
    p_solve.add_argument("--method", choices=_METHODS, default="exact")
    add_output(p_solve)
    add_mc(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_mc = sub.add_parser("mc", help="run the Monte Carlo engine (solve --method mc)")
    add_geometry(p_mc)
    add_output(p_mc)
    add_mc(p_mc)
    p_mc.set_defaults(func=lambda a: cmd_solve(a, method="mc"))

    p_cmp = sub.add_parser("compare", help="cross-check engines on one problem")
    add_geometry(p_cmp)
    p_cmp.add_argument(
        "--method",
        default="exact,oracle",
        help="comma-separated engine list (default: exact,oracle)",
    )
    p_cmp.add_argument(
        "--tol",
        type=float,
        default=1e-9,
        help="absolute tolerance for deterministic engine pairs",
    )
    add_mc(p_cmp)
    p_cmp.set_defaults(func=cmd_compare)

    p_t1 = sub.add_parser(
        "table1", help="compare the (7,7) source-(4,4) absorption map to the benchmark table"
    )
    p_t1.set_defaults(func=cmd_table1)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
