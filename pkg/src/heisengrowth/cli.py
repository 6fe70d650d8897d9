"""Command-line entry point.

Every subcommand writes its artifacts into ``--outdir`` and prints a short
JSON summary on stdout.  Exit codes: 0 ok, 1 usage, 2 bad input,
3 memory budget exceeded, 4 acceptance failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from .ball import BudgetExceeded, bfs_ball, fiber_profile, geodesic
from .cc import CCMetric
from .fitting import fit_quasipolynomial, fit_recurrence, gf_from_recurrence, rational_str
from .group import GeneratingSet, GeneratingSetError, GroupElement, load_generating_set
from .planar import GeometryError, isoperimetrix
from .scans import ac_scan, bounded_difference_scan
from .shapes import DomainError
from .simplify import simplify
from .svg import Figure

SCHEMA = 1
EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_BUDGET, EXIT_ACCEPT = 0, 1, 2, 3, 4
BUDGET_ENV = "HEISENGROWTH_MEMORY_BUDGET"


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    source: str = "std"
    radius: int = 12
    memory_budget: int | None = None
    K: int = 4
    tolerance: float = 1e-9
    seed: int = 0
    outdir: Path = Path("out")
    emit_svg: bool = False

    def __post_init__(self):
        if self.radius < 0:
            raise InputError("radius must be nonnegative")
        if self.K < 1 or self.tolerance <= 0:
            raise InputError("K and tolerance must be positive")
        if self.memory_budget is not None and self.memory_budget <= 0:
            raise InputError("memory budget must be positive")

    def generating_set(self) -> GeneratingSet:
        return load_generating_set(self.source)


# output helpers -------------------------------------------------------------

def _json_default(x):
    if isinstance(x, Fraction):
        return rational_str(x)
    if isinstance(x, Path):
        return str(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"


def _write(cfg: RunConfig, name: str, text: str) -> Path:
    cfg.outdir.mkdir(parents=True, exist_ok=True)
    path = cfg.outdir / name
    path.write_text(text)
    return path


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _ball(cfg: RunConfig, S: GeneratingSet, store_pred: bool = False, radius: int | None = None):
    return bfs_ball(S, cfg.radius if radius is None else radius, memory_budget=cfg.memory_budget,
                    store_pred=store_pred)


def _element(args) -> GroupElement:
    try:
        return GroupElement(args.a, args.b, args.c2)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# subcommands -----------------------------------------------------------------

def cmd_growth(cfg, args):
    S = cfg.generating_set()
    T = _ball(cfg, S)
    rows = list(zip(range(T.radius + 1), T.sigma, T.beta))
    files = [_write(cfg, "growth.csv", _csv(["n", "sigma", "beta"], rows)),
             _write(cfg, "growth.json", dumps({"schema": SCHEMA, "generators": S.labels, "radius": T.radius,
                                               "sigma": T.sigma, "beta": T.beta}))]
    return {"radius": T.radius, "sigma_last": T.sigma[-1], "files": files}


def cmd_ccdist(cfg, args):
    S = cfg.generating_set()
    metric = CCMetric(isoperimetrix(S))
    g = _element(args)
    res = metric.cc_distance(g)
    wit = None
    if res.witness is not None:
        w = res.witness
        wit = {"i": w.i, "j": w.j, "s_minus": w.s_minus, "s": w.s, "s_plus": w.s_plus,
               "translation": list(w.translation), "sides": list(w.sides), "exponents": list(w.exponents)}
    doc = {"schema": SCHEMA, "element": [g.a, g.b, g.c2], "distance": res.distance, "kind": res.kind,
           "exact": None if res.exact is None else rational_str(res.exact), "witness": wit}
    files = [_write(cfg, "ccdist.json", dumps(doc))]
    if cfg.emit_svg:
        shadow = metric.shadow(g)
        fig = Figure().polyline(shadow)
        if res.witness is not None:
            s, (tx, ty) = res.witness.s, res.witness.translation
            fig.polygon([(s * float(x) + tx, s * float(y) + ty) for x, y in metric.iso.vertices],
                        fill="none", stroke="#7f7f7f")
        files.append(fig.save(cfg.outdir / "ccdist.svg"))
    return {"distance": res.distance, "kind": res.kind, "files": files}


def cmd_isoperimetrix(cfg, args):
    S = cfg.generating_set()
    iso = isoperimetrix(S)
    files = [_write(cfg, "isoperimetrix.json", dumps({"schema": SCHEMA, **iso.to_json()}))]
    if cfg.emit_svg:
        fig = Figure()
        fig.polygon(iso.hull.vertices, fill="none", stroke="#1f4e79")
        fig.polygon(iso.dual.vertices, fill="none", stroke="#7f7f7f")
        # the isoperimetrix, centred at the origin
        cx = sum(float(x) for x, _ in iso.vertices) / iso.k2
        cy = sum(float(y) for _, y in iso.vertices) / iso.k2
        fig.polygon([(float(x) - cx, float(y) - cy) for x, y in iso.vertices], fill="none", stroke="#b03a2e")
        files.append(fig.save(cfg.outdir / "isoperimetrix.svg"))
    return {"sides": iso.k2, "sigma": list(iso.multiplicities), "files": files}


def cmd_geodesic(cfg, args):
    S = cfg.generating_set()
    T = _ball(cfg, S, store_pred=True)
    g = _element(args)
    if g not in T:
        raise InputError(f"{g} is outside the ball of radius {T.radius}; raise --radius")
    w = geodesic(T, g)
    doc = {"schema": SCHEMA, "element": [g.a, g.b, g.c2], "length": len(w), "word": S.format_word(w)}
    return {**doc, "files": [_write(cfg, "geodesic.json", dumps(doc))]}


def cmd_simplify(cfg, args):
    S = cfg.generating_set()
    try:
        w = S.parse_word(args.word)
    except GeneratingSetError as exc:
        raise InputError(str(exc)) from None
    res = simplify(w, S)
    f = res.fit
    doc = {"schema": SCHEMA, "input": S.format_word(w), "output": S.format_word(res.word),
           "delta_c2": res.delta2, "ledger": [{"phase": p, "length": n, "c2": c} for p, n, c in res.log],
           "shape": {"i": f.shape.i, "j": f.shape.j, "b": list(f.shape.b),
                     "c": [S.format_word(c) for c in f.shape.c], "s_minus": f.sminus, "s": f.s,
                     "s_plus": f.splus, "K": f.K}}
    return {"output": doc["output"], "delta_c2": res.delta2, "files": [_write(cfg, "simplify.json", dumps(doc))]}


def cmd_verify_shapes(cfg, args):
    from .realization import realization_check
    S = cfg.generating_set()
    T = _ball(cfg, S)
    rep = realization_check(T, cfg.K)
    files = [_write(cfg, "verify_shapes.json", dumps({"schema": SCHEMA, **rep.to_json()}))]
    if rep.uncovered:
        files.append(_write(cfg, "counterexamples.csv", _csv(["a", "b", "c2"], rep.uncovered)))
    return {"complete": rep.complete, "uncovered": len(rep.uncovered), "files": files}


def _read_column(path: str, column: str) -> list[int]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        return [int(r[column]) for r in rows]
    except (OSError, KeyError, ValueError) as exc:
        raise InputError(f"cannot read column {column!r} from {path}: {exc}") from None


def cmd_fit(cfg, args):
    seq = _read_column(args.csv, args.column)
    doc: dict = {"schema": SCHEMA, "terms": len(seq), "column": args.column}
    rec = fit_recurrence(seq, args.max_order)
    doc["recurrence"] = None if rec is None else {
        "order": rec.order, "threshold": rec.threshold, "coefficients": [rational_str(c) for c in rec.coeffs]}
    if rec is not None:
        gf = gf_from_recurrence(seq, rec)
        doc["generating_function"] = {"numerator": list(gf.numerator), "denominator": list(gf.denominator)}
    else:
        doc["generating_function"] = None
    qp = fit_quasipolynomial(seq, max_degree=args.max_degree)
    doc["quasipolynomial"] = None if qp is None else {
        "period": qp.period, "degree": qp.degree, "threshold": qp.threshold,
        "coefficients": [[rational_str(c) for c in row] for row in qp.coeffs]}
    files = [_write(cfg, "fit.json", dumps(doc))]
    return {"recurrence_order": rec.order if rec else None, "period": qp.period if qp else None, "files": files}


def cmd_count_family(cfg, args):
    from .families import count_family, load_family
    try:
        spec = load_family(args.family)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot load family {args.family!r}: {exc}") from None
    rows = [(n, count_family(spec.family, n, spec.weight)) for n in range(args.n_min, args.n_max + 1)]
    files = [_write(cfg, "counts.csv", _csv(["n", "count"], rows))]
    return {"family": spec.name, "terms": len(rows), "files": files}


def cmd_bounded_diff(cfg, args):
    S = cfg.generating_set()
    scan = bounded_difference_scan(_ball(cfg, S), CCMetric(isoperimetrix(S)))
    rows = [(n, f"{d:.12f}", f"{m:.12f}") for n, (d, m) in enumerate(zip(scan.per_shell, scan.running_max))]
    files = [_write(cfg, "bounded_diff.csv", _csv(["n", "max_diff", "running_max"], rows))]
    return {"sup": max(scan.per_shell), "files": files}


def cmd_ac_scan(cfg, args):
    S = cfg.generating_set()
    T = _ball(cfg, S)
    lo = args.n_min
    hi = args.n_max if args.n_max is not None else T.radius - args.k
    if not 1 <= lo <= hi <= T.radius - args.k:
        raise InputError(f"radii must satisfy 1 <= n_min <= n_max <= radius - k = {T.radius - args.k}")
    rep = ac_scan(T, k=args.k, radii=range(lo, hi + 1), exhaustive_upto=args.exhaustive_upto, seed=cfg.seed)
    rows = [(n, rep.maxima[n], rep.pairs[n], int(rep.exhaustive[n])) for n in sorted(rep.maxima)]
    files = [_write(cfg, "ac_scan.csv", _csv(["n", "max_connect", "pairs", "exhaustive"], rows))]
    return {"max": max(rep.maxima.values()), "files": files}


def cmd_fiber(cfg, args):
    S = cfg.generating_set()
    try:
        prof = fiber_profile(_ball(cfg, S), args.a, args.b)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    doc = {"schema": SCHEMA, "base": list(prof.base), "n0": prof.n0, "W_c2": prof.W,
           "w_c2": {str(n): v for n, v in prof.w.items()}}
    return {"n0": prof.n0, "W_c2": prof.W, "files": [_write(cfg, "fiber.json", dumps(doc))]}


def cmd_accept(cfg, args):
    from .acceptance import AcceptanceConfig, format_line, run_all
    acfg = AcceptanceConfig(seed=args.seed if args.seed is not None else AcceptanceConfig.seed)
    results = run_all(acfg, only=args.only, echo=lambda s: print(s, file=sys.stderr))
    doc = {"schema": SCHEMA, "results": [{k: v for k, v in asdict(r).items() if k != "data"} for r in results]}
    files = [_write(cfg, "acceptance.json", dumps(doc)),
             _write(cfg, "acceptance.txt", "".join(format_line(r) + "\n" for r in results))]
    failed = [r.number for r in results if not r.passed]
    return {"passed": len(results) - len(failed), "failed": failed, "files": files}


# argument parsing ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--preset", default=None, help="std, std3, hex or abAB")
    src.add_argument("--gens", default=None, help="generating-set file (JSON or text)")
    common.add_argument("--radius", type=int, default=None)
    common.add_argument("--memory-budget", type=int, default=None, help=f"bytes; env {BUDGET_ENV}")
    common.add_argument("--K", type=int, default=4, dest="K")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--outdir", type=Path, default=Path("out"))
    common.add_argument("--svg", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="heisengrowth", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, default_radius=12):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn, default_radius=default_radius)
        return sp

    add("growth", cmd_growth, "sphere and ball sizes by exact BFS", 20)
    for name, fn, h in (("ccdist", cmd_ccdist, "CC distance of an element"),
                        ("geodesic", cmd_geodesic, "one geodesic word for an element")):
        sp = add(name, fn, h)
        for coord in ("a", "b", "c2"):
            sp.add_argument(coord, type=int)
    add("isoperimetrix", cmd_isoperimetrix, "hull, dual and isoperimetrix")
    add("simplify", cmd_simplify, "simplify a word toward a simple shape").add_argument(
        "--word", required=True, help="space-separated generator labels")
    add("verify-shapes", cmd_verify_shapes, "shape/pattern realization over a ball", 10)
    sp = add("fit", cmd_fit, "recurrence, quasipolynomial and generating function from a CSV")
    sp.add_argument("--csv", required=True)
    sp.add_argument("--column", default="sigma")
    sp.add_argument("--max-order", type=int, default=16)
    sp.add_argument("--max-degree", type=int, default=4)
    sp = add("count-family", cmd_count_family, "lattice-point counts of a polyhedral family")
    sp.add_argument("--family", required=True, help="JSON file or shipped family name")
    sp.add_argument("--n-min", type=int, default=0)
    sp.add_argument("--n-max", type=int, default=30)
    add("bounded-diff", cmd_bounded_diff, "per-shell word vs CC distance", 20)
    sp = add("ac-scan", cmd_ac_scan, "almost-convexity connecting lengths", 22)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--n-min", type=int, default=1)
    sp.add_argument("--n-max", type=int, default=None)
    sp.add_argument("--exhaustive-upto", type=int, default=15)
    sp = add("fiber", cmd_fiber, "heights over a planar point")
    sp.add_argument("a", type=int)
    sp.add_argument("b", type=int)
    sp = add("accept", cmd_accept, "run the acceptance suite")
    sp.add_argument("--only", type=int, nargs="*", default=None, help="criterion numbers")
    return p


def config_from_args(args) -> RunConfig:
    budget = args.memory_budget
    if budget is None and os.environ.get(BUDGET_ENV):
        try:
            budget = int(os.environ[BUDGET_ENV])
        except ValueError:
            raise InputError(f"{BUDGET_ENV} must be an integer number of bytes") from None
    return RunConfig(source=args.gens or args.preset or "std",
                     radius=args.default_radius if args.radius is None else args.radius,
                     memory_budget=budget, K=args.K, tolerance=args.tol,
                     seed=0 if args.seed is None else args.seed, outdir=args.outdir, emit_svg=args.svg)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        summary = args.fn(cfg, args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, GeneratingSetError, GeometryError, DomainError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(dumps({"command": args.command, **summary}), end="")
    if args.command == "accept" and summary["failed"]:
        return EXIT_ACCEPT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
