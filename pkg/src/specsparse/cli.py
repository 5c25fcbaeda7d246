"""Command-line driver: ``specsparse <command> [options]``.

Exit status is 0 on success, 1 when the computation fails and 2 on a usage
error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import generators
from .cuts import default_decomposition_phi, exact_sparsest_cut, ideal_decomp
from .graph import DegreeContext, GraphError, WeightedGraph
from .io import read_graph, write_graph, write_text_atomic
from .partitioning import approx_cut, partition
from .spectral import DENSE_THRESHOLD, normalized_lambda2, relative_norm, sigma_approximation
from .trace import Trace
from .unweighted import ContractViolation, SparsifyConfig, unwted_sparsify
from .weighted import bounded_sparsify, sparsify, sparsify2

SCHEMA = 1


@dataclass
class RunReport:
    command: str
    input_edges: int
    output_edges: int
    sigma: float | None
    epsilon: float | None
    fail_prob: float | None
    seed: int
    mode: str
    scale_factor: float = 1.0
    runtime_ms: int = 0
    counters: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        body = {"schema": SCHEMA, **asdict(self)}
        if body["sigma"] is not None and not math.isfinite(body["sigma"]):
            body["sigma"] = "inf"
        return json.dumps(body, indent=2, sort_keys=True) + "\n"


def _sigma(G: WeightedGraph, H: WeightedGraph) -> tuple[float | None, float]:
    if G.n <= DENSE_THRESHOLD:
        rep = sigma_approximation(G, H)
        return rep.sigma, rep.rel_norm
    return None, relative_norm(G, H)


def _emit(args, report: RunReport, t0: float) -> None:
    report.runtime_ms = int(round((time.perf_counter() - t0) * 1000))
    if args.report:
        write_text_atomic(args.report, report.to_json())


def _trace_counters(tr: Trace) -> dict:
    out = {k: int(v) for k, v in sorted(tr.counters.items())}
    out.update({k: v for k, v in sorted(tr.maxima.items())})
    return out


def cmd_gen(args) -> int:
    params = {k: getattr(args, k) for k in ("n", "k", "p", "d", "rows", "cols") if getattr(args, k) is not None}
    params["bridge"] = not args.no_bridge
    G = generators.generate(args.family, params, args.seed)
    if args.weights == "random":
        G = generators.with_weights(G, args.seed)
    write_graph(G, args.output, args.format)
    print(f"wrote {args.family} graph: n={G.n} m={G.m}")
    return 0


def cmd_stats(args) -> int:
    G = read_graph(args.input, args.format)
    deg = G.unweighted_degree
    print(f"n={G.n} m={G.m}")
    print(f"total_weight={G.total_weight():.17g} min_degree={int(deg.min()) if G.n else 0} max_degree={int(deg.max(initial=0))}")
    if G.m and G.n <= DENSE_THRESHOLD:
        est = normalized_lambda2(G)
        print(f"lambda2={est.lambda2:.12g}{' (disconnected)' if est.disconnected else ''}")
    return 0


def _method(G: WeightedGraph, name: str) -> str:
    if name != "auto":
        return name
    if G.is_unweighted():
        return "unweighted"
    if G.is_integral() and float(G.w.min(initial=1)) >= 1:
        return "bounded"
    return "sparsify"


def cmd_sparsify(args) -> int:
    t0 = time.perf_counter()
    G = read_graph(args.input, args.format)
    method = _method(G, args.method)
    n_active = max(int(np.count_nonzero(G.unweighted_degree)), 1)
    density = None if args.target_edges is None else args.target_edges / n_active
    cfg = SparsifyConfig(args.eps, args.fail_prob, args.mode, density, args.phi, args.seed)
    tr = Trace()
    scale = 1.0
    extra: dict = {"method": method}
    if method == "unweighted":
        H = unwted_sparsify(G, cfg, trace=tr)
    elif method == "bounded":
        H = bounded_sparsify(G, args.eps, args.fail_prob, args.seed, config=cfg, trace=tr)
    else:
        top = float(G.w.max(initial=1.0))
        scale = 1.0 / top
        Gs = G.scaled(scale)
        stats: list = []
        if method == "sparsify":
            Hs = sparsify(Gs, args.eps, args.fail_prob, args.seed, config=cfg, trace=tr, stats=stats)
        else:
            Hs, bu = sparsify2(Gs, args.eps, args.fail_prob, args.seed, config=cfg, trace=tr, stats=stats)
            extra["max_vertex_blow_up"] = bu.max_vertex
        H = Hs.scaled(top)
        tr.count("levels", len(stats[0].levels))
        extra["sum_k_bound"] = 2 * G.n * stats[0].l
    write_graph(H, args.output, args.format)
    sigma = None
    if not args.skip_sigma:
        sigma, rel = _sigma(G, H)
        extra["rel_norm"] = rel
    report = RunReport("sparsify", G.m, H.m, sigma, args.eps, args.fail_prob, args.seed, args.mode, scale,
                       counters=_trace_counters(tr), extra=extra)
    _emit(args, report, t0)
    print(f"input_edges={G.m} output_edges={H.m}" + ("" if sigma is None else f" sigma={sigma:.6g}"))
    return 0


def _write_set(path, S) -> None:
    write_text_atomic(path, "".join(f"{int(x)}\n" for x in S))


def cmd_approx_cut(args) -> int:
    t0 = time.perf_counter()
    G = read_graph(args.input, args.format)
    tr = Trace()
    out = approx_cut(G, args.phi, args.fail_prob, args.seed, trace=tr)
    return _report_cut(args, G, out, tr, t0, "approx-cut")


def cmd_partition(args) -> int:
    t0 = time.perf_counter()
    G = read_graph(args.input, args.format)
    tr = Trace()
    out = partition(G, None, DegreeContext.of(G), args.tau, args.fail_prob, args.seed, trace=tr)
    return _report_cut(args, G, out, tr, t0, "partition")


def _report_cut(args, G, out, tr, t0, name) -> int:
    if args.output:
        _write_set(args.output, out.D)
    print(f"|D|={out.D.size} vol_fraction={out.vol_fraction:.6g} conductance={out.conductance} ({float(out.conductance):.6g})")
    extra = {"D_size": int(out.D.size), "vol_fraction": out.vol_fraction, "conductance": float(out.conductance),
             "rounds_used": out.rounds_used}
    report = RunReport(name, G.m, G.m, None, None, args.fail_prob, args.seed, "contract", counters=_trace_counters(tr), extra=extra)
    _emit(args, report, t0)
    return 0


def cmd_decompose(args) -> int:
    t0 = time.perf_counter()
    G = read_graph(args.input, args.format)
    phi = default_decomposition_phi(G) if args.phi is None else args.phi
    parts = ideal_decomp(G, None, phi)
    ctx = DegreeContext.of(G)
    for P in parts:
        print(" ".join(str(int(x)) for x in P))
    label = np.empty(G.n, dtype=np.int64)
    for j, P in enumerate(parts):
        label[P] = j
    crossing = int(np.count_nonzero(label[G.u] != label[G.v]))
    print(f"parts={len(parts)} crossing_edges={crossing} phi={phi:.6g}")
    extra = {"parts": [[int(x) for x in P] for P in parts], "crossing_edges": crossing, "phi": phi,
             "min_part_conductance": min(float(exact_sparsest_cut(G, P, ctx).conductance) for P in parts) if parts else 1.0}
    report = RunReport("decompose", G.m, G.m, None, None, None, 0, "exact", extra=extra)
    _emit(args, report, t0)
    return 0


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    G = read_graph(args.input, args.format)
    H = read_graph(args.other, args.format)
    if G.n != H.n:
        raise GraphError(f"graphs differ in size: {G.n} vs {H.n} vertices")
    sigma, rel = _sigma(G, H)
    print(f"sigma={'null' if sigma is None else format(sigma, '.12g')} rel_norm={rel:.12g}")
    report = RunReport("verify", G.m, H.m, sigma, None, None, 0, "exact", extra={"rel_norm": rel})
    _emit(args, report, t0)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="specsparse", description="Spectral sparsification of graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, output=True, output_required=False):
        p.add_argument("--format", choices=("edgelist", "matrix-market"), default=None,
                       help="file format (default: by extension, .mtx is Matrix Market)")
        p.add_argument("--report", help="write a JSON report here")
        if output:
            p.add_argument("-o", "--output", required=output_required)

    g = sub.add_parser("gen", help="generate a graph")
    g.add_argument("--family", required=True, choices=generators.FAMILIES)
    for name, typ in (("n", int), ("k", int), ("p", float), ("d", int), ("rows", int), ("cols", int)):
        g.add_argument(f"--{name}", type=typ)
    g.add_argument("--no-bridge", action="store_true", help="ring-bipartite without the cross edge")
    g.add_argument("--weights", choices=("unit", "random"), default="unit")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--format", choices=("edgelist", "matrix-market"), default=None)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("stats", help="print graph statistics")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--format", choices=("edgelist", "matrix-market"), default=None)
    s.set_defaults(func=cmd_stats)

    sp = sub.add_parser("sparsify", help="sparsify a graph")
    sp.add_argument("-i", "--input", required=True)
    common(sp, output_required=True)
    sp.add_argument("--eps", type=float, default=0.5)
    sp.add_argument("--fail-prob", type=float, default=0.1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mode", choices=("paper", "practical"), default="practical")
    sp.add_argument("--target-edges", type=float, default=None, help="practical mode: aim for about this many output edges (spread per non-isolated vertex)")
    sp.add_argument("--method", choices=("auto", "unweighted", "bounded", "sparsify", "sparsify2"), default="auto")
    sp.add_argument("--phi", type=float, default=None, help="override the cut conductance target")
    sp.add_argument("--skip-sigma", action="store_true", help="do not measure sigma")
    sp.set_defaults(func=cmd_sparsify)

    a = sub.add_parser("approx-cut", help="find a sparse balanced cut")
    a.add_argument("-i", "--input", required=True)
    common(a)
    a.add_argument("--phi", type=float, required=True)
    a.add_argument("--fail-prob", type=float, default=0.1)
    a.add_argument("--seed", type=int, default=0)
    a.set_defaults(func=cmd_approx_cut)

    pt = sub.add_parser("partition", help="one call of the sweep partitioner")
    pt.add_argument("-i", "--input", required=True)
    common(pt)
    pt.add_argument("--tau", type=float, required=True)
    pt.add_argument("--fail-prob", type=float, default=0.1)
    pt.add_argument("--seed", type=int, default=0)
    pt.set_defaults(func=cmd_partition)

    d = sub.add_parser("decompose", help="exact conductance decomposition (n <= 20)")
    d.add_argument("-i", "--input", required=True)
    common(d, output=False)
    d.add_argument("--phi", type=float, default=None)
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="measure sigma between two graphs")
    v.add_argument("-i", "--input", required=True)
    v.add_argument("-j", "--other", required=True)
    common(v, output=False)
    v.set_defaults(func=cmd_verify)
    return ap


def _check_ranges(args) -> str | None:
    for name in ("fail_prob", "phi", "tau", "eps"):
        x = getattr(args, name, None)
        if x is not None and not (0 < x < 1):
            return f"--{name.replace('_', '-')} must lie in (0, 1)"
    if getattr(args, "target_edges", None) is not None and not args.target_edges > 0:
        return "--target-edges must be positive"
    return None


def run_command(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    problem = _check_ranges(args)
    if problem:
        parser.print_usage(sys.stderr)
        print(f"specsparse: error: {problem}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (GraphError, ContractViolation, ValueError, OSError) as exc:
        print(f"specsparse {args.command}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_command())
