"""Command-line surface binding the library into reproducible runs.

Every subcommand prints a human-readable answer to stdout and, with
``--report FILE``, writes one machine-readable JSON document describing
the run (sorted keys, two-space indent).  Reports are byte-identical
across runs with the same inputs and seed: timing fields are null unless
``--timings`` is passed, since wall time is inherently volatile.

Exit codes: 0 an answer was produced, 1 a contract or validation
failure, 2 an I/O, parse, or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .graph_core import Graph, graph_to_lines, read_graph
from .instances import (
    gen_mcc_reduction,
    gen_planted,
    gen_random,
    gen_sat_reduction,
    read_cnf,
)
from .occ_discovery import find_reducible_occ
from .occ_model import (
    OCC,
    CertificateError,
    OccViolation,
    TightOCC,
    TightVerdict,
    occ_from_lines,
    occ_to_lines,
    read_occ,
    validate_occ,
    validate_tight_occ,
)
from .occ_reduction import parse_gr, reduce_occ, sidecar_to_lines
from .oct_solvers import BOT, OctBudgetExceeded, oct_brute, oct_compress, oct_exact
from .tight_extraction import (
    extract_tight_occ,
    read_tricoloring,
    run_pipeline,
    tricoloring_from_lines,
)


class InputError(Exception):
    """I/O or parse failure; mapped to exit code 2."""


def _loaded(kind: str, path: str, reader):
    try:
        return reader(path)
    except OSError as e:
        raise InputError(f"cannot read {kind} {path!r}: {e}") from e
    except ValueError as e:
        raise InputError(f"cannot parse {kind} {path!r}: {e}") from e


def _load_graph(path: str) -> Graph:
    return _loaded("graph", path, read_graph)


def _checked_occ(g: Graph, parts) -> OCC:
    res = validate_occ(g, parts)
    if isinstance(res, OccViolation):
        raise ValueError(f"invalid occ: {res}")
    return res


def _load_hint(path: str, g: Graph):
    """A hint file is either an occ block or a tricoloring; sniff by the
    leading record."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read hint {path!r}: {e}") from e
    lines = text.splitlines()
    is_occ = any(ln.split("#", 1)[0].strip().startswith("occ")
                 for ln in lines)
    try:
        if is_occ:
            parts, _ = occ_from_lines(lines)
        else:
            chi = tricoloring_from_lines(lines)
    except ValueError as e:
        raise InputError(f"cannot parse hint {path!r}: {e}") from e
    return _checked_occ(g, parts) if is_occ else chi


def _write_report(path: str | None, doc) -> None:
    if path is None:
        return
    try:
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as e:
        raise InputError(f"cannot write report {path!r}: {e}") from e


def _write_text(path: str, lines: list[str]) -> None:
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as e:
        raise InputError(f"cannot write {path!r}: {e}") from e


# --- subcommands --------------------------------------------------------------

def cmd_oct(args) -> int:
    g = _load_graph(args.graph)
    t0 = time.perf_counter()
    if args.method == "brute":
        try:
            sol = oct_brute(g, ub=args.k)
        except OctBudgetExceeded:
            sol = None
    elif args.k is None:
        sol = oct_exact(g)
    else:
        res = oct_compress(g, args.k)
        sol = None if res is BOT else res
    dt = time.perf_counter() - t0
    if sol is None:
        print(f"no transversal of size <= {args.k}")
        result = {"size": None, "solution": None, "budget": args.k}
    else:
        print(f"oct {sol.size}")
        print("solution:", " ".join(str(v) for v in sorted(sol.vertices)))
        result = {"size": sol.size, "solution": sorted(sol.vertices),
                  "budget": args.k}
    result["wall_time_s"] = dt if args.timings else None
    _write_report(args.report, {
        "command": "oct", "instance": args.graph,
        "parameters": {"k": args.k, "method": args.method},
        "result": result,
    })
    return 0


def cmd_find_occ(args) -> int:
    g = _load_graph(args.graph)
    cfg = _loaded("threshold spec", args.gr, parse_gr)
    t0 = time.perf_counter()
    occ = find_reducible_occ(g, args.k, cfg)
    dt = time.perf_counter() - t0
    if occ is None:
        print("none")
        result = {"found": False}
    else:
        print("\n".join(occ_to_lines(occ)))
        result = {"found": True, "part_b": sorted(occ.part_b),
                  "part_c": sorted(occ.part_c), "part_r": sorted(occ.part_r)}
    result["wall_time_s"] = dt if args.timings else None
    _write_report(args.report, {
        "command": "find-occ", "instance": args.graph,
        "parameters": {"k": args.k, "gr": args.gr},
        "result": result,
    })
    return 0


def cmd_reduce(args) -> int:
    g = _load_graph(args.graph)
    parts, _ = _loaded("occ", args.occ, read_occ)
    occ = _checked_occ(g, parts)
    out = reduce_occ(g, occ)
    graph_lines = [f"# reduced from {args.graph}"] + graph_to_lines(out.reduced)
    sidecar = sidecar_to_lines(out)
    if args.output:
        _write_text(args.output + ".gr", graph_lines)
        _write_text(args.output + ".map", sidecar or ["# no replacement paths"])
        print(f"wrote {args.output}.gr and {args.output}.map "
              f"(n {g.n} -> {out.reduced.n})")
    else:
        print("\n".join(graph_lines))
        print()
        print("\n".join(sidecar or ["# no replacement paths"]))
    _write_report(args.report, {
        "command": "reduce", "instance": args.graph,
        "parameters": {"occ": args.occ},
        "result": {"order_before": g.n, "order_after": out.reduced.n,
                   "b_star": sorted(out.b_star),
                   "replacement_paths": len(out.replacement_paths)},
    })
    return 0


def cmd_extract(args) -> int:
    g = _load_graph(args.graph)
    chi = _loaded("coloring", args.coloring, read_tricoloring)
    t = extract_tight_occ(g, args.z, chi)
    if t is None:
        print("none")
        result = {"found": False}
    else:
        print("\n".join(occ_to_lines(t)))
        result = {"found": True, "width": t.occ.width,
                  "part_b": sorted(t.occ.part_b),
                  "part_c": sorted(t.occ.part_c)}
    _write_report(args.report, {
        "command": "extract", "instance": args.graph,
        "parameters": {"z": args.z, "coloring": args.coloring},
        "result": result,
    })
    return 0


def cmd_pipeline(args) -> int:
    g = _load_graph(args.graph)
    cfg = _loaded("threshold spec", args.gr, parse_gr)
    hint = _load_hint(args.hint, g) if args.hint else None
    res = run_pipeline(g, args.k, args.z, cfg, hint=hint, seed=args.seed,
                       max_colorings=args.max_colorings, jobs=args.jobs)
    if res.selected is not None:
        print("selected:", " ".join(str(v) for v in sorted(res.selected)))
    elif res.conclusive:
        print("none")
    else:
        print("inconclusive: coloring budget exhausted")
    _write_report(args.report, {
        "command": "pipeline", "instance": args.graph,
        "parameters": {"k": args.k, "z": args.z, "gr": args.gr,
                       "seed": args.seed, "jobs": args.jobs,
                       "hint": args.hint,
                       "max_colorings": args.max_colorings},
        "result": {"selected": sorted(res.selected)
                   if res.selected is not None else None,
                   "width": res.width,
                   "reduction_iterations": res.reduction_iterations,
                   "colorings_tried": res.colorings_tried,
                   "reduced_order": res.reduced_order,
                   "conclusive": res.conclusive,
                   "wall_time_s": res.wall_time_s if args.timings else None},
    })
    return 0


def cmd_validate(args) -> int:
    g = _load_graph(args.graph)
    parts, cert = _loaded("occ", args.occ, read_occ)
    res = validate_occ(g, parts)
    doc = {"command": "validate", "instance": args.graph,
           "parameters": {"occ": args.occ, "z": args.z}}
    if isinstance(res, OccViolation):
        print(f"invalid: {res}")
        doc["result"] = {"valid": False, "violation": str(res)}
        _write_report(args.report, doc)
        return 1
    if args.z is None:
        print(f"valid occ, width {res.width}")
        doc["result"] = {"valid": True, "width": res.width}
        _write_report(args.report, doc)
        return 0
    verdict = validate_tight_occ(g, TightOCC(res, args.z, cert))
    print(verdict.value)
    doc["result"] = {"valid": verdict is not TightVerdict.NOT_TIGHT,
                     "width": res.width, "verdict": verdict.name}
    _write_report(args.report, doc)
    return 0 if verdict is not TightVerdict.NOT_TIGHT else 1


def cmd_gen(args) -> int:
    if args.kind == "planted":
        rest = None
        if args.rest is not None:
            try:
                rest = (int(args.rest[0]), float(args.rest[1]))
            except ValueError:
                raise InputError(f"bad --rest arguments {args.rest!r}") from None
        g, t = gen_planted(args.k, args.z, rest_spec=rest, seed=args.seed,
                           cycle_len=args.cycle_len)
        stamp = (f"gen: planted k={args.k} z={args.z} rest={rest} "
                 f"cycle_len={args.cycle_len} seed={args.seed}")
        _write_text(args.output + ".gr", [f"# {stamp}"] + graph_to_lines(g))
        _write_text(args.output + ".occ", [f"# {stamp}"] + occ_to_lines(t))
        print(f"wrote {args.output}.gr and {args.output}.occ "
              f"(n={g.n}, m={g.m}, width {t.occ.width})")
        return 0
    if args.kind == "random":
        g = gen_random(args.n, args.p, seed=args.seed)
        stamp = f"gen: random n={args.n} p={args.p} seed={args.seed}"
        _write_text(args.output + ".gr", [f"# {stamp}"] + graph_to_lines(g))
        print(f"wrote {args.output}.gr (n={g.n}, m={g.m})")
        return 0
    if args.kind == "sat":
        num_vars, clauses = _loaded("cnf", args.cnf, read_cnf)
        g, k, triangles = gen_sat_reduction((num_vars, clauses))
        comments = [f"# gen: sat vars={num_vars} clauses={len(clauses)} "
                    f"k={k} source={args.cnf}"]
        comments += [f"# triangle: {a} {b} {c}" for a, b, c in triangles]
        _write_text(args.output + ".gr", comments + graph_to_lines(g))
        print(f"wrote {args.output}.gr (n={g.n}, m={g.m}, k={k})")
        return 0
    base_graph = _load_graph(args.graph)
    colors = _loaded("color map", args.colors, _read_colors)
    gp, kp = gen_mcc_reduction(base_graph, colors, args.k)
    stamp = f"gen: mcc k={args.k} kprime={kp} source={args.graph}"
    _write_text(args.output + ".gr", [f"# {stamp}"] + graph_to_lines(gp))
    print(f"wrote {args.output}.gr (n={gp.n}, m={gp.m}, kprime={kp})")
    return 0


def _read_colors(path: str) -> dict[int, int]:
    out: dict[int, int] = {}
    with open(path) as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {ln}: expected '<vertex> <color>'")
            out[int(parts[0])] = int(parts[1])
    return out


# exact before/after transversal sizes are only computed on instances
# small enough for the exact solver; larger rows show "?"
_BENCH_EXACT_LIMIT = 24


def _cell(x) -> str:
    return "?" if x is None else str(x)


def cmd_bench(args) -> int:
    corpus = Path(args.corpus_dir)
    if not corpus.is_dir():
        raise InputError(f"corpus directory {args.corpus_dir!r} not found")
    files = sorted(corpus.glob("*.gr"))
    if not files:
        raise InputError(f"no *.gr instances under {args.corpus_dir!r}")
    cfg = _loaded("threshold spec", args.gr, parse_gr)
    rows = []
    print(f"{'instance':<28} {'width':>5} {'oct_before':>10} "
          f"{'oct_after':>9} {'saved':>5} {'time_s':>8}")
    for f in files:
        g = _load_graph(str(f))
        hint_path = f.with_suffix(".occ")
        hint = _load_hint(str(hint_path), g) if hint_path.exists() else None
        res = run_pipeline(g, args.k, args.z, cfg, hint=hint, jobs=args.jobs)
        sel = res.selected if res.selected is not None else frozenset()
        small = g.n <= _BENCH_EXACT_LIMIT
        oct_before = oct_exact(g).size if small else None
        oct_after = oct_exact(g.without(sel)).size if small else None
        print(f"{f.name:<28} {res.width:>5} {_cell(oct_before):>10} "
              f"{_cell(oct_after):>9} {len(sel):>5} {res.wall_time_s:>8.3f}")
        rows.append({"instance": f.name, "width": res.width,
                     "oct_before": oct_before, "oct_after": oct_after,
                     "saved": len(sel),
                     "selected": sorted(sel),
                     "hinted": hint is not None,
                     "wall_time_s": res.wall_time_s
                     if args.timings else None})
    _write_report(args.report, {
        "command": "bench", "instance": args.corpus_dir,
        "parameters": {"k": args.k, "z": args.z, "gr": args.gr,
                       "jobs": args.jobs},
        "result": {"rows": rows},
    })
    return 0


# --- argument plumbing --------------------------------------------------------

def _report_flags(sp) -> None:
    sp.add_argument("--report", metavar="FILE")
    sp.add_argument("--timings", action="store_true",
                    help="include wall time in the report (off by default "
                         "so report bytes are reproducible)")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="octcuts",
        description="Find vertices that belong to a minimum odd cycle "
                    "transversal via tight cut extraction.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("oct", help="minimum odd cycle transversal")
    sp.add_argument("graph")
    sp.add_argument("--k", type=int, default=None, help="size budget")
    sp.add_argument("--method", choices=("brute", "compress"),
                    default="compress")
    _report_flags(sp)
    sp.set_defaults(func=cmd_oct)

    sp = sub.add_parser("find-occ", help="search for a reducible cut")
    sp.add_argument("graph")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--gr", default="custom:4",
                    help="threshold: 'paper' or 'custom:c0,c1,...'")
    _report_flags(sp)
    sp.set_defaults(func=cmd_find_occ)

    sp = sub.add_parser("reduce", help="shrink a graph along a supplied cut")
    sp.add_argument("graph")
    sp.add_argument("--occ", required=True, metavar="FILE")
    sp.add_argument("-o", "--output", metavar="PREFIX",
                    help="write PREFIX.gr and PREFIX.map instead of stdout")
    sp.add_argument("--report", metavar="FILE")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("extract", help="refine a coloring into a tight cut")
    sp.add_argument("graph")
    sp.add_argument("--z", type=int, required=True)
    sp.add_argument("--coloring", required=True, metavar="FILE")
    sp.add_argument("--report", metavar="FILE")
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("pipeline",
                        help="select vertices of a minimum transversal")
    sp.add_argument("graph")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--z", type=int, required=True)
    sp.add_argument("--gr", default="custom:4")
    sp.add_argument("--hint", metavar="FILE",
                    help="occ block or tricoloring steering the run")
    sp.add_argument("--jobs", type=int, default=1,
                    help="concurrent coloring trials (default 1)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-colorings", type=int, default=None,
                    help="cap the family sweep; capped runs are reported "
                         "as inconclusive")
    _report_flags(sp)
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("validate", help="check an occ (optionally tightness)")
    sp.add_argument("graph")
    sp.add_argument("--occ", required=True, metavar="FILE")
    sp.add_argument("--z", type=int, default=None,
                    help="also check tightness at this order")
    sp.add_argument("--report", metavar="FILE")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("gen", help="generate instances")
    gsub = sp.add_subparsers(dest="kind", required=True)

    gp_ = gsub.add_parser("planted", help="graph with a known tight cut")
    gp_.add_argument("--k", type=int, required=True)
    gp_.add_argument("--z", type=int, required=True)
    gp_.add_argument("--rest", nargs=2, metavar=("N", "P"),
                     help="attach an N-vertex G(N, P) rest part")
    gp_.add_argument("--cycle-len", type=int, default=3)
    gp_.add_argument("--seed", type=int, default=0)
    gp_.add_argument("-o", "--output", required=True, metavar="PREFIX")
    gp_.set_defaults(func=cmd_gen, kind="planted")

    gr_ = gsub.add_parser("random", help="Erdős-Rényi graph")
    gr_.add_argument("--n", type=int, required=True)
    gr_.add_argument("--p", type=float, required=True)
    gr_.add_argument("--seed", type=int, default=0)
    gr_.add_argument("-o", "--output", required=True, metavar="PREFIX")
    gr_.set_defaults(func=cmd_gen, kind="random")

    gs_ = gsub.add_parser("sat", help="3-CNF hardness gadget")
    gs_.add_argument("--cnf", required=True, metavar="FILE")
    gs_.add_argument("-o", "--output", required=True, metavar="PREFIX")
    gs_.set_defaults(func=cmd_gen, kind="sat")

    gm_ = gsub.add_parser("mcc", help="multicolored-clique hardness gadget")
    gm_.add_argument("--graph", required=True, metavar="FILE")
    gm_.add_argument("--colors", required=True, metavar="FILE")
    gm_.add_argument("--k", type=int, required=True)
    gm_.add_argument("-o", "--output", required=True, metavar="PREFIX")
    gm_.set_defaults(func=cmd_gen, kind="mcc")

    sp = sub.add_parser("bench", help="run the pipeline over a corpus")
    sp.add_argument("corpus_dir")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--z", type=int, required=True)
    sp.add_argument("--gr", default="custom:4")
    sp.add_argument("--jobs", type=int, default=1)
    _report_flags(sp)
    sp.set_defaults(func=cmd_bench)

    return p


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, CertificateError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
