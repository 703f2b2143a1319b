"""Command line front end: ``pzf <command> --graph SPEC [options]``.

Exit codes: 0 success, 2 usage error, 3 resource cap exceeded,
4 internal assertion failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import closed_forms, exact, montecarlo, params, search
from .graph import KINDS, Graph, GraphError, build, members, to_mask
from .kernels import is_zero_forcing_set, propagation_time

SCHEMA = "pzf/1"
AUTO_MAX_STATES = 200_000
AUTO_FRONTIER = 16


class UsageError(ValueError):
    pass


def _frac(x) -> dict:
    if isinstance(x, Fraction):
        return {"exact": f"{x.numerator}/{x.denominator}", "decimal": float(x)}
    return {"exact": None, "decimal": float(x)}


def parse_alpha(text: str) -> Fraction:
    try:
        a = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad alpha {text!r}") from None
    if not 0 < a < 1:
        raise argparse.ArgumentTypeError("alpha must lie strictly between 0 and 1")
    return a


def parse_range(text: str) -> list[int]:
    """``5..12`` or ``4,6,8``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None


def _load_graph(source: str) -> Graph:
    prefix = source.partition(":")[0]
    if prefix in KINDS or prefix in ("kary", "file"):
        return build(source)
    return build("file:" + source)


def _start(args, g: Graph) -> int | None:
    if args.start is None:
        return None
    try:
        verts = [int(t) for t in args.start.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad --start {args.start!r}") from None
    if any(not 0 <= v < g.n for v in verts):
        raise UsageError(f"--start vertices must lie in 0..{g.n - 1}")
    return to_mask(verts)


def _caps(args) -> dict:
    return {"max_states": args.max_states, "frontier_cap": args.frontier_cap, "exact": not args.float}


def _engine(args, run_exact, run_mc) -> dict:
    """Dispatch on --mode; auto tries exact under tighter caps, then MC."""
    if args.mode == "exact":
        return run_exact(_caps(args))
    if args.mode == "mc":
        return run_mc()
    caps = _caps(args)
    caps["max_states"] = min(caps["max_states"], AUTO_MAX_STATES)
    caps["frontier_cap"] = min(caps["frontier_cap"], AUTO_FRONTIER)
    try:
        return run_exact(caps)
    except exact.ResourceError as exc:
        print(f"pzf: exact engine over cap ({exc.cap}); falling back to Monte Carlo", file=sys.stderr)
        return run_mc()


def _center_starts(g: Graph) -> list[int]:
    return [1 << v for v in montecarlo.start_candidates(g)]


def _mc_fields(rep: montecarlo.EstimateReport) -> dict:
    return {"engine": "mc", "mean": rep.mean, "std_error": rep.std_error, "trials": rep.trials, "seed": rep.seed}


# --------------------------------------------------------------------------
# commands


def cmd_ept(args, g: Graph) -> dict:
    z = _start(args, g)

    def run_exact(caps):
        if z is None:
            chain = exact.singleton_chain(g, **caps)
            times = exact.expected_times(chain)
            vals = [times[chain.index[1 << v]] for v in range(g.n)]
            best = min(vals)
            v = vals.index(best)
            return {"engine": "exact", "value": _frac(best), "start": [v], "states": len(chain)}
        if z == g.full:
            return {"engine": "exact", "value": _frac(Fraction(0)), "start": members(z), "states": 1}
        chain = exact.build_chain(g, z, **caps)
        return {"engine": "exact", "value": _frac(exact.ept_from_chain(chain)), "start": members(z), "states": len(chain)}

    def run_mc():
        if z is not None:
            rep = montecarlo.estimate_ept(g, z, args.trials, args.seed, args.threads)
            return {**_mc_fields(rep), "start": members(z)}
        rep, v = montecarlo.estimate_ept_graph(g, args.trials, args.seed, args.threads)
        return {**_mc_fields(rep), "start": [v]}

    return _engine(args, run_exact, run_mc)


def cmd_lround(args, g: Graph) -> dict:
    z = _start(args, g)
    ell = args.rounds

    def run_exact(caps):
        if z is None:
            val, v = exact.lround_graph(g, ell, **caps)
            return {"engine": "exact", "value": _frac(val), "start": [v], "rounds": ell}
        return {"engine": "exact", "value": _frac(exact.lround_probability(g, z, ell, **caps)),
                "start": members(z), "rounds": ell}

    def run_mc():
        cands = [z] if z is not None else _center_starts(g)
        best = None
        for c in cands:
            rep = montecarlo.estimate_lround(g, c, ell, args.trials, args.seed, args.threads)
            if best is None or rep.mean > best[0].mean:
                best = (rep, c)
        return {**_mc_fields(best[0]), "start": members(best[1]), "rounds": ell}

    return _engine(args, run_exact, run_mc)


def cmd_confidence(args, g: Graph) -> dict:
    z = _start(args, g)
    alpha = args.alpha

    def run_exact(caps):
        if z is None:
            t, v = exact.confidence_time_graph(g, alpha, **caps)
            return {"engine": "exact", "value": t, "start": [v], "alpha": str(alpha)}
        return {"engine": "exact", "value": exact.confidence_time(g, z, alpha, **caps),
                "start": members(z), "alpha": str(alpha)}

    def run_mc():
        cands = [z] if z is not None else _center_starts(g)
        best = None
        for c in cands:
            t = montecarlo.estimate_confidence_time(g, c, alpha, args.trials, args.seed, args.threads)
            if best is None or t < best[0]:
                best = (t, c)
        return {"engine": "mc", "value": best[0], "start": members(best[1]), "alpha": str(alpha),
                "trials": args.trials, "seed": args.seed}

    return _engine(args, run_exact, run_mc)


def _throttle_record(res: params.ThrottleResult) -> dict:
    return {"engine": "exact", "value": _frac(Fraction(res.value)), "witness": res.witness_vertices,
            "time": _frac(Fraction(res.time)), "search": res.mode}


def cmd_throttle(args, g: Graph) -> dict:
    return _throttle_record(params.th_pzf_graph(g, args.search, args.cap, **_caps(args)))


def cmd_throttle_alpha(args, g: Graph) -> dict:
    rec = _throttle_record(params.th_alpha(g, args.alpha, args.search, args.cap, **_caps(args)))
    rec["alpha"] = str(args.alpha)
    return rec


def cmd_kangyi(args, g: Graph) -> dict:
    z = _start(args, g)
    if z is None:
        raise UsageError("kangyi needs --start")
    res = params.kang_yi_probability(g, z, **_caps(args))
    return {"engine": "exact", "k0": res.k0, "value": _frac(res.probability), "start": members(z)}


def cmd_pt(args, g: Graph) -> dict:
    z = _start(args, g)
    if z is None:
        raise UsageError("pt needs --start")
    t = propagation_time(g, z, args.rule)
    return {"rule": args.rule, "value": t, "start": members(z), "zero_forcing_set": is_zero_forcing_set(g, z)}


def cmd_zfnumber(args, g: Graph) -> dict:
    size, w = params.zero_forcing_number(g, args.cap)
    return {"value": size, "witness": members(w)}


def cmd_gen(args, g: Graph) -> dict:
    return {"n": g.n, "m": g.edge_count, "edges": [list(e) for e in g.edges()]}


def _sampler(args):
    if not args.sample_sizes:
        return None
    return search.GnpSampler(tuple(args.sample_sizes), args.sample_count, args.p, args.seed)


def cmd_scan_monotone(args) -> dict:
    rep = search.scan_edge_monotonicity(args.max_n, _sampler(args), args.min_n)
    return rep.to_dict()


def cmd_scan_kangyi(args) -> dict:
    rep = search.scan_kangyi_monotonicity(args.max_n, _sampler(args), args.min_n)
    return rep.to_dict()


def cmd_probe_radius(args) -> dict:
    rows = search.radius_ratio_probe(args.families.split(";"), args.sizes, args.trials, args.seed)
    return {"rows": rows}


def cmd_closed_form(args) -> dict:
    fam, n = args.family, args.n
    rec = {"family": fam, "n": n}
    if args.quantity == "ept":
        rec["value"] = _frac(getattr(closed_forms, f"ept_{fam}")(n))
    elif args.quantity == "lround":
        rec["value"] = _frac(getattr(closed_forms, f"lround_{fam}")(n, args.rounds))
    elif args.quantity == "confidence":
        rec["value"] = getattr(closed_forms, f"confidence_{fam}")(n, args.alpha)
    else:
        rec["value"] = closed_forms.psd_throttle_path_cycle(n, fam)
    return rec


GRAPH_COMMANDS = {
    "ept": cmd_ept,
    "lround": cmd_lround,
    "confidence": cmd_confidence,
    "throttle": cmd_throttle,
    "throttle-alpha": cmd_throttle_alpha,
    "kangyi": cmd_kangyi,
    "pt": cmd_pt,
    "zfnumber": cmd_zfnumber,
    "gen": cmd_gen,
}
PLAIN_COMMANDS = {
    "scan-monotone": cmd_scan_monotone,
    "scan-kangyi": cmd_scan_kangyi,
    "probe-radius": cmd_probe_radius,
    "closed-form": cmd_closed_form,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=montecarlo.DEFAULT_TRIALS)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", help="write output to this file instead of stdout")

    graph_opts = argparse.ArgumentParser(add_help=False)
    graph_opts.add_argument("--graph", required=True,
                            help="generator string (cycle:8, spider:n=13,legs=4, ...) or edge-list path")
    graph_opts.add_argument("--start", help="comma-separated start vertices (default: best single vertex)")
    graph_opts.add_argument("--mode", choices=("exact", "mc", "auto"), default="auto")
    graph_opts.add_argument("--float", action="store_true", help="binary64 instead of exact rationals")
    graph_opts.add_argument("--max-states", type=int, default=exact.DEFAULT_MAX_STATES)
    graph_opts.add_argument("--frontier-cap", type=int, default=exact.DEFAULT_FRONTIER_CAP)
    graph_opts.add_argument("--cap", type=int, default=params.EXHAUSTIVE_CAP,
                            help="vertex cap for exhaustive searches")
    graph_opts.add_argument("--sweep", help="substitute {n} in --graph, e.g. n=4..12")

    p = argparse.ArgumentParser(prog="pzf", description="Probabilistic zero forcing: exact and Monte Carlo.")
    sub = p.add_subparsers(dest="command", required=True)
    parents = [common, graph_opts]
    sub.add_parser("ept", parents=parents, help="expected propagation time")
    s = sub.add_parser("lround", parents=parents, help="probability all blue after L rounds")
    s.add_argument("--rounds", "-l", type=int, required=True)
    s = sub.add_parser("confidence", parents=parents, help="alpha-confidence propagation time")
    s.add_argument("--alpha", type=parse_alpha, required=True)
    s = sub.add_parser("throttle", parents=parents, help="probabilistic throttling number")
    s.add_argument("--search", choices=("exhaustive", "heuristic"), default="exhaustive")
    s = sub.add_parser("throttle-alpha", parents=parents, help="confidence throttling number")
    s.add_argument("--alpha", type=parse_alpha, required=True)
    s.add_argument("--search", choices=("exhaustive", "heuristic"), default="exhaustive")
    sub.add_parser("kangyi", parents=parents, help="Kang-Yi P_B(G) for --start")
    s = sub.add_parser("pt", parents=parents, help="deterministic or PSD propagation time")
    s.add_argument("--rule", choices=("zf", "psd"), default="zf")
    sub.add_parser("zfnumber", parents=parents, help="zero forcing number (small n)")
    sub.add_parser("gen", parents=parents, help="emit the graph as an edge list")

    for name, helptext in (("scan-monotone", "edge-addition monotonicity scan"),
                           ("scan-kangyi", "search for P_A(G) > P_B(G) with A < B")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--max-n", type=int, default=5)
        s.add_argument("--min-n", type=int, default=2)
        s.add_argument("--sample-sizes", type=parse_range, default=None)
        s.add_argument("--sample-count", type=int, default=20)
        s.add_argument("--p", type=float, default=0.5)
    s = sub.add_parser("probe-radius", parents=[common], help="ept/rad ratio table")
    s.add_argument("--families", default=";".join(search.DEFAULT_PROBE_FAMILIES),
                   help="';'-separated generator templates with {n}")
    s.add_argument("--sizes", type=parse_range, default=list(range(5, 13)))
    s = sub.add_parser("closed-form", parents=[common], help="closed-form values for paths and cycles")
    s.add_argument("quantity", choices=("ept", "lround", "confidence", "psd-throttle"))
    s.add_argument("--family", choices=("path", "cycle"), required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--rounds", "-l", type=int, default=0)
    s.add_argument("--alpha", type=parse_alpha, default=Fraction(1, 2))
    return p


def _flatten(rec: dict) -> dict:
    out = {}
    for k, v in rec.items():
        if isinstance(v, dict):
            for kk, vv in v.items():
                out[f"{k}_{kk}"] = vv
        elif isinstance(v, list):
            out[k] = " ".join(map(str, v))
        else:
            out[k] = v
    return out


def render(records: list[dict], fmt: str, command: str) -> str:
    if fmt == "json":
        doc = {"schema": SCHEMA, "command": command}
        if len(records) == 1:
            doc.update(records[0])
        else:
            doc["results"] = records
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        rows = []
        for r in records:
            rows.extend(r["rows"] if "rows" in r else [r])
        flat = [_flatten(r) for r in rows]
        keys = []
        for r in flat:
            keys += [k for k in r if k not in keys]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
        return buf.getvalue()
    lines = []
    for r in records:
        if command == "gen" and "edges" in r:
            lines.append(f"{r['n']} {r['m']}")
            lines += [f"{u} {v}" for u, v in r["edges"]]
            continue
        parts = []
        for k, v in r.items():
            if isinstance(v, dict) and "decimal" in v:
                v = f"{v['exact']} (~{v['decimal']:.6f})" if v["exact"] else f"{v['decimal']:.6f}"
            elif isinstance(v, list):
                v = ",".join(map(str, v))
            parts.append(f"{k}={v}")
        lines.append("  ".join(parts))
    return "\n".join(lines) + "\n"


def _sweep_values(text: str) -> tuple[str, list[int]]:
    name, eq, rng = text.partition("=")
    if not eq:
        raise UsageError(f"bad --sweep {text!r}; expected e.g. n=4..12")
    return name.strip(), parse_range(rng)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in PLAIN_COMMANDS:
            records = [PLAIN_COMMANDS[args.command](args)]
        else:
            fn = GRAPH_COMMANDS[args.command]
            if args.sweep:
                name, values = _sweep_values(args.sweep)
                records = []
                for val in values:
                    source = args.graph.replace("{" + name + "}", str(val))
                    g = _load_graph(source)
                    records.append({"graph": source, "n": g.n, **fn(args, g)})
            else:
                g = _load_graph(args.graph)
                records = [{"graph": args.graph, "n": g.n, **fn(args, g)}]
    except (UsageError, GraphError, ValueError, argparse.ArgumentTypeError, FileNotFoundError) as exc:
        print(f"pzf: error: {exc}", file=sys.stderr)
        return 2
    except exact.ResourceError as exc:
        print(f"pzf: resource cap '{exc.cap}' exceeded: {exc}", file=sys.stderr)
        return 3
    except (AssertionError, montecarlo.SimulationError) as exc:
        print(f"pzf: internal error: {exc}", file=sys.stderr)
        return 4
    text = render(records, args.format, args.command)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
