"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import textio
from .collapse import (almost_d_collapse, check_pi1_preconditions,
                       detect_crosspolytopes, greedy_d_collapse)
from .complexes import clique_complex, default_dim_cap
from .density import density_bound_audit, essential_density
from .experiments import (ExperimentConfig, InvariantViolation, run_experiment,
                          threshold_scan, torsion_search, write_result)
from .homology import betti_numbers
from .models import RngSpec, sample_flag_complex, sample_gnp, sample_linial_meshulam


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def _add_common(p: argparse.ArgumentParser, model: bool = True):
    p.add_argument("--n", type=int, required=True, help="number of vertices")
    p.add_argument("--d", type=int, default=2, help="degree of interest")
    prob = p.add_mutually_exclusive_group(required=True)
    prob.add_argument("--p", type=float, help="raw face probability")
    prob.add_argument("--c", type=float, help="p = c * n^(-1/d)")
    prob.add_argument("--alpha", type=float, help="p = n^(-alpha)")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--dim-cap", type=int, default=None)
    if model:
        p.add_argument("--model", choices=["flag", "linial_meshulam"], default="flag")


def _cfg_from(args, **overrides) -> ExperimentConfig:
    base = dict(
        n=args.n, d=args.d, model=getattr(args, "model", "flag"),
        p=args.p, c=args.c, alpha=args.alpha,
        trials=getattr(args, "trials", 1), master_seed=args.seed,
        dim_cap=args.dim_cap, workers=getattr(args, "workers", 1),
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def _read_complex_arg(path: str, dim_cap, d: int = 2):
    text = Path(path).read_text()
    first = text.lstrip().splitlines()[0] if text.strip() else ""
    if first and not first.startswith("#") and len(first.split()) == 2:
        try:
            g = textio.read_graph(text)
            return clique_complex(g, dim_cap if dim_cap is not None else default_dim_cap(d))
        except ValueError:
            pass   # not a graph file after all; fall through to facet format
    return textio.read_complex(text, dim_cap=dim_cap)


def main(argv=None) -> int:
    parser = _Parser(prog="flaglab",
                     description="random flag complex laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("sample", parents=[], help="sample a graph or complex")
    _add_common(ps)
    ps.add_argument("--kind", choices=["graph", "complex"], default="complex")
    ps.add_argument("--out", type=str, default="-")

    pc = sub.add_parser("collapse", help="almost-d-collapse a complex or a sample")
    _add_common(pc)
    pc.add_argument("--input", type=str, help="complex/graph file instead of sampling")
    pc.add_argument("--greedy", action="store_true", help="single greedy pass only")
    pc.add_argument("--emit-trace", type=str, default=None,
                    help="write the collapse trace to this file")

    ph = sub.add_parser("homology", help="Betti numbers of a sample or file")
    _add_common(ph)
    ph.add_argument("--input", type=str)
    ph.add_argument("--field", type=str, default="2",
                    help="prime p for GF(p), or 'rationals'")

    pd = sub.add_parser("density", help="essential density of a graph")
    pd.add_argument("--input", type=str, required=True, help="graph file")
    pd.add_argument("--d", type=int, default=2)

    pn = sub.add_parser("census", help="count embedded cross-polytope copies")
    _add_common(pn)
    pn.add_argument("--input", type=str)
    pn.add_argument("--induced-only", action="store_true")

    pe = sub.add_parser("experiment", help="seeded Monte Carlo experiment")
    _add_common(pe)
    pe.add_argument("--trials", type=int, default=100)
    pe.add_argument("--workers", type=int, default=1)
    pe.add_argument("--out", type=str, required=True)
    pe.add_argument("--format", choices=["csv", "json", "both"], default="both")
    pe.add_argument("--observables", type=str,
                    default="fvector,census,collapse,betti",
                    help="comma list: fvector,census,collapse,betti,betti_gf2,cycle,torsion,cbounded,pi1")
    pe.add_argument("--timing", action="store_true",
                    help="record wall times (breaks byte-reproducibility)")

    pg = sub.add_parser("scan", help="threshold scan over a c grid")
    _add_common(pg)
    pg.add_argument("--trials", type=int, default=50)
    pg.add_argument("--workers", type=int, default=1)
    pg.add_argument("--c-grid", type=str, required=True,
                    help="comma-separated monotone c values")
    pg.add_argument("--out", type=str, default="-")

    pt = sub.add_parser("torsion", help="torsion search in H_k")
    _add_common(pt)
    pt.add_argument("--trials", type=int, default=20)
    pt.add_argument("--degree", type=int, default=1)
    pt.add_argument("--out", type=str, default="-")

    pp = sub.add_parser("check-pi1", help="fundamental-group preconditions")
    _add_common(pp)
    pp.add_argument("--input", type=str)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _emit(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _sample_complex(args):
    cfg = _cfg_from(args)
    rng = RngSpec(cfg.master_seed, 0)
    if cfg.model == "flag":
        return sample_flag_complex(cfg.n, cfg.probability, cfg.effective_dim_cap, rng)
    return sample_linial_meshulam(cfg.n, cfg.d, cfg.probability, rng)


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "sample":
        cfg = _cfg_from(args)
        if args.kind == "graph":
            g = sample_gnp(cfg.n, cfg.probability, RngSpec(cfg.master_seed, 0))
            _emit(textio.write_graph(g), args.out)
        else:
            _emit(textio.write_complex(_sample_complex(args)), args.out)
        return 0

    if cmd == "collapse":
        if args.input:
            x = _read_complex_arg(args.input, args.dim_cap, args.d)
        else:
            x = _sample_complex(args)
        if args.greedy:
            out = greedy_d_collapse(x, args.d)
        else:
            out = almost_d_collapse(x, args.d, seed=args.seed)
        print(f"status: {out.status}")
        print(f"steps: {len(out.steps)}")
        print(f"surviving copies: {len(out.surviving_crosspolytopes)}")
        for copy in out.surviving_crosspolytopes:
            print("  " + " ".join(str(v) for v in copy))
        if args.emit_trace:
            Path(args.emit_trace).write_text(textio.write_trace(out.steps))
        return 0

    if cmd == "homology":
        x = _read_complex_arg(args.input, args.dim_cap, args.d) if args.input else _sample_complex(args)
        coeff = "rationals" if args.field.lower() in ("q", "rational", "rationals") \
            else int(args.field)
        bettis = betti_numbers(x, coeff)
        print(json.dumps({"f_vector": list(x.f_vector()),
                          "betti": {str(k): v for k, v in sorted(bettis.items())},
                          "field": str(coeff)}, indent=2))
        return 0

    if cmd == "density":
        g = textio.read_graph(Path(args.input).read_text())
        rep = essential_density(g)
        print(json.dumps({
            "rho_numerator": rep.rho.numerator,
            "rho_denominator": rep.rho.denominator,
            "rho": float(rep.rho),
            "witness": list(rep.witness),
            "strictly_balanced": rep.strictly_balanced,
            "below_collapse_threshold": density_bound_audit(g, args.d),
        }, indent=2))
        return 0

    if cmd == "census":
        if args.input:
            g = textio.read_graph(Path(args.input).read_text())
        else:
            cfg = _cfg_from(args)
            g = sample_gnp(cfg.n, cfg.probability, RngSpec(cfg.master_seed, 0))
        hits = detect_crosspolytopes(g, args.d, induced_only=args.induced_only)
        print(f"copies: {len(hits)}")
        for h in hits:
            tag = "induced" if h.induced else "embedded"
            print("  " + " | ".join(f"{a},{b}" for a, b in h.pairs) + f"  [{tag}]")
        return 0

    if cmd == "experiment":
        toggles = {t.strip() for t in args.observables.split(",") if t.strip()}
        cfg = _cfg_from(
            args,
            trials=args.trials, workers=args.workers, timing=args.timing,
            fvector="fvector" in toggles,
            census="census" in toggles,
            collapse="collapse" in toggles,
            betti_rational="betti" in toggles,
            betti_gf2="betti_gf2" in toggles or "betti" in toggles,
            cycle="cycle" in toggles,
            torsion_degrees=(args.d - 1,) if "torsion" in toggles else (),
            c_bounded=(args.c if args.c is not None else 1.0) if "cbounded" in toggles else None,
            pi1="pi1" in toggles,
        )
        result = run_experiment(cfg)
        paths = write_result(result, args.out, args.format)
        print(json.dumps({"written": paths, "aggregates": result.aggregates},
                         indent=2, default=str))
        return 0

    if cmd == "scan":
        grid = [float(t) for t in args.c_grid.split(",")]
        cfg = _cfg_from(args, trials=args.trials, workers=args.workers,
                        collapse=True, census=True, betti_rational=args.d >= 2,
                        fvector=False, c=grid[0], p=None, alpha=None,
                        cycle=args.d == 1)
        res = threshold_scan(cfg, grid)
        header = ("c,frac_almost_collapsible,frac_stuck,mean_beta_d,mean_cp,"
                  "mean_beta_over_n^((d+1)/2),frac_with_cycle,annotation")
        lines = [header]
        for r in res.rows:
            lines.append(",".join([
                f"{r.c:g}",
                "" if r.frac_almost_collapsible is None else f"{r.frac_almost_collapsible:.6f}",
                "" if r.frac_stuck is None else f"{r.frac_stuck:.6f}",
                "" if r.mean_beta_d is None else f"{r.mean_beta_d:.6f}",
                "" if r.mean_cp_count is None else f"{r.mean_cp_count:.6f}",
                "" if r.mean_beta_scaled is None else f"{r.mean_beta_scaled:.8f}",
                "" if r.frac_with_cycle is None else f"{r.frac_with_cycle:.6f}",
                f"\"{r.annotation}\"" if r.annotation else "",
            ]))
        _emit("\n".join(lines) + "\n", args.out)
        return 0

    if cmd == "torsion":
        cfg = _cfg_from(args, trials=args.trials)
        rep = torsion_search(cfg, args.degree)
        hits = [(s, list(ds)) for s, ds in rep.per_trial if ds]
        _emit(json.dumps({
            "degree": rep.degree,
            "trials": cfg.trials,
            "trials_with_torsion": len(hits),
            "largest_divisor": rep.largest_divisor,
            "largest_at": rep.largest_at,
            "hits": hits,
        }, indent=2) + "\n", args.out)
        return 0

    if cmd == "check-pi1":
        if args.input:
            x = _read_complex_arg(args.input, args.dim_cap, args.d)
        else:
            x = _sample_complex(args)
        rep = check_pi1_preconditions(x)
        names = {1: "dim <= 4", 2: "crosspolytope triangles maximal",
                 3: "no tetrahedron meeting a 4-simplex at a triangle",
                 4: "3-collapsible", 5: "bounded subcomplexes aspherical",
                 6: "small subgraph density < 25/12"}
        for i in sorted(rep.conditions):
            val = rep.conditions[i]
            shown = "not evaluated" if val is None else ("holds" if val else "FAILS")
            print(f"({i}) {names[i]}: {shown}")
        return 0

    raise ValueError(f"unhandled command {cmd}")


if __name__ == "__main__":
    sys.exit(main())
