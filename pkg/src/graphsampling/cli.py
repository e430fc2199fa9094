"""Command-line interface.

Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure,
4 infeasible target frequency.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import experiments as ex
from .cutoff import SamplingSet, bound_dim, exact_cutoff, omega_k_bound
from .errors import FrequencyOutOfRangeError, GraphSamplingError, NumericalError
from .generators import FAMILIES, GenSpec, default_radius, generate
from .graph import load_graph, save_graph
from .sampling import SELECTION_RULES, max_frequency_for_size, min_set_for_frequency
from .spectral import graph_spectrum

EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_INFEASIBLE = 4


class UsageError(Exception):
    pass


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _emit(payload: dict, out: Path | None, name: str) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text + "\n", encoding="utf-8")


def _load_set(args, n: int) -> SamplingSet:
    if args.set_inline is not None:
        idx = ex.parse_set_text(args.set_inline)
    elif args.set is not None:
        idx = ex.read_set(args.set)
    else:
        raise UsageError("give a sampling set with --set PATH or --set-inline '1,5,9'")
    return SamplingSet(n, idx)


def _gen_spec(args) -> GenSpec:
    family = args.family
    if family == "er-weighted":
        params = {"p": args.p}
    elif family == "geometric":
        params = {"radius": args.radius if args.radius is not None else default_radius(args.n)}
    elif family == "cycle-bridge":
        params = {"a": args.a, "b": args.b}
    else:
        params = {"p_dense": args.p_dense, "p_sparse": args.p_sparse, "eps": args.eps}
    return GenSpec(family, args.n, params, args.seed)


# ---------------------------------------------------------------------------
# Subcommands

def cmd_gen(args) -> int:
    spec = _gen_spec(args)
    g = generate(spec)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_graph(g, out)
    sidecar = {"gen_spec": spec.to_dict(), "n": g.n, "num_edges": g.num_edges}
    if g.coords is not None:
        sidecar["coords"] = [[float(x), float(y)] for x, y in g.coords]
    ex.write_json(out.with_name(out.name + ".json"), sidecar)
    return 0


def cmd_spectrum(args) -> int:
    g = load_graph(args.graph)
    s = graph_spectrum(g)
    config = {"command": "spectrum", "graph": str(args.graph)}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ex.write_csv(out / "spectrum.csv", ["index", "eigenvalue", "group_id"], ex.spectrum_rows(s), config)
    if args.eigenvectors:
        header = [f"u{i + 1}" for i in range(s.n)]
        rows = [[format(float(x), ".17g") for x in row] for row in s.eigenvectors]
        ex.write_csv(out / "eigenvectors.csv", header, rows, config)
    return 0


def cmd_cutoff(args) -> int:
    g = load_graph(args.graph)
    s = graph_spectrum(g)
    S = _load_set(args, g.n)
    report = exact_cutoff(s, S, args.rank_tol)
    payload = {
        "config": {"command": "cutoff", "graph": str(args.graph), "set": list(S.indices),
                   "rank_tol": args.rank_tol, "k_max": args.k_max},
        **report.to_dict(),
    }
    if args.k_max:
        ks = range(1, args.k_max + 1)
        omegas = [omega_k_bound(s, S, k) for k in ks]
        payload["per_k_bounds"] = [
            {"k": k, "omega_k": w, "bound_dim": bound_dim(s, S, k)} for k, w in zip(ks, omegas)
        ]
        if args.csv:
            rows = [(b["k"], format(b["omega_k"], ".17g"), b["bound_dim"],
                     "" if report.omega_c is None else format(report.omega_c, ".17g"),
                     report.pw_dim) for b in payload["per_k_bounds"]]
            ex.write_csv(Path(args.csv), ["k", "omega_k", "bound_dim", "omega_c", "exact_dim"],
                         rows, payload["config"])
    _emit(payload, Path(args.out) if args.out else None, "cutoff.json")
    return 0


def cmd_select(args) -> int:
    g = load_graph(args.graph)
    s = graph_spectrum(g)
    config = {"command": "select", "graph": str(args.graph), "mode": args.mode,
              "target": args.target, "rule": args.rule}
    if args.mode == "min-set":
        S = min_set_for_frequency(s, float(args.target), args.rule)
        report = exact_cutoff(s, S)
    else:
        try:
            m = int(args.target)
        except ValueError:
            m = 0
        if m < 1:
            raise UsageError("max-freq target must be a positive integer set size")
        S, report = max_frequency_for_size(s, m, args.rule)
    payload = {"config": config, "sampling_set": list(S.indices),
               "selection_order": list(S.order or ()), "size": len(S), **report.to_dict()}
    out = Path(args.out) if args.out else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        ex.write_set(out / "set.txt", S, config)
    _emit(payload, out, "select.json")
    return 0


def cmd_trials(args) -> int:
    cfg = ex.ExperimentConfig(
        "trials", _gen_spec(args), args.m, args.seed, scale=1.0,
        out=Path(args.out) if args.out else None, extra={"trials": args.trials},
    )
    result = ex.run_trials(cfg, workers=args.workers)
    print(json.dumps(result, indent=2, sort_keys=True))
    return 0


def _summary(result: dict) -> None:
    print(json.dumps({k: v for k, v in result.items() if k != "config"}, indent=2, sort_keys=True))


def cmd_fig1(args) -> int:
    cfg = ex.fig1_config(args.seed, args.scale, n=args.n, p=args.p, m=args.m,
                         k_max=args.k_max, out=Path(args.out))
    _summary(ex.run_fig1(cfg))
    return 0


def cmd_fig2a(args) -> int:
    cfg = ex.fig2a_config(args.seed, args.scale, n=args.n, m=args.m, radius=args.radius,
                          out=Path(args.out))
    cfg.rule = args.rule
    _summary(ex.run_fig2(cfg))
    return 0


def cmd_fig2b(args) -> int:
    cfg = ex.fig2b_config(args.seed, args.scale, n=args.n, a=args.a, b=args.b, m=args.m,
                          out=Path(args.out))
    cfg.rule = args.rule
    _summary(ex.run_fig2(cfg))
    return 0


def cmd_fig3(args) -> int:
    cfg = ex.fig3_config(args.seed, args.scale, n=args.n, m=args.m, p_dense=args.p_dense,
                         p_sparse=args.p_sparse, eps=args.eps, rule=args.rule, out=Path(args.out))
    _summary(ex.run_fig3(cfg))
    return 0


# ---------------------------------------------------------------------------
# Parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graph-sampling",
        description="Cut-off frequencies and optimal sampling sets for graph signals.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_gen_flags(p, n_default):
        p.add_argument("--family", choices=FAMILIES, default="er-weighted")
        p.add_argument("--n", type=_positive_int, default=n_default)
        p.add_argument("--p", type=float, default=0.4, help="edge probability (er-weighted)")
        p.add_argument("--radius", type=_positive_float, default=None,
                       help="distance threshold (geometric); default gives mean degree ~10")
        p.add_argument("--a", type=_positive_int, default=4, help="size of run A (cycle-bridge)")
        p.add_argument("--b", type=_positive_int, default=40, help="size of run B (cycle-bridge)")
        p.add_argument("--p-dense", type=float, default=ex.DEFAULT_P_DENSE)
        p.add_argument("--p-sparse", type=float, default=ex.DEFAULT_P_SPARSE)
        p.add_argument("--eps", type=float, default=0.0, help="augmentation weight (dense-sparse)")
        p.add_argument("--seed", type=_u64, default=0)

    p = sub.add_parser("gen", help="generate a graph file and JSON sidecar")
    add_gen_flags(p, 100)
    p.add_argument("--out", required=True, help="edge-list path; sidecar is PATH.json")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("spectrum", help="export eigenvalues and degeneracy groups")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--eigenvectors", action="store_true", help="also write the eigenvector matrix")
    p.set_defaults(func=cmd_spectrum)

    def add_set_flags(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--set", help="file with one node index per line")
        g.add_argument("--set-inline", help="comma-separated node indices, e.g. '1,5,9'")

    p = sub.add_parser("cutoff", help="exact cut-off frequency of a sampling set")
    p.add_argument("--graph", required=True)
    add_set_flags(p)
    p.add_argument("--rank-tol", type=_positive_float, default=None,
                   help="absolute singular-value threshold (default: max(shape)*eps*sigma_max)")
    p.add_argument("--k-max", type=int, default=0, help="also report Omega_k for k = 1..K")
    p.add_argument("--csv", help="write the Omega_k curve as CSV (needs --k-max)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cutoff)

    p = sub.add_parser("select", help="optimal sampling set")
    p.add_argument("--graph", required=True)
    p.add_argument("--mode", choices=("min-set", "max-freq"), required=True)
    p.add_argument("--target", required=True, help="frequency (min-set) or set size (max-freq)")
    p.add_argument("--rule", choices=SELECTION_RULES, default="max-abs")
    p.add_argument("--out")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("trials", help="random-sampling optimality trials")
    add_gen_flags(p, 50)
    p.add_argument("--m", type=_positive_int, default=10)
    p.add_argument("--trials", type=_positive_int, default=200)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_trials)

    def add_fig_common(p):
        p.add_argument("--seed", type=_u64, default=0)
        p.add_argument("--scale", type=_positive_float, default=1.0,
                       help="shrink node counts and budgets proportionally")
        p.add_argument("--out", required=True)

    p = sub.add_parser("fig1", help="exact cut-off versus the Omega_k bound")
    add_fig_common(p)
    p.add_argument("--n", type=_positive_int, default=300)
    p.add_argument("--p", type=float, default=0.4)
    p.add_argument("--m", type=_positive_int, default=30)
    p.add_argument("--k-max", type=_positive_int, default=120)
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("fig2a", help="optimal set on a random geometric graph")
    add_fig_common(p)
    p.add_argument("--n", type=_positive_int, default=200)
    p.add_argument("--m", type=_positive_int, default=25)
    p.add_argument("--radius", type=_positive_float, default=None)
    p.add_argument("--rule", choices=SELECTION_RULES, default="max-abs")
    p.set_defaults(func=cmd_fig2a)

    p = sub.add_parser("fig2b", help="optimal set on a cycle with bridged runs")
    add_fig_common(p)
    p.add_argument("--n", type=_positive_int, default=200)
    p.add_argument("--a", type=_positive_int, default=4)
    p.add_argument("--b", type=_positive_int, default=40)
    p.add_argument("--m", type=_positive_int, default=20)
    p.add_argument("--rule", choices=SELECTION_RULES, default="max-abs")
    p.set_defaults(func=cmd_fig2b)

    p = sub.add_parser("fig3", help="selection before and after epsilon-augmentation")
    add_fig_common(p)
    p.add_argument("--n", type=_positive_int, default=100)
    p.add_argument("--m", type=_positive_int, default=30)
    p.add_argument("--p-dense", type=float, default=ex.DEFAULT_P_DENSE)
    p.add_argument("--p-sparse", type=float, default=ex.DEFAULT_P_SPARSE)
    p.add_argument("--eps", type=_positive_float, default=ex.DEFAULT_EPS)
    p.add_argument("--rule", choices=SELECTION_RULES, default="max-abs",
                   help="first-nonzero is a diagnostic alternative to the max-|alpha| rule")
    p.set_defaults(func=cmd_fig3)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except FrequencyOutOfRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except np.linalg.LinAlgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, GraphSamplingError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
