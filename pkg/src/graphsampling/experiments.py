"""Figure-reproduction experiments and the plain-text/CSV/JSON writers they use.

Every runner returns a JSON-ready dict and, when given an output directory,
writes data files whose header embeds the resolved configuration. Nothing is
rendered; plot the CSVs with any tool.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .cutoff import SamplingSet, bound_dim, exact_cutoff, omega_k_bound
from .errors import DisconnectedGenerationError, ParseError, PreconditionError
from .generators import (
    DEFAULT_EPS,
    DEFAULT_P_DENSE,
    DEFAULT_P_SPARSE,
    GenSpec,
    cycle_bridge_runs,
    default_radius,
    derive_seed,
    generate,
    make_rng,
)
from .graph import WeightedGraph, connected_components, save_graph
from .sampling import max_frequency_for_size, random_sampling_trials
from .spectral import Spectrum, graph_spectrum, pw_dimension

log = logging.getLogger(__name__)

EXPERIMENTS = ("fig1", "fig2a", "fig2b", "fig3", "trials")


@dataclass
class ExperimentConfig:
    experiment: str
    gen: GenSpec
    m: int
    seed: int = 0
    k_max: int = 120
    rule: str = "max-abs"
    scale: float = 1.0
    out: Path | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise PreconditionError(f"unknown experiment {self.experiment!r}")
        if self.m < 1:
            raise PreconditionError("sample budget m must be at least 1")
        if self.m > self.gen.n:
            raise PreconditionError(f"sample budget m={self.m} exceeds n={self.gen.n}")
        if self.k_max < 1:
            raise PreconditionError("k_max must be at least 1")

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["gen"] = self.gen.to_dict()
        d["out"] = None if self.out is None else str(self.out)
        d["version"] = __version__
        return d


def scaled(value: int, scale: float, minimum: int = 1) -> int:
    return max(minimum, int(round(value * scale)))


# ---------------------------------------------------------------------------
# Writers

def _provenance_lines(config: dict) -> list[str]:
    return ["# " + json.dumps(config, sort_keys=True)]


def write_csv(path: Path, header: Sequence[str], rows, config: dict) -> None:
    buf = io.StringIO()
    for line in _provenance_lines(config):
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def write_json(path: Path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_set(path: Path, S: SamplingSet, config: dict | None = None) -> None:
    lines = _provenance_lines(config) if config is not None else []
    lines.extend(str(v) for v in S.indices)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def parse_set_text(text: str) -> list[int]:
    """Node indices from a set file: one per line, '#' comments allowed."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        for tok in line.replace(",", " ").split():
            try:
                out.append(int(tok))
            except ValueError:
                raise ParseError(f"invalid node index {tok!r}", lineno) from None
    return out


def read_set(path: str | os.PathLike) -> list[int]:
    return parse_set_text(Path(path).read_text(encoding="utf-8"))


def _fmt(x: float | None) -> str:
    return "" if x is None else format(float(x), ".17g")


# ---------------------------------------------------------------------------
# Shared helpers

def draw_usable_graph(spec: GenSpec, max_attempts: int = 100) -> tuple[WeightedGraph, GenSpec]:
    """Generate ``spec``; redraw with ``derive_seed(seed, attempt)`` while any
    node is isolated (the normalized Laplacian is undefined there)."""
    for attempt in range(max_attempts):
        current = spec if attempt == 0 else spec.with_seed(derive_seed(spec.seed, attempt))
        g = generate(current)
        if not g.isolated_nodes():
            if attempt:
                log.info("redrew %s graph %d times to avoid isolated nodes", spec.family, attempt)
            return g, current
    raise DisconnectedGenerationError(
        f"{spec.family}: every one of {max_attempts} draws had isolated nodes"
    )


def component_counts(g: WeightedGraph, S: SamplingSet) -> list[dict]:
    chosen = set(S.indices)
    return [
        {"first_node": comp[0], "size": len(comp), "selected": sum(v in chosen for v in comp)}
        for comp in connected_components(g)
    ]


# ---------------------------------------------------------------------------
# fig1: exact cut-off versus the Omega_k bound

def fig1_config(seed: int = 0, scale: float = 1.0, n: int = 300, p: float = 0.4,
                m: int = 30, k_max: int = 120, out=None) -> ExperimentConfig:
    gen = GenSpec("er-weighted", scaled(n, scale, 2), {"p": p}, seed)
    return ExperimentConfig("fig1", gen, scaled(m, scale), seed, k_max, scale=scale, out=out)


def run_fig1(cfg: ExperimentConfig) -> dict:
    g, spec = draw_usable_graph(cfg.gen)
    s = graph_spectrum(g)
    rng = make_rng(derive_seed(cfg.seed, 1))
    S = SamplingSet(g.n, rng.choice(g.n, size=cfg.m, replace=False))
    report = exact_cutoff(s, S)
    lam_next = float(s.eigenvalues[report.pw_dim]) if report.pw_dim < s.n else math.inf
    ks = list(range(1, cfg.k_max + 1))
    omegas = [omega_k_bound(s, S, k) for k in ks]
    dims = [pw_dimension(s, w) for w in omegas]
    rows = [
        (k, _fmt(w), d, _fmt(report.omega_c), report.pw_dim)
        for k, w, d in zip(ks, omegas, dims)
    ]
    omega_c = report.omega_c if report.omega_c is not None else -math.inf
    result = {
        "config": cfg.to_dict(),
        "graph_seed": spec.seed,
        "num_edges": g.num_edges,
        "sampling_set": list(S.indices),
        "cutoff": report.to_dict(),
        "next_eigenvalue": None if math.isinf(lam_next) else lam_next,
        "bound_dim_at_k_max": dims[-1],
        "omega_k_at_k_max": omegas[-1],
        "omega_k_nondecreasing": bool(np.all(np.diff(omegas) >= -1e-9)),
        "omega_k_le_omega_c": bool(all(w <= omega_c + 1e-9 for w in omegas)),
        "omega_k_le_next_eigenvalue": bool(all(w <= lam_next + 1e-9 for w in omegas)),
        "bound_dim_le_exact_dim": bool(all(d <= report.pw_dim for d in dims)),
    }
    if cfg.out is not None:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        config = cfg.to_dict()
        write_csv(out / "fig1_curve.csv",
                  ["k", "omega_k", "bound_dim", "omega_c", "exact_dim"], rows, config)
        write_set(out / "fig1_set.txt", S, config)
        write_json(out / "fig1_report.json", result)
    return result


# ---------------------------------------------------------------------------
# fig2a / fig2b: optimal sets on a geometric graph and on a bridged cycle

def fig2a_config(seed: int = 0, scale: float = 1.0, n: int = 200, m: int = 25,
                 radius: float | None = None, out=None) -> ExperimentConfig:
    n = scaled(n, scale, 2)
    radius = default_radius(n) if radius is None else radius
    gen = GenSpec("geometric", n, {"radius": radius}, seed)
    return ExperimentConfig("fig2a", gen, scaled(m, scale), seed, scale=scale, out=out)


def fig2b_config(seed: int = 0, scale: float = 1.0, n: int = 200, a: int = 4,
                 b: int = 40, m: int = 20, out=None) -> ExperimentConfig:
    gen = GenSpec("cycle-bridge", scaled(n, scale, 3),
                  {"a": scaled(a, scale), "b": scaled(b, scale)}, seed)
    return ExperimentConfig("fig2b", gen, scaled(m, scale), seed, scale=scale, out=out)


def run_fig2(cfg: ExperimentConfig) -> dict:
    if cfg.gen.family not in ("geometric", "cycle-bridge"):
        raise PreconditionError("fig2 runs on geometric or cycle-bridge graphs")
    g, spec = draw_usable_graph(cfg.gen)
    s = graph_spectrum(g)
    S, report = max_frequency_for_size(s, cfg.m, cfg.rule)
    comps = component_counts(g, S)
    threshold = g.n / cfg.m
    result = {
        "config": cfg.to_dict(),
        "graph_seed": spec.seed,
        "num_edges": g.num_edges,
        "sampling_set": list(S.indices),
        "selection_order": list(S.order or ()),
        "cutoff": report.to_dict(),
        "components": comps,
        "large_components_covered": all(
            c["selected"] >= 1 for c in comps if c["size"] >= threshold
        ),
    }
    if cfg.gen.family == "cycle-bridge":
        A, B = cycle_bridge_runs(g.n, cfg.gen.params.get("a", 4), cfg.gen.params.get("b", 40))
        result["selected_in_A"] = len(set(A) & set(S.indices))
        result["selected_in_B"] = len(set(B) & set(S.indices))
    if cfg.out is not None:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        config = cfg.to_dict()
        tag = cfg.experiment
        write_set(out / f"{tag}_set.txt", S, config)
        write_json(out / f"{tag}_report.json", result)
        save_graph(g, out / f"{tag}_graph.txt")
        labels = np.empty(g.n, dtype=int)
        for cid, comp in enumerate(connected_components(g)):
            labels[comp] = cid
        chosen = set(S.indices)
        if g.coords is not None:
            rows = [(v, _fmt(x), _fmt(y), int(v in chosen), labels[v])
                    for v, (x, y) in enumerate(g.coords)]
            header = ["node", "x", "y", "selected", "component"]
        else:
            # cycle layout for plotting
            rows = [(v, _fmt(math.cos(2 * math.pi * v / g.n)),
                     _fmt(math.sin(2 * math.pi * v / g.n)), int(v in chosen), labels[v])
                    for v in range(g.n)]
            header = ["node", "x", "y", "selected", "component"]
        write_csv(out / f"{tag}_nodes.csv", header, rows, config)
    return result


# ---------------------------------------------------------------------------
# fig3: robustness of the selection to epsilon-augmentation

def fig3_config(seed: int = 0, scale: float = 1.0, n: int = 100, m: int = 30,
                p_dense: float = DEFAULT_P_DENSE, p_sparse: float = DEFAULT_P_SPARSE,
                eps: float = DEFAULT_EPS, rule: str = "max-abs", out=None) -> ExperimentConfig:
    n = scaled(n, scale, 2)
    n += n % 2
    gen = GenSpec("dense-sparse", n, {"p_dense": p_dense, "p_sparse": p_sparse, "eps": 0.0}, seed)
    return ExperimentConfig("fig3", gen, scaled(m, scale), seed, rule=rule, scale=scale,
                            out=out, extra={"eps": eps})


def run_fig3(cfg: ExperimentConfig) -> dict:
    if cfg.gen.family != "dense-sparse":
        raise PreconditionError("fig3 runs on dense-sparse graphs")
    eps = float(cfg.extra.get("eps", DEFAULT_EPS))
    plain_spec = GenSpec(cfg.gen.family, cfg.gen.n, {**cfg.gen.params, "eps": 0.0}, cfg.gen.seed)
    g0, used = draw_usable_graph(plain_spec)
    aug_spec = GenSpec(used.family, used.n, {**used.params, "eps": eps}, used.seed)
    g1 = generate(aug_spec)
    half = g0.n // 2

    def run(g):
        S, report = max_frequency_for_size(graph_spectrum(g), cfg.m, cfg.rule)
        dense = sum(1 for v in S if v < half)
        return S, report, {"dense_half": dense, "sparse_half": len(S) - dense}

    S0, r0, c0 = run(g0)
    S1, r1, c1 = run(g1)
    result = {
        "config": cfg.to_dict(),
        "graph_seed": used.seed,
        "components_before": len(connected_components(g0)),
        "before": {"sampling_set": list(S0.indices), "cutoff": r0.to_dict(), "counts": c0},
        "after": {"sampling_set": list(S1.indices), "cutoff": r1.to_dict(), "counts": c1},
        "sets_equal": S0 == S1,
        "symmetric_difference": sorted(set(S0.indices) ^ set(S1.indices)),
    }
    if cfg.out is not None:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        config = cfg.to_dict()
        write_set(out / "fig3_set_before.txt", S0, config)
        write_set(out / "fig3_set_after.txt", S1, config)
        write_json(out / "fig3_report.json", result)
    return result


# ---------------------------------------------------------------------------
# Random-sampling trials

def trials_config(seed: int = 0, n: int = 50, p: float = 0.4, m: int = 10,
                  scale: float = 1.0, out=None, trials: int = 200,
                  family: str = "er-weighted", params: dict | None = None) -> ExperimentConfig:
    params = {"p": p} if params is None else params
    gen = GenSpec(family, scaled(n, scale, 2), params, seed)
    return ExperimentConfig("trials", gen, scaled(m, scale), seed, scale=scale, out=out,
                            extra={"trials": trials})


def run_trials(cfg: ExperimentConfig, workers: int = 1) -> dict:
    report = random_sampling_trials(cfg.gen, cfg.m, int(cfg.extra.get("trials", 200)),
                                    cfg.seed, workers=workers)
    result = {"config": cfg.to_dict(), **report.to_dict()}
    if cfg.out is not None:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "trials_report.json", result)
    return result


def spectrum_rows(s: Spectrum) -> list[tuple]:
    labels = s.group_labels()
    return [(i + 1, _fmt(lam), int(labels[i])) for i, lam in enumerate(s.eigenvalues)]
