"""Optimal sampling-set selection by greedy basis exchange, and a harness for
checking how often uniformly random sets are already optimal.

The selector starts from the standard basis ``e_1..e_n`` and inserts the
eigenvectors ``u_1..u_m`` one at a time. Each ``u`` is expanded in the
current basis and replaces the not-yet-replaced standard vector carrying the
largest coefficient. After m steps the replaced positions form S, and
``[u_1..u_m, e_j for j not in S]`` is a basis of R^n, so S recovers
PW_{lambda_m} with only m samples.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .cutoff import CutoffReport, SamplingSet, exact_cutoff, rank_tolerance
from .errors import (
    DegenerateTargetError,
    DisconnectedGenerationError,
    FrequencyOutOfRangeError,
    IllConditionedError,
    PreconditionError,
)
from .generators import GenSpec, derive_seed, generate, make_rng
from .graph import WeightedGraph, is_connected
from .spectral import Spectrum, graph_spectrum

log = logging.getLogger(__name__)

TIE_RTOL = 1e-12
SELECTION_RULES = ("max-abs", "first-nonzero")


@dataclass
class ExchangeState:
    """Working basis (columns b_i), nodes replaced so far, and step count."""

    basis: np.ndarray
    selected: list[int] = field(default_factory=list)
    step: int = 0

    @classmethod
    def initial(cls, n: int) -> "ExchangeState":
        return cls(np.eye(n))

    def min_singular_value(self) -> float:
        return float(np.linalg.svd(self.basis, compute_uv=False)[-1])


def _pick(alpha: np.ndarray, free: np.ndarray, rule: str) -> int:
    mags = np.abs(alpha)
    mags[~free] = -1.0
    peak = mags.max()
    if rule == "max-abs":
        # near-ties (eigensolver noise) resolve to the lowest node index
        return int(np.flatnonzero(mags >= peak * (1.0 - TIE_RTOL))[0])
    if rule == "first-nonzero":
        return int(np.flatnonzero(mags > peak * np.sqrt(np.finfo(float).eps))[0])
    raise PreconditionError(f"unknown selection rule {rule!r}; choose from {SELECTION_RULES}")


def exchange_step(state: ExchangeState, u: np.ndarray, rule: str = "max-abs") -> int:
    """Insert eigenvector ``u`` into the basis; return the replaced node."""
    try:
        alpha = np.linalg.solve(state.basis, u)
    except np.linalg.LinAlgError as exc:
        raise IllConditionedError(f"exchange basis became singular: {exc}") from exc
    free = np.ones(len(alpha), dtype=bool)
    free[state.selected] = False
    ell = _pick(alpha, free, rule)
    state.basis[:, ell] = u
    state.selected.append(ell)
    state.step += 1
    return ell


def algorithm1_select(
    s: Spectrum,
    m: int,
    rule: str = "max-abs",
    check: bool = False,
) -> SamplingSet:
    """Size-m set whose cut-off frequency is lambda_m.

    ``m`` must close its eigenvalue group; otherwise no size-m set can recover
    PW_{lambda_m} and DegenerateTargetError is raised. With ``check=True`` the
    working basis is verified to stay nonsingular after every exchange.
    ``rule="first-nonzero"`` replaces the lowest-index standard vector with a
    nonzero coefficient instead of the largest one (diagnostic only).
    """
    if not 1 <= m <= s.n:
        raise PreconditionError(f"m must lie in 1..{s.n}, got {m}")
    if not s.is_group_end(m):
        raise DegenerateTargetError(
            f"lambda_{m} = {s.eigenvalues[m - 1]:.12g} repeats up to index "
            f"{s.group_end_at_or_above(m)}; use m = {s.group_end_at_or_above(m)} "
            f"or {s.group_end_at_or_below(m)}"
        )
    state = ExchangeState.initial(s.n)
    U = s.eigenvectors
    for t in range(m):
        exchange_step(state, U[:, t], rule)
        if check:
            sv = np.linalg.svd(state.basis, compute_uv=False)
            if sv[-1] <= rank_tolerance(state.basis, sv):
                raise IllConditionedError(f"basis lost rank after step {state.step}")
    return SamplingSet(s.n, state.selected, order=state.selected)


def min_set_for_frequency(s: Spectrum, omega: float, rule: str = "max-abs") -> SamplingSet:
    """Smallest S with cut-off frequency at least ``omega``."""
    lam = s.eigenvalues
    if omega > lam[-1] + s.tau_group:
        raise FrequencyOutOfRangeError(
            f"target {omega} exceeds the largest eigenvalue {lam[-1]:.12g}"
        )
    m = int(np.searchsorted(lam, omega - s.tau_group, side="left")) + 1
    m = s.group_end_at_or_above(max(m, 1))
    return algorithm1_select(s, m, rule)


def max_frequency_for_size(
    s: Spectrum, m: int, rule: str = "max-abs"
) -> tuple[SamplingSet, CutoffReport]:
    """Set of at most m nodes with the largest cut-off frequency.

    When lambda_m sits inside a group of repeated eigenvalues the optimum is
    the group end just below m; the report is then flagged as degenerate.
    """
    if not 1 <= m <= s.n:
        raise PreconditionError(f"m must lie in 1..{s.n}, got {m}")
    target = s.group_end_at_or_below(m)
    degenerate = target != m
    if target == 0:
        # m smaller than the multiplicity of lambda_1: nothing is recoverable
        empty = SamplingSet(s.n, (), allow_empty=True)
        return empty, CutoffReport(None, 0, (), True)
    S = algorithm1_select(s, target, rule)
    report = exact_cutoff(s, S)
    if degenerate and not report.degenerate_at_boundary:
        report = CutoffReport(report.omega_c, report.pw_dim, report.tested_indices, True)
    return S, report


# ---------------------------------------------------------------------------
# Random-sampling trials

GraphSource = Union[GenSpec, Callable[[int], WeightedGraph]]


@dataclass
class TrialReport:
    trials: int
    successes: int
    failures: list[dict] = field(default_factory=list)
    regenerations: int = 0

    @property
    def success_fraction(self) -> float:
        return self.successes / self.trials if self.trials else float("nan")

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "success_fraction": self.success_fraction,
            "regenerations": self.regenerations,
            "failures": self.failures,
        }


def _make_graph(source: GraphSource, seed: int) -> WeightedGraph:
    if isinstance(source, GenSpec):
        return generate(source.with_seed(seed))
    return source(seed)


def run_trial(
    source: GraphSource,
    m: int,
    seed: int,
    trial: int,
    require_connected: bool = True,
    max_retries: int = 100,
) -> dict:
    """One trial: draw a graph and a uniform size-m set, test pw_dim == m.

    Graph seeds are ``derive_seed(seed, trial, 0, attempt)`` and the set seed
    is ``derive_seed(seed, trial, 1)``, so trials are independent of the order
    in which they run.
    """
    for attempt in range(max_retries + 1):
        graph_seed = derive_seed(seed, trial, 0, attempt)
        g = _make_graph(source, graph_seed)
        if not g.isolated_nodes() and (is_connected(g) or not require_connected):
            break
    else:
        raise DisconnectedGenerationError(
            f"trial {trial}: no usable graph after {max_retries + 1} draws"
        )
    rng = make_rng(derive_seed(seed, trial, 1))
    S = SamplingSet(g.n, rng.choice(g.n, size=m, replace=False))
    report = exact_cutoff(graph_spectrum(g), S)
    result = {
        "trial": trial,
        "graph_seed": graph_seed,
        "attempts": attempt + 1,
        "success": report.pw_dim == m,
    }
    if not result["success"]:
        result["sampling_set"] = list(S.indices)
        result["pw_dim"] = report.pw_dim
        if isinstance(source, GenSpec):
            result["graph_spec"] = source.with_seed(graph_seed).to_dict()
    return result


def random_sampling_trials(
    source: GraphSource,
    m: int,
    trials: int,
    seed: int,
    require_connected: bool = True,
    max_retries: int = 100,
    workers: int = 1,
) -> TrialReport:
    """How often a uniformly random size-m set reaches pw_dim = m."""
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    args = [(source, m, seed, t, require_connected, max_retries) for t in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_trial_star, args))
    else:
        results = [run_trial(*a) for a in args]
    report = TrialReport(trials=trials, successes=0)
    for r in results:
        report.regenerations += r["attempts"] - 1
        if r["success"]:
            report.successes += 1
        else:
            report.failures.append({k: v for k, v in r.items() if k != "success"})
    if report.regenerations:
        log.info("regenerated %d disconnected graphs", report.regenerations)
    return report


def _run_trial_star(args):
    return run_trial(*args)
