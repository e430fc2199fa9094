"""Seeded generators for the four experimental graph families.

All randomness comes from ``numpy.random.Philox`` (a counter-based 64-bit
generator) keyed by the integer seed, so a :class:`GenSpec` fully determines
its graph.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from .errors import GraphSamplingError, OverlapError, PreconditionError
from .graph import WeightedGraph

FAMILIES = ("er-weighted", "geometric", "cycle-bridge", "dense-sparse")

DEFAULT_MEAN_DEGREE = 10.0
DEFAULT_P_DENSE = 0.5
DEFAULT_P_SPARSE = 0.05
DEFAULT_EPS = 1e-4

# smallest positive double, so weights fall in the open interval (0, 1)
_TINY = float(np.finfo(float).tiny)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def derive_seed(*words: int) -> int:
    """Mix integers into one 64-bit seed via ``numpy.random.SeedSequence``."""
    ss = np.random.SeedSequence([int(w) for w in words])
    return int(ss.generate_state(1, np.uint64)[0])


def default_radius(n: int, mean_degree: float = DEFAULT_MEAN_DEGREE) -> float:
    """Radius giving roughly ``mean_degree`` neighbours on the unit square.

    Ignores boundary effects, so the realised mean degree is a little lower.
    """
    return math.sqrt(mean_degree / (math.pi * max(n - 1, 1)))


def _pairs(n):
    return np.triu_indices(n, k=1)


def gen_er_weighted(n: int, p: float, seed: int) -> WeightedGraph:
    """Erdos-Renyi graph with independent Uniform(0, 1) edge weights."""
    if not 0.0 <= p <= 1.0:
        raise PreconditionError(f"edge probability must lie in [0, 1], got {p}")
    rng = make_rng(seed)
    iu, ju = _pairs(n)
    keep = rng.random(iu.size) < p
    weights = rng.uniform(_TINY, 1.0, size=int(keep.sum()))
    return WeightedGraph(n, zip(iu[keep].tolist(), ju[keep].tolist(), weights.tolist()))


def gen_geometric(n: int, radius: float, seed: int) -> WeightedGraph:
    """Random geometric graph on the unit square with unit weights.

    Connectivity is not enforced; node coordinates are kept on the result.
    """
    if not radius > 0:
        raise PreconditionError(f"radius must be positive, got {radius}")
    rng = make_rng(seed)
    pts = rng.random((n, 2))
    iu, ju = _pairs(n)
    dist = np.hypot(pts[iu, 0] - pts[ju, 0], pts[iu, 1] - pts[ju, 1])
    keep = dist < radius
    edges = [(i, j, 1.0) for i, j in zip(iu[keep].tolist(), ju[keep].tolist())]
    return WeightedGraph(n, edges, coords=pts)


def cycle_bridge_runs(n: int, a: int, b: int) -> tuple[list[int], list[int]]:
    """Node runs A (starting at 0) and B (starting at n // 2) on the cycle."""
    if a < 1 or b < 1:
        raise PreconditionError("a and b must both be at least 1")
    if a + b > n:
        raise PreconditionError(f"a + b = {a + b} exceeds cycle length {n}")
    A = list(range(a))
    B = [(n // 2 + k) % n for k in range(b)]
    if set(A) & set(B):
        raise OverlapError(f"runs A (0..{a - 1}) and B (from {n // 2}, length {b}) overlap")
    return A, B


def gen_cycle_bridge(n: int, a: int, b: int, seed: int = 0) -> WeightedGraph:
    """Unit-weight n-cycle plus every edge between runs A and B.

    Deterministic; ``seed`` is accepted for interface uniformity.
    """
    if n < 3:
        raise PreconditionError("a cycle needs at least 3 nodes")
    A, B = cycle_bridge_runs(n, a, b)
    pairs = {(min(i, (i + 1) % n), max(i, (i + 1) % n)) for i in range(n)}
    pairs.update((min(x, y), max(x, y)) for x in A for y in B)
    return WeightedGraph(n, [(i, j, 1.0) for i, j in sorted(pairs)])


def gen_dense_sparse(
    n: int,
    p_dense: float = DEFAULT_P_DENSE,
    p_sparse: float = DEFAULT_P_SPARSE,
    eps: float = 0.0,
    seed: int = 0,
) -> WeightedGraph:
    """Two halves: ER(p_dense) on the left, ER(p_sparse) on the right and across.

    With ``eps > 0`` every missing pair gets an edge of weight ``eps``. The
    unit-weight part is drawn from the same stream regardless of ``eps``, so
    the augmented graph is a superset of the plain one for the same seed.
    """
    if n % 2:
        raise PreconditionError("dense-sparse graphs need an even node count")
    if not 0.0 <= p_sparse <= p_dense <= 1.0:
        raise PreconditionError("need 0 <= p_sparse <= p_dense <= 1")
    if eps < 0:
        raise PreconditionError("eps must be non-negative")
    rng = make_rng(seed)
    half = n // 2
    iu, ju = _pairs(n)
    prob = np.where(ju < half, p_dense, p_sparse)
    keep = rng.random(iu.size) < prob
    weights = np.where(keep, 1.0, eps)
    if eps > 0:
        keep = np.ones_like(keep)
    return WeightedGraph(
        n, zip(iu[keep].tolist(), ju[keep].tolist(), weights[keep].tolist())
    )


@dataclass(frozen=True)
class GenSpec:
    """Family name, size, family parameters and seed for one generated graph."""

    family: str
    n: int
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise PreconditionError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.n < 2:
            raise PreconditionError("n must be at least 2")
        for key, value in self.params.items():
            if key.startswith("p") and not 0.0 <= value <= 1.0:
                raise PreconditionError(f"{key} must lie in [0, 1]")
            if key in ("radius",) and not value > 0:
                raise PreconditionError(f"{key} must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise PreconditionError("seed must be an unsigned 64-bit integer")

    def with_seed(self, seed: int) -> "GenSpec":
        return GenSpec(self.family, self.n, dict(self.params), int(seed))

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GenSpec":
        return cls(d["family"], int(d["n"]), dict(d.get("params", {})), int(d.get("seed", 0)))


def generate(spec: GenSpec) -> WeightedGraph:
    p = spec.params
    if spec.family == "er-weighted":
        return gen_er_weighted(spec.n, p.get("p", 0.4), spec.seed)
    if spec.family == "geometric":
        return gen_geometric(spec.n, p.get("radius", default_radius(spec.n)), spec.seed)
    if spec.family == "cycle-bridge":
        return gen_cycle_bridge(spec.n, p.get("a", 4), p.get("b", 40), spec.seed)
    if spec.family == "dense-sparse":
        return gen_dense_sparse(
            spec.n,
            p.get("p_dense", DEFAULT_P_DENSE),
            p.get("p_sparse", DEFAULT_P_SPARSE),
            p.get("eps", 0.0),
            spec.seed,
        )
    raise GraphSamplingError(f"unhandled family {spec.family!r}")
