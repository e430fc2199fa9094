"""Eigendecomposition of the normalized Laplacian and the graph Fourier transform."""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionMismatchError
from .graph import WeightedGraph, normalized_laplacian, symmetrize

GROUP_RTOL = 1e-8
BANDWIDTH_TOL = 1e-10


def group_tolerance(eigenvalues: np.ndarray) -> float:
    """Tolerance below which adjacent eigenvalues are treated as equal."""
    top = float(eigenvalues[-1]) if len(eigenvalues) else 0.0
    return GROUP_RTOL * max(1.0, top)


def _group_ends(eigenvalues: np.ndarray, tol: float) -> tuple[int, ...]:
    gaps = np.diff(eigenvalues)
    ends = [int(k) + 1 for k in np.flatnonzero(gaps > tol)]
    ends.append(len(eigenvalues))
    return tuple(ends)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues, paired orthonormal eigenvectors and degeneracy groups.

    Band indices follow the usual 1-based counting: band index ``i`` refers
    to the first ``i`` eigenvectors, i.e. columns ``0..i-1`` of
    ``eigenvectors``. ``group_ends`` lists the band index that closes each
    group of (numerically) equal eigenvalues.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    group_ends: tuple[int, ...]
    tau_group: float

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def groups(self) -> list[range]:
        """Groups as ranges of 1-based band indices."""
        starts = (0,) + self.group_ends[:-1]
        return [range(s + 1, e + 1) for s, e in zip(starts, self.group_ends)]

    def group_labels(self) -> np.ndarray:
        """0-based group id for every eigenvalue."""
        labels = np.empty(self.n, dtype=int)
        start = 0
        for g, end in enumerate(self.group_ends):
            labels[start:end] = g
            start = end
        return labels

    def is_group_end(self, i: int) -> bool:
        k = bisect.bisect_left(self.group_ends, i)
        return k < len(self.group_ends) and self.group_ends[k] == i

    def group_end_at_or_above(self, i: int) -> int:
        """Smallest group end >= i, for 1 <= i <= n."""
        return self.group_ends[bisect.bisect_left(self.group_ends, i)]

    def group_end_at_or_below(self, i: int) -> int:
        """Largest group end <= i, or 0 when i lies inside the first group."""
        k = bisect.bisect_right(self.group_ends, i)
        return self.group_ends[k - 1] if k else 0

    def group_size_at(self, i: int) -> int:
        end = self.group_end_at_or_above(i)
        k = self.group_ends.index(end)
        return end - (self.group_ends[k - 1] if k else 0)


def _fix_signs(U: np.ndarray) -> np.ndarray:
    # largest |entry| positive; argmax picks the lowest index on ties
    pivot = np.argmax(np.abs(U), axis=0)
    signs = np.sign(U[pivot, np.arange(U.shape[1])])
    signs[signs == 0] = 1.0
    return U * signs


def decompose(L: np.ndarray) -> Spectrum:
    """Full symmetric eigendecomposition with a deterministic sign convention."""
    L = symmetrize(L)
    try:
        lam, U = np.linalg.eigh(L)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"symmetric eigensolver failed: {exc}") from exc
    U = _fix_signs(U)
    lam.setflags(write=False)
    U.setflags(write=False)
    tau = group_tolerance(lam)
    return Spectrum(lam, U, _group_ends(lam, tau), tau)


def graph_spectrum(g: WeightedGraph) -> Spectrum:
    return decompose(normalized_laplacian(g))


def _check_length(s: Spectrum, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (s.n,):
        raise DimensionMismatchError(f"expected a vector of length {s.n}, got shape {v.shape}")
    return v


def gft(s: Spectrum, f) -> np.ndarray:
    """Graph Fourier transform: coordinates of ``f`` in the eigenbasis."""
    return s.eigenvectors.T @ _check_length(s, f)


def igft(s: Spectrum, coeffs) -> np.ndarray:
    return s.eigenvectors @ _check_length(s, coeffs)


def bandwidth(s: Spectrum, f, tol: float = BANDWIDTH_TOL) -> float:
    """Largest eigenvalue whose GFT coefficient exceeds ``tol * ||f||``.

    The zero signal, and signals living only on the lowest eigenvector, have
    bandwidth 0.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    f = _check_length(s, f)
    norm = np.linalg.norm(f)
    if norm == 0:
        return 0.0
    active = np.flatnonzero(np.abs(gft(s, f)) > tol * norm)
    if active.size == 0:
        return 0.0
    top = float(s.eigenvalues[active[-1]])
    # the zero eigenvalue carries rounding noise of either sign
    return 0.0 if abs(top) <= s.tau_group else top


def pw_dimension(s: Spectrum, omega: float) -> int:
    """Dimension of the Paley-Wiener space PW_omega.

    Counts eigenvalues <= omega (up to the group tolerance) and never splits a
    group of repeated eigenvalues.
    """
    count = int(np.searchsorted(s.eigenvalues, omega + s.tau_group, side="right"))
    if count == 0:
        return 0
    return s.group_end_at_or_above(count)
