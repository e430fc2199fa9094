"""Independent reference computations used by the tests.

Nothing here calls into the search, grouping or selection code under test;
the oracles only share the eigendecomposition they are handed.
"""

import itertools

import mpmath
import numpy as np
import scipy.sparse
import scipy.sparse.csgraph

from graphsampling.graph import WeightedGraph


def random_weighted_graph(rng, n, p=0.5, components=1):
    """Random graph with U(0,1] weights and exactly ``components`` components,
    none of them a single node. Each component gets a random spanning tree."""
    sizes = np.full(components, n // components)
    sizes[: n % components] += 1
    if np.any(sizes < 2):
        raise ValueError("components must have at least two nodes")
    perm = rng.permutation(n)
    edges = {}
    start = 0
    for size in sizes:
        nodes = perm[start:start + size]
        start += size
        for k in range(1, size):
            j = nodes[rng.integers(0, k)]
            edges[tuple(sorted((int(nodes[k]), int(j))))] = None
        for a, b in itertools.combinations(nodes, 2):
            if rng.random() < p:
                edges[tuple(sorted((int(a), int(b))))] = None
    return WeightedGraph(n, [(i, j, 1.0 - rng.random()) for i, j in edges])


def unit_graph(n, pairs):
    return WeightedGraph(n, [(i, j, 1.0) for i, j in pairs])


def complete_graph(n):
    return unit_graph(n, itertools.combinations(range(n), 2))


def cycle_graph(n):
    return unit_graph(n, [(i, (i + 1) % n) for i in range(n)])


def naive_normalized_laplacian(g):
    W = np.zeros((g.n, g.n))
    for i, j, w in g.edges:
        W[i, j] = w
        W[j, i] = w
    d = [sum(W[i, j] for j in range(g.n)) for i in range(g.n)]
    L = np.zeros((g.n, g.n))
    for i in range(g.n):
        for j in range(g.n):
            L[i, j] = (1.0 if i == j else 0.0) - W[i, j] / np.sqrt(d[i] * d[j])
    return L


def component_count(g):
    rows = [i for i, j, _ in g.edges]
    cols = [j for i, j, _ in g.edges]
    A = scipy.sparse.coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n, g.n))
    return scipy.sparse.csgraph.connected_components(A, directed=False)[0]


def pw_dims(lam, rtol=1e-8):
    """For each eigenvalue, the number of eigenvalues not exceeding it (up to tolerance)."""
    tol = rtol * max(1.0, lam[-1])
    return [int(np.sum(lam <= lam[i] + tol)) for i in range(len(lam))]


def stacked_nullity(U, S, i):
    """dim N[u_1..u_i, e_j : j not in S], counted from singular values."""
    n = U.shape[0]
    comp = [j for j in range(n) if j not in set(S)]
    M = np.hstack([U[:, :i], np.eye(n)[:, comp]])
    return M.shape[1] - np.linalg.matrix_rank(M)


def intersection_dim(U, S, i):
    """dim(span(u_1..u_i) and span(e_j : j not in S)) via the rank of U[S, :i]."""
    if i == 0:
        return 0
    sub = U[sorted(S), :i]
    return i - np.linalg.matrix_rank(sub)


def brute_force_cutoff(lam, U, S):
    """(omega_c or None, pw_dim) by linear scan over every index.

    The candidate space at index i is PW_{lam_i}, i.e. all eigenvectors whose
    eigenvalue does not exceed lam_i; S is feasible for it when the stacked
    matrix has trivial nullspace.
    """
    best = 0
    for dim in sorted(set(pw_dims(lam))):
        if stacked_nullity(U, S, dim) == 0:
            best = dim
    return (float(lam[best - 1]) if best else None), best


def all_subsets(n, max_size=None):
    top = n if max_size is None else max_size
    for size in range(1, top + 1):
        yield from itertools.combinations(range(n), size)


def exhaustive_max_pw_dim(lam, U, m):
    return max(brute_force_cutoff(lam, U, S)[1] for S in all_subsets(len(lam), m))


def exhaustive_min_size(lam, U, omega):
    for S in all_subsets(len(lam)):
        oc, _ = brute_force_cutoff(lam, U, S)
        if oc is not None and oc >= omega:
            return len(S)
    return None


def mp_omega_k(lam, U, S, k, dps=120):
    """Omega_k in extended precision from the same (rounded) eigenpairs."""
    mpmath.mp.dps = dps
    comp = [j for j in range(U.shape[0]) if j not in set(S)]
    B = mpmath.matrix(U[comp, :].tolist())
    D = mpmath.diag([mpmath.mpf(max(float(x), 0.0)) ** k for x in lam])
    ev = mpmath.eigsy(B * D * B.T, eigvals_only=True)
    sigma = max(min(ev), mpmath.mpf(0))
    return float(sigma ** (mpmath.mpf(1) / k))
