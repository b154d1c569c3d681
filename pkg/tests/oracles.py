"""Brute-force references, written independently of the package code paths."""

import itertools

import numpy as np


def random_counts(rng, n, m, high=10, fill_empty=True):
    x = rng.integers(0, high, size=(n, m))
    return fill_empty_lines(rng, x) if fill_empty else x


def dense_ca(x):
    """Full SVD of the dense standardized residual matrix."""
    x = np.asarray(x, dtype=float)
    p = x / x.sum()
    r, c = p.sum(axis=1), p.sum(axis=0)
    s = (p - np.outer(r, c)) / np.sqrt(np.outer(r, c))
    u, sv, vt = np.linalg.svd(s, full_matrices=False)
    keep = sv ** 2 > 1e-12 * max(sv[0] ** 2, 1e-300)
    keep &= sv ** 2 > 1e-13
    sv, u, v = sv[keep], u[:, keep], vt[keep].T
    rows = u * sv / np.sqrt(r)[:, None]
    cols = v * sv / np.sqrt(c)[:, None]
    return sv ** 2, rows, cols


def inertia_formula(x):
    """sum_ij (f_ij - f_i f_j)^2 / (f_i f_j)."""
    x = np.asarray(x, dtype=float)
    f = x / x.sum()
    fi, fj = f.sum(axis=1), f.sum(axis=0)
    total = 0.0
    for i in range(f.shape[0]):
        for j in range(f.shape[1]):
            e = fi[i] * fj[j]
            total += (f[i, j] - e) ** 2 / e
    return total


def chi2_statistic(x):
    x = np.asarray(x, dtype=float)
    e = np.outer(x.sum(axis=1), x.sum(axis=0)) / x.sum()
    return float(np.sum((x - e) ** 2 / e))


def chi2_profile_dist2(x, i, k):
    """sum_j (1/f_j) (f_ij/f_i - f_kj/f_k)^2."""
    x = np.asarray(x, dtype=float)
    fj = x.sum(axis=0) / x.sum()
    pi, pk = x[i] / x[i].sum(), x[k] / x[k].sum()
    return float(np.sum((pi - pk) ** 2 / fj))


def align_signs(a, b):
    """Flip columns of ``b`` to agree in sign with ``a``."""
    s = np.sign(np.sum(a * b, axis=0))
    s[s == 0] = 1
    return b * s


def exhaustive_ssd(a, b):
    best = np.inf
    for sx, sy in itertools.product((1, -1), repeat=2):
        d = 0.0
        for (ax, ay), (bx, by) in zip(a, b):
            d += (ax - sx * bx) ** 2 + (ay - sy * by) ** 2
        best = min(best, d)
    return best


def brute_nn(points, labels):
    """Nearest other point of each point, ties to the smaller label."""
    n = len(points)
    out = []
    for i in range(n):
        best = None
        for j in range(n):
            if j == i:
                continue
            d = float(np.sum((points[i] - points[j]) ** 2))
            key = (d, labels[j])
            if best is None or key < best[0]:
                best = (key, j)
        out.append(best[1])
    return out


def brute_reciprocal(points, labels):
    nn = brute_nn(points, labels)
    return sorted(tuple(sorted((labels[i], labels[j])))
                  for i, j in enumerate(nn) if nn[j] == i and i < j)


def _cluster_dist(points, pair_dist, a, b, linkage):
    ia, ib = sorted(a), sorted(b)
    if linkage == "ward":
        na, nb = len(a), len(b)
        diff = points[ia].mean(axis=0) - points[ib].mean(axis=0)
        return np.sqrt(2.0 * na * nb / (na + nb) * float(diff @ diff))
    return float(pair_dist[np.ix_(ia, ib)].mean())


def naive_agglomeration(points, linkage):
    """Greedy merging of the closest pair, distances recomputed from scratch.

    Returns (partition after each merge, heights).
    """
    pair_dist = np.sqrt(((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=2))
    clusters = [frozenset([i]) for i in range(len(points))]
    partitions, heights = [], []
    while len(clusters) > 1:
        best = None
        for x in range(len(clusters)):
            for y in range(x + 1, len(clusters)):
                d = _cluster_dist(points, pair_dist, clusters[x], clusters[y], linkage)
                if best is None or d < best[0]:
                    best = (d, x, y)
        d, x, y = best
        merged = clusters[x] | clusters[y]
        clusters = [c for k, c in enumerate(clusters) if k not in (x, y)] + [merged]
        partitions.append(frozenset(clusters))
        heights.append(d)
    return partitions, heights


def low_rank_table(rng, n=500, m=50, rank=3, tokens=(40, 160)):
    """Multinomial rows drawn from a low-rank perturbation of a base profile."""
    base = rng.dirichlet(np.full(m, 2.0))
    a = rng.normal(size=(n, rank))
    b = rng.normal(size=(m, rank))
    prof = base * np.exp(0.6 * a @ b.T / np.sqrt(rank))
    prof /= prof.sum(axis=1, keepdims=True)
    x = np.stack([rng.multinomial(rng.integers(*tokens), p) for p in prof])
    return fill_empty_lines(rng, x)


def fill_empty_lines(rng, x):
    """Give every all-zero row and column a single count."""
    for i in np.flatnonzero(x.sum(axis=1) == 0):
        x[i, rng.integers(x.shape[1])] += 1
    for j in np.flatnonzero(x.sum(axis=0) == 0):
        x[rng.integers(x.shape[0]), j] += 1
    return x
