"""Nearest neighbours and agglomerative clustering in factor space.

Factor space is Euclidean, and with all retained factors the squared
distance between two profiles' coordinates is their chi-squared distance.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .ca import CorrespondenceModel

SINGULAR_PLURAL = [
    ("strawberry", "strawberries"), ("carrot", "carrots"), ("muffin", "muffins"),
    ("egg", "eggs"), ("apple", "apples"), ("yolk", "yolks"),
    ("tortilla", "tortillas"), ("bread", "breads"), ("cookie", "cookies"),
    ("pepper", "peppers"), ("juice", "juices"), ("vegetable", "vegetables"),
    ("clove", "cloves"), ("carbohydrate", "carbohydrates"), ("spice", "spices"),
    ("soup", "soups"), ("peanut", "peanuts"), ("onion", "onions"),
    ("olive", "olives"), ("cracker", "crackers"), ("almond", "almonds"),
    ("bean", "beans"), ("banana", "bananas"),
]


class PointSet(NamedTuple):
    labels: Sequence[str]
    coords: np.ndarray

    @classmethod
    def from_model(cls, model: CorrespondenceModel, side: str = "rows") -> "PointSet":
        labels, xy = model.coords(side)
        return cls(list(labels), xy)

    def index(self, label: str) -> int:
        try:
            return list(self.labels).index(label)
        except ValueError:
            raise KeyError(f"unknown label {label!r}") from None


def _as_points(source, side: str = "rows") -> PointSet:
    if isinstance(source, CorrespondenceModel):
        return PointSet.from_model(source, side)
    labels, coords = source
    coords = np.asarray(coords, dtype=float)
    if coords.ndim == 1:
        coords = coords[:, None]
    return PointSet(list(labels), coords)


def full_space_sqdist(model, label_a: str, label_b: str, side: str = "rows") -> float:
    pts = _as_points(model, side)
    d = pts.coords[pts.index(label_a)] - pts.coords[pts.index(label_b)]
    return float(d @ d)


@dataclass
class NeighborResult:
    query_label: str
    matches: list[tuple[str, float]]
    k: int


def nearest(source, label: str, k: int = 1, side: str = "rows") -> NeighborResult:
    """``k`` nearest points by squared distance; ties go to the smaller label."""
    if k < 1:
        raise ValueError("k must be >= 1")
    pts = _as_points(source, side)
    q = pts.index(label)
    d = np.sum((pts.coords - pts.coords[q]) ** 2, axis=1)
    others = [i for i in range(len(pts.labels)) if i != q]
    if k > len(others):
        warnings.warn(f"k={k} exceeds the {len(others)} other points; result truncated",
                      stacklevel=2)
    others.sort(key=lambda i: (d[i], pts.labels[i]))
    return NeighborResult(label, [(pts.labels[i], float(d[i])) for i in others[:k]], k)


def _nn_index(dist: np.ndarray, labels: Sequence[str]) -> np.ndarray:
    """Index of each point's nearest other point, ties to the smaller label."""
    n = dist.shape[0]
    order = np.argsort(np.asarray(labels, dtype=object).astype(str), kind="stable")
    rank = np.empty(n, dtype=int)
    rank[order] = np.arange(n)
    d = dist.copy()
    np.fill_diagonal(d, np.inf)
    out = np.empty(n, dtype=int)
    for i in range(n):
        cand = np.flatnonzero(d[i] == d[i].min())
        out[i] = cand[np.argmin(rank[cand])]
    return out


def reciprocal_pairs(source, side: str = "rows") -> list[tuple[str, str]]:
    """Pairs that are each other's nearest neighbour, as label-sorted tuples."""
    pts = _as_points(source, side)
    if len(pts.labels) < 2:
        raise ValueError("need at least 2 points")
    nn = _nn_index(cdist(pts.coords, pts.coords, "sqeuclidean"), pts.labels)
    pairs = []
    for i, j in enumerate(nn):
        if i < j and nn[j] == i:
            a, b = sorted((pts.labels[i], pts.labels[j]))
            pairs.append((a, b))
    return sorted(pairs)


class Linkage(str, enum.Enum):
    WARD = "ward"
    AVERAGE = "average"


class Merge(NamedTuple):
    a: int
    b: int
    height: float
    size: int


@dataclass
class Dendrogram:
    """Merge history with scipy-style cluster ids.

    Leaves are ``0..n-1``; the cluster formed by merge ``t`` is ``n + t``.
    """

    labels: list[str]
    merges: list[Merge]
    linkage: Linkage

    def linkage_matrix(self) -> np.ndarray:
        return np.array([[m.a, m.b, m.height, m.size] for m in self.merges], dtype=float)

    def partitions(self) -> list[frozenset[frozenset[int]]]:
        """Partition of the leaves after each merge."""
        n = len(self.labels)
        members = {i: frozenset([i]) for i in range(n)}
        current = set(members.values())
        out = []
        for t, m in enumerate(self.merges):
            new = members[m.a] | members[m.b]
            current -= {members.pop(m.a), members.pop(m.b)}
            current.add(new)
            members[n + t] = new
            out.append(frozenset(current))
        return out

    def to_dict(self) -> dict:
        return {
            "linkage": self.linkage.value,
            "labels": list(self.labels),
            "merges": [{"a": m.a, "b": m.b, "height": m.height, "size": m.size}
                       for m in self.merges],
        }


def _lance_williams(linkage: Linkage, d_ik, d_jk, d_ij, n_i, n_j, n_k):
    if linkage is Linkage.WARD:
        t = n_i + n_j + n_k
        v = ((n_i + n_k) * d_ik ** 2 + (n_j + n_k) * d_jk ** 2 - n_k * d_ij ** 2) / t
        return np.sqrt(np.maximum(v, 0.0))
    return (n_i * d_ik + n_j * d_jk) / (n_i + n_j)


def nn_chain_cluster(source, linkage: Linkage | str = Linkage.WARD,
                     side: str = "rows") -> Dendrogram:
    """Agglomerate by following nearest-neighbour chains.

    A chain is extended from its tip to the tip's nearest neighbour until two
    clusters are each other's nearest neighbour; that pair is merged at once.
    Ward and average linkage are reducible, so no cluster outside the pair
    can become closer to the merged cluster than it was to either part and
    the rest of the chain stays valid. Heights are Euclidean (Ward uses the
    same convention as ``scipy.cluster.hierarchy.ward``).
    """
    linkage = Linkage(linkage)
    pts = _as_points(source, side)
    n = len(pts.labels)
    if n < 2:
        raise ValueError("need at least 2 points")
    dist = cdist(pts.coords, pts.coords)
    np.fill_diagonal(dist, np.inf)
    size = np.ones(n, dtype=int)
    active = np.ones(n, dtype=bool)
    raw: list[tuple[int, int, float]] = []
    chain: list[int] = []

    while len(raw) < n - 1:
        if not chain:
            chain.append(int(np.flatnonzero(active)[0]))
        a = chain[-1]
        row = np.where(active, dist[a], np.inf)
        row[a] = np.inf
        b = int(np.argmin(row))
        if len(chain) > 1 and row[chain[-2]] <= row[b]:
            b = chain[-2]
        if len(chain) > 1 and b == chain[-2]:
            chain.pop()
            chain.pop()
            i, j = min(a, b), max(a, b)
            h = dist[i, j]
            raw.append((i, j, float(h)))
            ks = np.flatnonzero(active)
            ks = ks[(ks != i) & (ks != j)]
            new = _lance_williams(linkage, dist[i, ks], dist[j, ks], h,
                                  size[i], size[j], size[ks])
            dist[i, ks] = dist[ks, i] = new
            dist[j, :] = dist[:, j] = np.inf
            active[j] = False
            size[i] += size[j]
        else:
            chain.append(b)

    # chain order is not height order; sort and rename via union-find
    raw.sort(key=lambda m: m[2])
    parent = list(range(n))
    cluster_id = list(range(n))
    csize = [1] * n

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    merges = []
    for t, (i, j, h) in enumerate(raw):
        ri, rj = find(i), find(j)
        ca_, cb_ = sorted((cluster_id[ri], cluster_id[rj]))
        parent[rj] = ri
        csize[ri] += csize[rj]
        cluster_id[ri] = n + t
        merges.append(Merge(ca_, cb_, h, csize[ri]))
    return Dendrogram(list(pts.labels), merges, linkage)


@dataclass
class PairLinkReport:
    pairs: list[tuple[str, str, float]]
    plane: tuple[int, int]
    errors: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def mean(self) -> float:
        return float(np.mean([d for *_, d in self.pairs])) if self.pairs else float("nan")

    @property
    def max(self) -> float:
        return float(np.max([d for *_, d in self.pairs])) if self.pairs else float("nan")


def pair_links(source, pairs: Iterable[tuple[str, str]], plane: tuple[int, int] = (1, 2),
               side: str = "cols") -> PairLinkReport:
    """Planar distance between the members of each labelled pair."""
    if isinstance(source, CorrespondenceModel):
        labels, _ = source.coords(side)
        xy = source.plane(side, plane)
    else:
        labels, coords = source
        coords = np.asarray(coords, dtype=float)
        xy = coords[:, [plane[0] - 1, plane[1] - 1]]
    pos = {label: i for i, label in enumerate(labels)}
    found, errors = [], []
    for a, b in pairs:
        missing = [x for x in (a, b) if x not in pos]
        if missing:
            errors.append((a, b, f"missing label(s): {', '.join(missing)}"))
            continue
        found.append((a, b, float(np.linalg.norm(xy[pos[a]] - xy[pos[b]]))))
    return PairLinkReport(found, tuple(plane), errors)
