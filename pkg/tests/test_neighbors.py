import warnings

import numpy as np
import pytest
from scipy.cluster.hierarchy import linkage as scipy_linkage

from factorspace.ca import fit
from factorspace.matrix import ContingencyTable
from factorspace.neighbors import (
    SINGULAR_PLURAL, full_space_sqdist, nearest, nn_chain_cluster, pair_links,
    reciprocal_pairs,
)

from oracles import brute_reciprocal, chi2_profile_dist2, naive_agglomeration, random_counts


def labels(n):
    return [f"p{i:02d}" for i in range(n)]


def test_identical_profiles_zero_distance():
    x = np.array([[1, 2, 3], [2, 4, 6], [5, 1, 0], [0, 3, 1]])
    m = fit(ContingencyTable.from_dense(x))
    assert full_space_sqdist(m, "r1", "r2") == pytest.approx(0, abs=1e-10)
    with pytest.raises(KeyError):
        full_space_sqdist(m, "r1", "nope")


def test_full_space_distance_is_profile_distance():
    rng = np.random.default_rng(0)
    x = random_counts(rng, 6, 6)
    m = fit(ContingencyTable.from_dense(x))
    i, k = rng.choice(6, size=2, replace=False)
    got = full_space_sqdist(m, m.row_labels[i], m.row_labels[k])
    assert got == pytest.approx(chi2_profile_dist2(x, i, k), abs=1e-8)


def test_nearest_collinear():
    r = nearest((["a", "b", "c"], [0.0, 1.0, 3.0]), "b")
    assert r.matches[0][0] == "a"


def test_nearest_duplicate_twin_first():
    x = np.array([[1, 2, 3], [5, 1, 0], [1, 2, 3], [0, 3, 1]])
    m = fit(ContingencyTable.from_dense(x))
    top = nearest(m, "r1").matches[0]
    assert top[0] == "r3" and top[1] == pytest.approx(0, abs=1e-20)


def test_nearest_matches_sort_oracle():
    rng = np.random.default_rng(1)
    pts = rng.normal(size=(20, 3))
    lab = labels(20)
    got = nearest((lab, pts), "p07", k=5)
    d = ((pts - pts[7]) ** 2).sum(axis=1)
    expected = sorted((d[i], lab[i]) for i in range(20) if i != 7)[:5]
    assert [m[0] for m in got.matches] == [l for _, l in expected]


def test_nearest_truncates_with_warning():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        r = nearest((["a", "b"], [0.0, 1.0]), "a", k=3)
    assert len(r.matches) == 1 and w


def test_reciprocal_chain_configuration():
    assert reciprocal_pairs((list("abcd"), [0.0, 2.0, 3.5, 4.0])) == [("c", "d")]


def test_reciprocal_two_points():
    assert reciprocal_pairs((["x", "y"], [[0, 0], [1, 1]])) == [("x", "y")]


def test_reciprocal_matches_brute_force():
    rng = np.random.default_rng(2)
    for _ in range(10):
        pts = rng.normal(size=(30, 2))
        assert reciprocal_pairs((labels(30), pts)) == brute_reciprocal(pts, labels(30))


def test_reciprocal_tie_to_smaller_label():
    # b is equidistant from a and c; ties go to the smaller label
    assert reciprocal_pairs((list("abc"), [0.0, 1.0, 2.0])) == [("a", "b")]


def test_two_point_dendrogram():
    d = nn_chain_cluster((["a", "b"], [[0, 0], [3, 4]]), "average")
    assert len(d.merges) == 1
    assert d.merges[0].height == pytest.approx(5.0)


def test_tight_pairs_merge_first():
    pts = [[0, 0], [0.1, 0], [10, 0], [10.1, 0]]
    for link in ("ward", "average"):
        parts = nn_chain_cluster((list("abcd"), pts), link).partitions()
        assert frozenset({0, 1}) in parts[1] and frozenset({2, 3}) in parts[1]


@pytest.mark.parametrize("link", ["ward", "average"])
def test_partitions_match_naive(link):
    rng = np.random.default_rng(3)
    for _ in range(3):
        pts = rng.normal(size=(25, 3))
        d = nn_chain_cluster((labels(25), pts), link)
        parts, heights = naive_agglomeration(pts, link)
        assert d.partitions() == parts
        np.testing.assert_allclose([m.height for m in d.merges], heights, atol=1e-10)


@pytest.mark.parametrize("link", ["ward", "average"])
def test_linkage_matrix_matches_scipy(link):
    pts = np.random.default_rng(4).normal(size=(30, 4))
    z = nn_chain_cluster((labels(30), pts), link).linkage_matrix()
    np.testing.assert_allclose(z, scipy_linkage(pts, link), atol=1e-10)


def test_dendrogram_to_dict():
    d = nn_chain_cluster((list("abc"), [0.0, 1.0, 5.0]), "ward")
    out = d.to_dict()
    assert out["linkage"] == "ward" and len(out["merges"]) == 2
    assert out["merges"][-1]["size"] == 3


def test_pair_links():
    coords = np.array([[0, 0, 9], [3, 4, -9], [1, 1, 0]])
    r = pair_links((["egg", "eggs", "olive"], coords), [("egg", "eggs"), ("olive", "olives")])
    assert r.pairs == [("egg", "eggs", 5.0)]
    assert r.errors[0][:2] == ("olive", "olives")
    same = pair_links((["a", "b"], [[1, 2], [1, 2]]), [("a", "b")])
    assert same.pairs[0][2] == 0


def test_pair_links_random_against_formula():
    rng = np.random.default_rng(5)
    xy = rng.normal(size=(10, 4))
    lab = labels(10)
    pairs = [(lab[i], lab[j]) for i, j in rng.integers(0, 10, size=(8, 2))]
    r = pair_links((lab, xy), pairs, plane=(2, 3))
    for a, b, d in r.pairs:
        i, j = lab.index(a), lab.index(b)
        assert d == pytest.approx(np.hypot(xy[i, 1] - xy[j, 1], xy[i, 2] - xy[j, 2]))


def test_singular_plural_list():
    assert len(SINGULAR_PLURAL) == 23
    assert ("strawberry", "strawberries") in SINGULAR_PLURAL
