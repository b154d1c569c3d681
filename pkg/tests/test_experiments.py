import numpy as np
import pytest

from factorspace.experiments import (
    PlaneCoords, Scenario, run_aggregation_protocol, ssd_principal_plane,
)
from factorspace.matrix import ContingencyTable

from oracles import exhaustive_ssd, low_rank_table


def test_identical_planes():
    xy = np.array([[0.1, 0.2], [0.3, -0.4]])
    r = ssd_principal_plane(PlaneCoords(["a", "b"], xy), PlaneCoords(["a", "b"], xy))
    assert r.ssd == 0 and r.flips == (False, False)


def test_factor_two_negated():
    xy = np.array([[0.1, 0.2], [0.3, -0.4], [-0.5, 0.1]])
    r = ssd_principal_plane(PlaneCoords("abc", xy), PlaneCoords("abc", xy * [1, -1]))
    assert r.ssd == pytest.approx(0, abs=1e-15)
    assert r.flips == (False, True)


def test_matches_exhaustive_sign_oracle():
    rng = np.random.default_rng(0)
    for _ in range(20):
        a, b = rng.normal(size=(5, 2)), rng.normal(size=(5, 2))
        labels = list("vwxyz")
        perm = rng.permutation(5)
        r = ssd_principal_plane(PlaneCoords(labels, a),
                                PlaneCoords([labels[i] for i in perm], b[perm]))
        assert r.ssd == pytest.approx(exhaustive_ssd(a, b), abs=1e-12)


def test_label_mismatch():
    xy = np.zeros((2, 2))
    with pytest.raises(ValueError):
        ssd_principal_plane(PlaneCoords(["a", "b"], xy), PlaneCoords(["a", "c"], xy))


def test_identical_rows_within_groups_give_zero():
    rng = np.random.default_rng(1)
    proto = rng.integers(1, 20, size=(5, 12))
    x = np.repeat(proto, 100, axis=0)
    r1, r2 = run_aggregation_protocol(ContingencyTable.from_dense(x), 100)
    assert r1.ssd == pytest.approx(0, abs=1e-10)
    assert r2.ssd == pytest.approx(0, abs=1e-10)


def test_indivisible_rows_rejected():
    x = np.ones((7, 3), dtype=int)
    with pytest.raises(ValueError):
        run_aggregation_protocol(ContingencyTable.from_dense(x), 3)


def test_scenarios_and_direction():
    x = low_rank_table(np.random.default_rng(2))
    t = ContingencyTable.from_dense(x)
    r1, r2 = run_aggregation_protocol(t)
    assert (r1.scenario, r2.scenario) == (Scenario.AGG_ONTO_FULL, Scenario.FULL_ONTO_AGG)
    assert (r1.n_points, r2.n_points) == (5, 500)
    assert r1.ssd < r2.ssd
    c1, c2 = run_aggregation_protocol(t, ordering="factor1")
    assert c1.scenario is Scenario.CLUSTERED_AGG_ONTO_FULL
    assert c2.scenario is Scenario.FULL_ONTO_CLUSTERED_AGG
    assert c1.to_dict()["ordering"] == "factor1"
    # sorted groups follow factor 1, so every group's members are contiguous in score
    members = c1.extra["members"]
    assert sorted(sum(members.values(), [])) == sorted(t.row_labels)
