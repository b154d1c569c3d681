import io
from pathlib import Path

import numpy as np
import pytest

from factorspace.ca import fit
from factorspace.export_query import (
    BoundingBox, FactorRecord, bbox_query, center_box, export_xml, format_coord,
    parse_xml, records_from_model, sanitize_text,
)
from factorspace.matrix import ContingencyTable

GOLDEN = Path(__file__).parent / "data" / "golden_record.xml"

EXAMPLE = FactorRecord("mm000001102.txt", '"21" Club Rice Pudding', -0.7341409, -0.09961348,
                       "1 c Rice & 2 c Milk\nCook until <soft>.")


def export(records):
    buf = io.BytesIO()
    export_xml(records, buf)
    return buf.getvalue()


def test_golden_record():
    assert export([EXAMPLE]) == GOLDEN.read_bytes()


def test_empty_export():
    assert export([]) == b"<add></add>\n"
    assert parse_xml(b"<add></add>\n") == []


def test_round_trip_byte_stable():
    rng = np.random.default_rng(0)
    recs = [FactorRecord(f"d{i}", f"name {i} <&> \"q\" 'a'", float(x), float(y),
                         f"line one\r\nline two é {i}")
            for i, (x, y) in enumerate(rng.normal(size=(10, 2)))]
    first = export(recs)
    back = parse_xml(first)
    assert back == recs
    assert export(back) == first


def test_duplicate_ids_rejected_before_output():
    buf = io.BytesIO()
    with pytest.raises(ValueError):
        export_xml([EXAMPLE, EXAMPLE], buf)
    assert buf.getvalue() == b""


def test_illegal_characters():
    rec = FactorRecord("x", "bad\x01name", 0.0, 0.0)
    with pytest.raises(ValueError):
        export([rec])
    assert sanitize_text("bad\x01name") == "bad name"


def test_record_invariants():
    with pytest.raises(ValueError):
        FactorRecord("", "n", 0.0, 0.0)
    with pytest.raises(ValueError):
        FactorRecord("a", "n", float("nan"), 0.0)


def test_format_coord_shortest_round_trip():
    for x in [-0.7341409, 0.1 + 0.2, 1e-7, 123456.0, -0.0, 2 / 3]:
        s = format_coord(x)
        assert float(s) == x
        assert "e" not in s


def random_records(rng, n=100):
    return [FactorRecord(f"id{i:03d}", "", float(x), float(y))
            for i, (x, y) in enumerate(rng.uniform(-1, 1, size=(n, 2)))]


def test_bbox_matches_linear_scan():
    rng = np.random.default_rng(1)
    recs = random_records(rng)
    for _ in range(20):
        xs, ys = np.sort(rng.uniform(-1, 1, 2)), np.sort(rng.uniform(-1, 1, 2))
        box = BoundingBox(xs[0], xs[1], ys[0], ys[1])
        expected = sorted(r.id for r in recs
                          if xs[0] <= r.xcoord <= xs[1] and ys[0] <= r.ycoord <= ys[1])
        assert bbox_query(recs, box) == expected


def test_bbox_degenerate_and_covering():
    recs = random_records(np.random.default_rng(2), 10)
    r = recs[4]
    assert bbox_query(recs, BoundingBox(r.xcoord, r.xcoord, r.ycoord, r.ycoord)) == [r.id]
    assert bbox_query(recs, BoundingBox(-1, 1, -1, 1)) == sorted(x.id for x in recs)
    assert bbox_query([], BoundingBox(0, 1, 0, 1)) == []


def test_bbox_monotone():
    rng = np.random.default_rng(3)
    recs = random_records(rng)
    small = set(bbox_query(recs, BoundingBox(-0.3, 0.2, -0.1, 0.4)))
    assert small <= set(bbox_query(recs, BoundingBox(-0.5, 0.2, -0.1, 0.6)))


def test_box_parse_and_validation():
    assert BoundingBox.parse("0,1,-2,3") == BoundingBox(0, 1, -2, 3)
    with pytest.raises(ValueError):
        BoundingBox(1, 0, 0, 1)
    with pytest.raises(ValueError):
        BoundingBox.parse("1,2,3")


def model():
    x = np.array([[5, 1, 0, 2], [1, 4, 2, 0], [0, 2, 6, 1], [3, 0, 1, 5]])
    return fit(ContingencyTable.from_dense(x, col_labels=["cake", "soup", "salad", "beef"]))


def test_center_box():
    m = model()
    x, y = m.plane("cols")[m.col_index("cake")]
    assert center_box(m, "cake", 0, 0) == BoundingBox(x, x, y, y)
    b = center_box(m, "cake", 0.1, 0.2)
    assert (b.x_min + b.x_max) / 2 == pytest.approx(x)
    assert (b.y_min + b.y_max) / 2 == pytest.approx(y)
    assert b.x_max - b.x_min == pytest.approx(0.2)
    with pytest.raises(KeyError):
        center_box(m, "pie", 0.1, 0.1)


def test_center_box_arithmetic():
    m = model()
    m.col_coords[m.col_index("cake"), :2] = [0.2, -0.5]
    b = center_box(m, "cake", 0.1, 0.2)
    np.testing.assert_allclose([b.x_min, b.x_max, b.y_min, b.y_max], [0.1, 0.3, -0.7, -0.3])


def test_records_from_model():
    m = model()
    recs = records_from_model(m, {"r1": "First\x02"}, {"r2": "text"})
    assert [r.id for r in recs] == m.row_labels
    assert recs[0].name == "First " and recs[1].body == "text"
    assert recs[2].xcoord == m.row_coords[2, 0]
