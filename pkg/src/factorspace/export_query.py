"""Search-index XML export of factor-annotated documents, and box queries.

Layout (UTF-8, ``\\n`` line ends)::

    <add>
    <doc>
    <field name="id">mm000001102.txt</field>
    <field name="xcoord">-0.7341409</field>
    <field name="ycoord">-0.09961348</field>
    <field name="name">&quot;21&quot; Club Rice Pudding</field>
    <field name="recipe">...</field>
    </doc>
    </add>

An empty export is the single line ``<add></add>``.
"""

from __future__ import annotations

import math
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Sequence

import numpy as np

from .ca import CorrespondenceModel

FIELDS = ("id", "xcoord", "ycoord", "name", "recipe")

# characters XML 1.0 cannot carry at all, even as references
_ILLEGAL = re.compile("[\x00-\x08\x0b\x0c\x0e-\x1f￾￿]")


@dataclass(frozen=True)
class FactorRecord:
    id: str
    name: str
    xcoord: float
    ycoord: float
    body: str = ""

    def __post_init__(self):
        if not self.id:
            raise ValueError("record id must be non-empty")
        if not (math.isfinite(self.xcoord) and math.isfinite(self.ycoord)):
            raise ValueError(f"non-finite coordinates for {self.id!r}")


def sanitize_text(text: str, replacement: str = " ") -> str:
    """Replace characters that cannot appear in an XML 1.0 document."""
    return _ILLEGAL.sub(replacement, text)


def format_coord(x: float) -> str:
    """Shortest plain-decimal string that reads back as the same double."""
    return np.format_float_positional(float(x), unique=True, trim="0")


def _escape(text: str) -> str:
    if _ILLEGAL.search(text):
        raise ValueError("text contains characters not allowed in XML; see sanitize_text")
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;").replace("\r", "&#13;"))


def export_xml(records: Sequence[FactorRecord], out: BinaryIO) -> int:
    ids = [r.id for r in records]
    if len(set(ids)) != len(ids):
        dup = sorted({i for i in ids if ids.count(i) > 1})
        raise ValueError(f"duplicate ids: {dup[:5]}")
    chunks = []
    for r in records:
        values = (r.id, format_coord(r.xcoord), format_coord(r.ycoord), r.name, r.body)
        lines = [f'<field name="{k}">{_escape(v)}</field>' for k, v in zip(FIELDS, values)]
        chunks.append("<doc>\n" + "\n".join(lines) + "\n</doc>\n")
    text = "<add>\n" + "".join(chunks) + "</add>\n" if chunks else "<add></add>\n"
    out.write(text.encode("utf-8"))
    return len(records)


def parse_xml(source: BinaryIO | bytes) -> list[FactorRecord]:
    root = ET.fromstring(source if isinstance(source, bytes) else source.read())
    if root.tag != "add":
        raise ValueError(f"root element is <{root.tag}>, expected <add>")
    out = []
    for doc in root.iter("doc"):
        f = {el.get("name"): el.text or "" for el in doc.findall("field")}
        out.append(FactorRecord(f["id"], f.get("name", ""), float(f["xcoord"]),
                                float(f["ycoord"]), f.get("recipe", "")))
    return out


@dataclass(frozen=True)
class BoundingBox:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError(f"inverted box {self}")

    @classmethod
    def parse(cls, spec: str) -> "BoundingBox":
        """``XMIN,XMAX,YMIN,YMAX``."""
        parts = [float(p) for p in spec.split(",")]
        if len(parts) != 4:
            raise ValueError("box needs XMIN,XMAX,YMIN,YMAX")
        return cls(*parts)


def bbox_query(records: Iterable[FactorRecord], box: BoundingBox) -> list[str]:
    """Ids of records inside ``box`` (bounds inclusive), sorted."""
    records = list(records)
    if not records:
        return []
    xy = np.array([(r.xcoord, r.ycoord) for r in records])
    inside = ((xy[:, 0] >= box.x_min) & (xy[:, 0] <= box.x_max)
              & (xy[:, 1] >= box.y_min) & (xy[:, 1] <= box.y_max))
    return sorted(records[i].id for i in np.flatnonzero(inside))


def center_box(model: CorrespondenceModel, label: str, half_width: float,
               half_height: float, side: str = "cols") -> BoundingBox:
    """Box around ``label``'s position on the plane of factors 1 and 2."""
    if half_width < 0 or half_height < 0:
        raise ValueError("half extents must be non-negative")
    labels, _ = model.coords(side)
    try:
        i = list(labels).index(label)
    except ValueError:
        raise KeyError(f"unknown label {label!r}") from None
    x, y = (float(v) for v in model.plane(side)[i])
    return BoundingBox(x - half_width, x + half_width, y - half_height, y + half_height)


def records_from_model(model: CorrespondenceModel, names: dict[str, str] | None = None,
                       bodies: dict[str, str] | None = None) -> list[FactorRecord]:
    """One record per fitted row, at its factor 1/2 coordinates."""
    xy = model.plane("rows")
    names = names or {}
    bodies = bodies or {}
    return [FactorRecord(label, sanitize_text(names.get(label, "")), float(xy[i, 0]),
                         float(xy[i, 1]), sanitize_text(bodies.get(label, "")))
            for i, label in enumerate(model.row_labels)]
