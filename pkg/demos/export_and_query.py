"""
Search-index export and box queries
===================================

Write each record with its factor 1/2 coordinates as XML for a search
index, read it back, and pick out the records around a term's position.
"""

import io

from factorspace import data
from factorspace.ca import fit
from factorspace.corpus import build_vocabulary, filter_terms, split_records, tokenize_records, top_terms
from factorspace.export_query import bbox_query, center_box, export_xml, parse_xml, records_from_model
from factorspace.matrix import build_table

records = split_records(data.toy_corpus().read_bytes())
streams = tokenize_records(records)
vocab = top_terms(filter_terms(build_vocabulary(streams), 3), 60)
model = fit(build_table(streams, vocab))

texts = {r.record_id: r.raw_text for r in records}
names = {k: " ".join(v.split("Title:")[-1].split("\n")[0].split()) for k, v in texts.items()}
docs = records_from_model(model, names, texts)

buf = io.BytesIO()
export_xml(docs, buf)
xml = buf.getvalue()
print(xml.decode()[:400])

###############################################################################
# Parsing and re-exporting gives the same bytes.

again = io.BytesIO()
export_xml(parse_xml(xml), again)
print("byte-stable:", again.getvalue() == xml)

###############################################################################
# Records near the term "cinnamon" on the factor plane.

box = center_box(model, "cinnamon", 1.0, 1.0)
hits = bbox_query(parse_xml(xml), box)
print(f"{len(hits)} records in {box}")
for rid in hits[:8]:
    print(f"  {rid}  {names[rid]}")
