"""
Neighbours and clusters in factor space
=======================================

With every factor kept, squared Euclidean distance between two records'
coordinates is their chi-squared profile distance, so neighbour searches
and clustering can work directly on the coordinates.
"""

from factorspace import data
from factorspace.ca import fit
from factorspace.corpus import build_vocabulary, filter_terms, split_records, tokenize_records, top_terms
from factorspace.matrix import build_table
from factorspace.neighbors import nearest, nn_chain_cluster, pair_links, reciprocal_pairs

records = split_records(data.toy_corpus().read_bytes())
streams = tokenize_records(records)
vocab = top_terms(filter_terms(build_vocabulary(streams), 3), 60)
model = fit(build_table(streams, vocab))
print(f"{len(model.row_labels)} records, {model.rank} factors")

###############################################################################
# The three nearest records to the first one.

for label, d2 in nearest(model, "r000001", k=3).matches:
    print(f"  {label}  {d2:.4f}")

###############################################################################
# Pairs of records that are each other's nearest neighbour. Agglomerative
# clustering merges such pairs first, which is what makes the
# nearest-neighbour chain algorithm work.

pairs = reciprocal_pairs(model)
print(f"{len(pairs)} reciprocal pairs, e.g. {pairs[:3]}")

dendro = nn_chain_cluster(model, "ward")
for m in dendro.merges[-3:]:
    print(f"merge {m.a} + {m.b} at height {m.height:.3f} (size {m.size})")

###############################################################################
# Terms on the plane of factors 1 and 2: how far apart are related words?

report = pair_links(model, [("pepper", "salt"), ("cocoa", "flour"), ("onion", "onions")])
for a, b, d in report.pairs:
    print(f"  {a}/{b}: {d:.3f}")
for a, b, msg in report.errors:
    print(f"  {a}/{b}: {msg}")
