"""
Term frequencies and the rank-frequency law
===========================================

Split the bundled toy corpus into records, count terms, and fit a line to
the rank-frequency curve in log-log space.
"""

import numpy as np

from factorspace import data
from factorspace.corpus import build_vocabulary, split_records, tokenize_records
from factorspace.powerlaw import RankFrequency, auto_regime, fit_loglog, rank_frequency

records = split_records(data.toy_corpus().read_bytes())
print(f"{len(records)} records")

# tokens are alphabetic runs, lowercased; anything touching a digit is dropped
streams = tokenize_records(records)
vocab = build_vocabulary(streams)
print(f"{len(vocab)} terms, {vocab.total} tokens")
for e in vocab.entries[:10]:
    print(f"  {e.rank:3d} {e.term:<12s} {e.frequency}")

###############################################################################
# The fit uses the ranks before the tail flattens into long runs of tied
# frequencies.

rf = rank_frequency(vocab)
print("regime", auto_regime(rf))
fit = fit_loglog(rf)
print(f"slope {fit.slope:.3f}  R^2 {fit.r_squared:.3f}  over {fit.n_points} ranks")

###############################################################################
# A synthetic curve with a known exponent comes back almost exactly.

ranks = np.arange(1, 201)
synthetic = np.round(1e6 * ranks ** -2.0).astype(int)
exact = fit_loglog(RankFrequency(ranks, synthetic))
print(f"synthetic beta=2: slope {exact.slope:.4f}")
