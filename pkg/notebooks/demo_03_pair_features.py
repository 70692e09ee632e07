"""
The 43-feature vector of a pair and what swapping does to it
============================================================

Every pair maps to a fixed 43-slot vector.  Exchanging A and B permutes the
slots: directional features trade places with their twins, symmetric ones
stay put.  Training relies on this to double the data for free.
"""

import numpy as np

from cepairs.data_model import Pair, Variable, VariableKind, swap
from cepairs.features import FEATURE_NAMES, SWAP_PERMUTATION, SYMMETRIC_FEATURES, extract

rng = np.random.default_rng(2)
x = rng.exponential(size=500)
pair = Pair("demo", Variable(x, VariableKind.NUMERICAL),
            Variable(np.log1p(x) + 0.1 * rng.normal(size=500), VariableKind.NUMERICAL))

f = extract(pair)
for name, value in zip(FEATURE_NAMES, f):
    print(f"{name:>20s} {value: .5f}")

# The swapped pair's features are the same numbers, rearranged.
g = extract(swap(pair))
print("exact permutation:", np.array_equal(g, f[SWAP_PERMUTATION]))
print("symmetric slots:", sorted(SYMMETRIC_FEATURES))

# A categorical variable is handled through its frequency-ordered codes.
cat = Pair("mixed", Variable(rng.integers(0, 4, 300), VariableKind.CATEGORICAL),
           Variable(rng.normal(size=300), VariableKind.NUMERICAL))
print("mixed pair, first slots:", extract(cat)[:5])
