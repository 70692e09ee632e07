"""
How much does p(B | A) change with A?
=====================================

The variability features group the samples of B by the discretized value of
A and measure how much the per-group distributions differ once their location
is removed.  Under an additive-noise mechanism the groups look alike; in the
anticausal direction they usually do not.
"""

import numpy as np

from cepairs.data_model import Variable, VariableKind
from cepairs.preprocess import conditional_table
from cepairs.variability import bayes_error_probability, cds, conditional_moment_spreads

rng = np.random.default_rng(1)
cause = rng.uniform(-2, 2, 2000)
effect = cause**3 / 4 + 0.3 * rng.normal(size=2000)
A = Variable(cause, VariableKind.NUMERICAL)
B = Variable(effect, VariableKind.NUMERICAL)

# The conditional table holds one sorted probability vector per group.
table = conditional_table(A, B)
print("groups:", len(table.keys), " bins per group:", table.probs.shape[1])

# Conditional distribution similarity, both ways round.
print(f"CDS(B|A) = {cds(A, B):.4f}   CDS(A|B) = {cds(B, A):.4f}")

# Spread across groups of the conditional entropy, skewness and kurtosis.
hs, ss, ks = conditional_moment_spreads(A, B)
print(f"B given A: HS {hs:.3f}  SS {ss:.3f}  KS {ks:.3f}")
hs, ss, ks = conditional_moment_spreads(B, A)
print(f"A given B: HS {hs:.3f}  SS {ss:.3f}  KS {ks:.3f}")

# Identical groups, up to a shift, give zero.
base = rng.normal(size=50)
groups = Variable(np.repeat([0, 1, 2], 50), VariableKind.CATEGORICAL)
shifted = Variable(np.concatenate([base, base + 1.0, base - 2.0]), VariableKind.NUMERICAL)
print("CDS on shifted copies:", cds(groups, shifted))

# The error of the best guess of B from A.
print("EP(B|A) =", bayes_error_probability(A, B))
