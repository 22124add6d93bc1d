# %% [markdown]
# # Discrete phase space of two qubits
#
# Build the Bell state, look at its Wigner table, and compare it with the
# table of its partial transpose.

# %%
import numpy as np

from wignerepr import bell_state, line_marginal, partial_transpose, reconstruct, wigner
from wignerepr.errors import ValidationError
from wignerepr.phasespace import inner_product

rho = bell_state()
W = wigner(rho)
print("Bell state, rows q1q2, columns p1p2")
print(W.to_ascii())

# %% [markdown]
# Four entries are negative: the table is a quasi-probability. Its line sums
# are still ordinary probabilities.

# %%
for axes in ("QQ", "QP", "PQ", "PP"):
    P = line_marginal(W, axes)
    print(P.names(), P.probs.ravel())

# %% [markdown]
# Purity from the table alone, N * sum W^2:

# %%
print("purity", inner_product(W, W))

# %% [markdown]
# Transposing qubit 2 gives a table with no negative entries, identical to a
# classical perfectly correlated pair, yet the operator behind it is not a
# state.

# %%
Wt = wigner(partial_transpose(rho, 2))
print(Wt.to_ascii())
try:
    reconstruct(Wt)
except ValidationError as exc:
    print("not a density matrix:", exc)
    print("eigenvalues", np.round(np.linalg.eigvalsh(exc.matrix), 12))
