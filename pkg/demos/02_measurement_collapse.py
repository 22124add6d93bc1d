# %% [markdown]
# # Classic versus quantum collapse on one qubit
#
# A classical particle with known (q, p) keeps its momentum distribution
# when q is measured. A qubit does not.

# %%
import numpy as np

from wignerepr import JointDistribution, classic_collapse, line_marginal, quantum_collapse, wigner
from wignerepr.qstate import random_pure_state

# %%
classical = JointDistribution(("q", "p"), [[0.4, 0.1], [0.1, 0.4]])
after = classic_collapse(classical, "q", 0)
print("classical P(p) after q=0:", after.marginal(["p"]).probs)

# %%
rng = np.random.default_rng(3)
rho = random_pure_state(1, rng)
W = wigner(rho)
print("qubit before")
print(W.to_ascii())
Wb = quantum_collapse(W, "Q1", 0)
print("qubit after Q=0")
print(Wb.to_ascii())
print("P(p) after:", line_marginal(Wb, "P").probs)
