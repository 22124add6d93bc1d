# %% [markdown]
# # The EPR pair, classical and quantum
#
# Alice measures Q1. For a classical correlated pair every joint
# distribution of (Alice, Bob) observables updates by conditioning. For the
# Bell state the (P1, P2) correlation is erased instead.

# %%
from wignerepr import Scenario, mlocality_check, no_communication_check, run_scenario

probes = [("Q1", "Q2"), ("Q1", "P2"), ("P1", "Q2"), ("P1", "P2")]

for kind in ("classical", "quantum"):
    trace = run_scenario(Scenario.measure(kind, ("Q1", 0)))
    print(f"--- {kind}")
    for probe in probes:
        print(mlocality_check(trace, probe).summary())

# %% [markdown]
# Bob alone cannot tell that anything happened: averaged over Alice's
# outcomes his marginals are unchanged.

# %%
for measured in ("Q1", "P1"):
    r = no_communication_check("quantum", measured)
    print(measured, "no-communication holds:", r.ok)
    for obs, dist in r.averaged.items():
        print(f"  averaged P({obs}) = {dist.probs}")

# %% [markdown]
# Two consecutive classical measurements pin down both of Bob's variables.

# %%
trace = run_scenario(Scenario.measure("classical", ("Q1", 1), ("P1", 0)))
for step in trace.steps:
    nz = [(o, step.state[o]) for o in step.state.outcomes() if step.state[o]]
    print(step.label, nz)
