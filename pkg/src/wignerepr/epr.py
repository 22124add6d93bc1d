"""Scripted EPR scenarios for a classical correlated pair and the Bell state.

A scenario is a list of measurements made by Alice (qubit 1, unless the plan
says otherwise). Running it produces a :class:`ScenarioTrace` recording the
state before and after each collapse: a :class:`JointDistribution` for the
classical pair, a :class:`WignerFunction` for the quantum pair.

:func:`mlocality_check` compares, for a pair of simultaneously measurable
probe observables, the distribution actually found after the measurement
with the one predicted by classically conditioning the pre-measurement state
on the observed outcome.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .collapse import classic_collapse, collapse_table, quantum_collapse, sample_outcome
from .distributions import CollapseEvent, JointDistribution, ObservableId
from .errors import DomainError
from .phasespace import WignerFunction, marginal, wigner, wigner_variables
from .qstate import bell_state

__all__ = [
    "MLOCALITY_TOL",
    "PlanStep",
    "Scenario",
    "TraceStep",
    "ScenarioTrace",
    "MLocalityReport",
    "NoCommunicationReport",
    "classical_epr_initial",
    "quantum_epr_initial",
    "run_scenario",
    "mlocality_check",
    "no_communication_check",
    "sample_first_outcomes",
]

MLOCALITY_TOL = 1e-9

CLASSICAL_VARIABLES = wigner_variables(2)  # Q1, P1, Q2, P2

# step names follow the a/b/c/d convention: b after Q1, c after P1, d after both
_STEP_LABELS = {
    frozenset(): "a",
    frozenset({"Q1"}): "b",
    frozenset({"P1"}): "c",
    frozenset({"Q1", "P1"}): "d",
}


def classical_epr_initial():
    """Perfectly correlated classical pair, ``delta(q1, q2) delta(p1, p2) / 4``."""
    p = np.zeros((2, 2, 2, 2))
    for q in (0, 1):
        for mom in (0, 1):
            p[q, mom, q, mom] = 0.25
    return JointDistribution(CLASSICAL_VARIABLES, p)


def quantum_epr_initial():
    return wigner(bell_state())


@dataclass(frozen=True)
class PlanStep:
    """One measurement: a fixed ``outcome`` bit, or a ``seed`` to sample it."""

    observable: ObservableId
    outcome: int | None = None
    seed: int | None = None
    companion_axis: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "observable", ObservableId.parse(self.observable))
        if (self.outcome is None) == (self.seed is None):
            raise DomainError("plan step needs exactly one of outcome or seed")
        if self.outcome is not None and self.outcome not in (0, 1):
            raise DomainError(f"outcome must be 0 or 1, got {self.outcome}")

    def to_json(self):
        d = self.observable.to_json()
        if self.outcome is not None:
            d["outcome"] = self.outcome
        else:
            d["seed"] = self.seed
        if self.companion_axis is not None:
            d["companion"] = self.companion_axis
        return d

    @classmethod
    def from_json(cls, data):
        return cls(
            ObservableId(data["subsystem"], data["axis"]),
            data.get("outcome"),
            data.get("seed"),
            data.get("companion"),
        )


@dataclass(frozen=True)
class Scenario:
    kind: str
    plan: tuple = ()

    def __post_init__(self):
        if self.kind not in ("classical", "quantum"):
            raise DomainError(f"scenario kind must be 'classical' or 'quantum', got {self.kind!r}")
        object.__setattr__(self, "plan", tuple(self.plan))

    @classmethod
    def measure(cls, kind, *steps, seed=None):
        """Convenience constructor: ``Scenario.measure("quantum", ("Q1", 0))``.

        A step given as a bare observable is sampled using ``seed``.
        """
        plan = []
        for i, step in enumerate(steps):
            if isinstance(step, PlanStep):
                plan.append(step)
            elif isinstance(step, (tuple, list)):
                plan.append(PlanStep(step[0], step[1]))
            else:
                if seed is None:
                    raise DomainError(f"step {step} has no outcome and no seed was given")
                plan.append(PlanStep(step, seed=_step_seed(seed, i)))
        return cls(kind, plan)

    def to_json(self):
        return {"kind": self.kind, "plan": [s.to_json() for s in self.plan]}

    @classmethod
    def from_json(cls, data):
        return cls(data["kind"], [PlanStep.from_json(s) for s in data["plan"]])


def _step_seed(master, i):
    return int(np.random.SeedSequence([int(master), i]).generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class TraceStep:
    label: str
    state: object
    event: CollapseEvent | None = None

    def to_json(self):
        if isinstance(self.state, WignerFunction):
            state = {"type": "wigner", **self.state.to_json()}
        else:
            state = {"type": "joint", **self.state.to_json()}
        return {
            "label": self.label,
            "state": state,
            "event": None if self.event is None else self.event.to_json(),
        }

    @classmethod
    def from_json(cls, data):
        s = dict(data["state"])
        kind = s.pop("type")
        state = WignerFunction.from_json(s) if kind == "wigner" else JointDistribution.from_json(s)
        event = data.get("event")
        return cls(data["label"], state, None if event is None else CollapseEvent.from_json(event))


@dataclass(frozen=True)
class ScenarioTrace:
    kind: str
    steps: tuple

    def __len__(self):
        return len(self.steps)

    def __getitem__(self, key):
        if isinstance(key, str):
            for s in self.steps:
                if s.label == key:
                    return s
            raise KeyError(key)
        return self.steps[key]

    @property
    def labels(self):
        return [s.label for s in self.steps]

    @property
    def final(self):
        return self.steps[-1].state

    def to_json(self):
        return {"kind": self.kind, "steps": [s.to_json() for s in self.steps]}

    @classmethod
    def from_json(cls, data):
        return cls(data["kind"], tuple(TraceStep.from_json(s) for s in data["steps"]))


def _label(measured, used, index):
    label = _STEP_LABELS.get(frozenset(measured))
    if label is None or label in used:
        label = f"s{index}"
    return label


def _prior_marginal(kind, state, obs):
    if kind == "classical":
        return state.marginal([obs])
    return marginal(state, [obs])


def run_scenario(scenario, initial=None):
    """Apply each planned measurement in turn and record every state.

    ``initial`` overrides the starting state: a :class:`JointDistribution`
    over ``(Q1, P1, Q2, P2)`` for classical scenarios, or a
    :class:`WignerFunction` for quantum ones. Defaults are
    :func:`classical_epr_initial` and the Bell-state Wigner function.

    Raises
    ------
    ImpossibleOutcomeError
        If a planned outcome has zero probability in the current state.
    """
    kind = scenario.kind
    if initial is None:
        initial = classical_epr_initial() if kind == "classical" else quantum_epr_initial()
    state = initial
    steps = [TraceStep("a", state)]
    measured = set()
    for i, step in enumerate(scenario.plan, start=1):
        obs = step.observable
        prior = _prior_marginal(kind, state, obs)
        if step.outcome is None:
            event = sample_outcome(prior, obs, step.seed)
        else:
            event = CollapseEvent(obs, step.outcome, float(prior.probs[step.outcome]))
        if kind == "classical":
            state = classic_collapse(state, obs, event.outcome)
        else:
            state = quantum_collapse(state, obs, event.outcome, step.companion_axis)
        measured.add(str(obs))
        label = _label(measured, {s.label for s in steps}, i)
        steps.append(TraceStep(label, state, event))
    return ScenarioTrace(kind, tuple(steps))


def _check_probe(probe):
    obs = []
    for o in probe:
        o = ObservableId.parse(o)
        if o not in obs:
            obs.append(o)
    subs = [o.subsystem for o in obs]
    if len(set(subs)) != len(subs):
        raise DomainError(
            f"probe {[str(o) for o in obs]} is not simultaneously measurable "
            "(different axes on the same subsystem)"
        )
    return tuple(obs)


def _quasi_joint(state):
    """The full table over ``(Q1, P1, Q2, ...)``; a Wigner table is used as a quasi-distribution."""
    if isinstance(state, WignerFunction):
        return wigner_variables(state.num_qubits), state.values
    return state.variables, state.probs


def _probe_marginal(state, probe):
    if isinstance(state, WignerFunction):
        return marginal(state, probe)
    return state.marginal(probe)


def _classic_prediction(state, probe, event):
    variables, table = _quasi_joint(state)
    axis = variables.index(event.variable)
    updated, _ = collapse_table(table, axis, event.outcome, event.variable)
    quasi = JointDistribution(variables, updated, quasi=True)
    pred = quasi.marginal(probe)
    if pred.probs.min() >= -1e-12:
        pred = JointDistribution(pred.variables, pred.probs)
    return pred


@dataclass(frozen=True)
class MLocalityReport:
    """Side-by-side comparison behind an m-locality verdict."""

    axis_pair: tuple
    event: CollapseEvent
    before: JointDistribution
    classic_prediction: JointDistribution
    after: JointDistribution
    max_deviation: float
    tolerance: float = MLOCALITY_TOL

    @property
    def verdict(self):
        return "non-m-local" if self.max_deviation > self.tolerance else "m-local"

    @property
    def is_mlocal(self):
        return self.verdict == "m-local"

    def summary(self):
        pair = ",".join(str(o) for o in self.axis_pair)
        return (
            f"probe {pair} after {self.event.variable}={self.event.outcome}: "
            f"{self.verdict} (deviation {self.max_deviation:.6g})"
        )

    def to_json(self):
        return {
            "axis_pair": [o.to_json() for o in self.axis_pair],
            "event": self.event.to_json(),
            "before": self.before.to_json(),
            "classic_prediction": self.classic_prediction.to_json(),
            "after": self.after.to_json(),
            "max_deviation": self.max_deviation,
            "verdict": self.verdict,
        }


def mlocality_check(trace, probe, step=1):
    """Test whether measurement ``step`` updated the probe distribution classically.

    The prediction conditions the full pre-measurement table on the observed
    outcome and then marginalises onto ``probe``. For a quantum trace the
    Wigner function plays the role of the joint table; when the measured
    variable is itself in ``probe`` this reduces to a classic collapse of the
    probe's own joint distribution.

    Raises
    ------
    DomainError
        If the probe pairs two different axes of the same qubit, or the trace
        has fewer than ``step + 1`` states.
    """
    probe = _check_probe(probe)
    if len(trace) < 2 or not 1 <= step < len(trace):
        raise DomainError(f"trace of length {len(trace)} has no measurement step {step}")
    prev, cur = trace[step - 1], trace[step]
    before = _probe_marginal(prev.state, probe)
    after = _probe_marginal(cur.state, probe)
    pred = _classic_prediction(prev.state, probe, cur.event)
    dev = float(np.max(np.abs(after.probs - pred.probs)))
    return MLocalityReport(probe, cur.event, before, pred, after, dev)


@dataclass(frozen=True)
class NoCommunicationReport:
    """Bob's single-observable marginals before and after Alice's measurement.

    ``averaged`` maps each of Bob's observables to the outcome-averaged
    post-measurement marginal; ``conditional`` maps ``(observable, outcome)``
    to the post-measurement marginal and ``predicted`` to its classically
    conditioned value.
    """

    measured: ObservableId
    before: dict
    averaged: dict
    conditional: dict
    predicted: dict
    average_deviation: float
    conditional_deviation: float
    tolerance: float = 1e-10
    priors: dict = field(default_factory=dict)

    @property
    def ok(self):
        return (
            self.average_deviation <= self.tolerance
            and self.conditional_deviation <= self.tolerance
        )

    def to_json(self):
        return {
            "measured": self.measured.to_json(),
            "priors": {str(k): v for k, v in self.priors.items()},
            "before": {str(k): v.to_json() for k, v in self.before.items()},
            "averaged": {str(k): v.to_json() for k, v in self.averaged.items()},
            "conditional": {f"{k}|{o}": v.to_json() for (k, o), v in self.conditional.items()},
            "predicted": {f"{k}|{o}": v.to_json() for (k, o), v in self.predicted.items()},
            "average_deviation": self.average_deviation,
            "conditional_deviation": self.conditional_deviation,
            "ok": self.ok,
        }


def no_communication_check(kind="quantum", measured="Q1", companion_axis=None, initial=None):
    """Check that Alice's measurement cannot signal to Bob.

    For each admissible outcome the scenario is run; Bob's marginals
    ``P(q)``, ``P(p)`` (on the unmeasured qubit), weighted by the outcome
    priors, must equal the pre-measurement ones, and each conditional
    marginal must equal its classic update.
    """
    measured = ObservableId.parse(measured)
    bob = 2 if measured.subsystem == 1 else 1
    bob_obs = (ObservableId(bob, "Q"), ObservableId(bob, "P"))
    if initial is None:
        initial = classical_epr_initial() if kind == "classical" else quantum_epr_initial()
    prior = _prior_marginal(kind, initial, measured)
    before = {o: _probe_marginal(initial, (o,)) for o in bob_obs}
    averaged = {o: np.zeros(2) for o in bob_obs}
    conditional, predicted, priors = {}, {}, {}
    avg_dev = cond_dev = 0.0
    for outcome in (0, 1):
        p = float(prior.probs[outcome])
        priors[outcome] = p
        if p <= 1e-12:
            continue
        step = PlanStep(measured, outcome, companion_axis=companion_axis)
        trace = run_scenario(Scenario(kind, (step,)), initial)
        for o in bob_obs:
            after = _probe_marginal(trace.final, (o,))
            pred = _classic_prediction(initial, (o,), trace[1].event)
            conditional[(o, outcome)] = after
            predicted[(o, outcome)] = pred
            averaged[o] = averaged[o] + p * after.probs
            cond_dev = max(cond_dev, float(np.max(np.abs(after.probs - pred.probs))))
    averaged = {o: JointDistribution((o,), v) for o, v in averaged.items()}
    for o in bob_obs:
        avg_dev = max(avg_dev, float(np.max(np.abs(averaged[o].probs - before[o].probs))))
    return NoCommunicationReport(
        measured, before, averaged, conditional, predicted, avg_dev, cond_dev, priors=priors
    )


def sample_first_outcomes(kind, measured, runs, master_seed, initial=None):
    """Outcomes of ``runs`` independent seeded single-measurement scenarios.

    Per-run seeds are spawned from ``master_seed`` so the array is
    reproducible bit for bit. Returns an integer array of 0/1 outcomes.
    """
    measured = ObservableId.parse(measured)
    if initial is None:
        initial = classical_epr_initial() if kind == "classical" else quantum_epr_initial()
    prior = _prior_marginal(kind, initial, measured)
    children = np.random.SeedSequence(master_seed).spawn(runs)
    return np.array([sample_outcome(prior, measured, s).outcome for s in children], dtype=int)
