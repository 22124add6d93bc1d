"""Observables and discrete joint distributions over binary outcomes."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import DomainError

__all__ = ["ObservableId", "JointDistribution", "CollapseEvent", "PROB_FLOOR", "NORM_TOL"]

#: Entries below this are rejected; entries in ``[PROB_FLOOR, 0)`` are clamped to 0.
PROB_FLOOR = -1e-12
NORM_TOL = 1e-10

_OBS_RE = re.compile(r"^\s*([QqPp])\s*(\d+)\s*$")


@dataclass(frozen=True, order=True)
class ObservableId:
    """Discrete position (``Q``) or momentum (``P``) of qubit ``subsystem`` (1-based)."""

    subsystem: int
    axis: str

    def __post_init__(self):
        axis = str(self.axis).upper()
        if axis not in ("Q", "P"):
            raise DomainError(f"axis must be 'Q' or 'P', got {self.axis!r}")
        if int(self.subsystem) < 1:
            raise DomainError(f"subsystem index must be >= 1, got {self.subsystem}")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "subsystem", int(self.subsystem))

    @classmethod
    def parse(cls, text):
        """Parse names such as ``"Q1"`` or ``"p2"``."""
        if isinstance(text, ObservableId):
            return text
        m = _OBS_RE.match(str(text))
        if not m:
            raise DomainError(f"cannot parse observable {text!r}; expected e.g. Q1 or P2")
        return cls(int(m.group(2)), m.group(1))

    def conjugate(self):
        return ObservableId(self.subsystem, "P" if self.axis == "Q" else "Q")

    def __str__(self):
        return f"{self.axis}{self.subsystem}"

    def to_json(self):
        return {"subsystem": self.subsystem, "axis": self.axis}


def _var_to_json(v):
    return v.to_json() if isinstance(v, ObservableId) else str(v)


def _var_from_json(v):
    if isinstance(v, dict):
        return ObservableId(v["subsystem"], v["axis"])
    return str(v)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Probability table over binary outcomes of an ordered tuple of variables.

    ``probs[x1, x2, ...]`` is the probability of the outcome tuple; flat
    serialisation uses C (lexicographic) order. Variables are
    :class:`ObservableId` instances or plain strings.

    With ``quasi=True`` the table is only required to be normalised; this is
    used for tables derived from Wigner functions, which may be negative.
    """

    variables: tuple
    probs: np.ndarray
    quasi: bool = False

    def __post_init__(self):
        variables = tuple(self.variables)
        if len(set(variables)) != len(variables):
            raise DomainError(f"duplicate variables in {variables}")
        p = np.array(self.probs, dtype=float)
        if p.shape != (2,) * len(variables):
            p = p.reshape((2,) * len(variables))
        total = p.sum()
        if abs(total - 1.0) > NORM_TOL:
            raise DomainError(f"distribution is not normalised (sum {total:.12g})")
        if not self.quasi:
            if p.min(initial=0.0) < PROB_FLOOR:
                raise DomainError(f"negative probability {p.min():.3g}")
            if p.min(initial=0.0) < 0:
                p = np.clip(p, 0.0, None)
                p = p / p.sum()
        p.setflags(write=False)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "probs", p)

    @classmethod
    def delta(cls, variables, outcome):
        """Point mass at the outcome tuple ``outcome``."""
        p = np.zeros((2,) * len(variables))
        p[tuple(outcome)] = 1.0
        return cls(tuple(variables), p)

    @classmethod
    def uniform(cls, variables):
        k = len(variables)
        return cls(tuple(variables), np.full((2,) * k, 0.5**k))

    def index(self, var):
        if isinstance(var, str) and not any(v == var for v in self.variables):
            try:
                var = ObservableId.parse(var)
            except DomainError:
                pass
        try:
            return self.variables.index(var)
        except ValueError:
            raise DomainError(f"unknown variable {var} (have {self.names()})") from None

    def names(self):
        return [str(v) for v in self.variables]

    def __getitem__(self, outcome):
        return float(self.probs[outcome])

    def outcomes(self):
        return product((0, 1), repeat=len(self.variables))

    def marginal(self, keep):
        """Sum out every variable not in ``keep``; the result follows ``keep``'s order."""
        if not keep:
            raise DomainError("marginal needs at least one variable to keep")
        idx = [self.index(v) for v in keep]
        if len(set(idx)) != len(idx):
            raise DomainError("marginal variables must be distinct")
        drop = tuple(i for i in range(len(self.variables)) if i not in idx)
        p = self.probs.sum(axis=drop) if drop else self.probs
        kept_order = sorted(idx)
        p = np.transpose(p, [kept_order.index(i) for i in idx])
        return JointDistribution(tuple(self.variables[i] for i in idx), p, self.quasi)

    def max_deviation(self, other):
        """Max-norm distance to ``other`` after aligning variable order."""
        aligned = other.marginal(self.variables)
        return float(np.max(np.abs(self.probs - aligned.probs)))

    def allclose(self, other, atol=1e-12):
        return self.max_deviation(other) <= atol

    def to_json(self):
        return {
            "variables": [_var_to_json(v) for v in self.variables],
            "probs": [float(x) for x in self.probs.ravel()],
        }

    @classmethod
    def from_json(cls, data, quasi=False):
        variables = tuple(_var_from_json(v) for v in data["variables"])
        probs = np.asarray(data["probs"], dtype=float)
        if probs.size != 2 ** len(variables):
            raise DomainError(
                f"expected {2 ** len(variables)} probabilities, got {probs.size}"
            )
        return cls(variables, probs.reshape((2,) * len(variables)), quasi)

    def __repr__(self):
        return f"JointDistribution({self.names()}, {self.probs.ravel().tolist()})"


@dataclass(frozen=True)
class CollapseEvent:
    """A single measurement: which variable, the observed bit and its prior probability."""

    variable: object
    outcome: int
    prior_prob: float

    def to_json(self):
        return {
            "variable": _var_to_json(self.variable),
            "outcome": int(self.outcome),
            "prior_prob": float(self.prior_prob),
        }

    @classmethod
    def from_json(cls, data):
        return cls(_var_from_json(data["variable"]), int(data["outcome"]), float(data["prior_prob"]))
