"""Classic and quantum measurement-collapse updates.

The classic update conditions a joint distribution on an observed value.
The quantum update goes through the joint distribution of one observable per
qubit: that distribution is conditioned classically and then turned back into
a Wigner function as a mixture of the product basis states ``|x1, y2>``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from .distributions import CollapseEvent, JointDistribution, ObservableId
from .errors import DomainError, ImpossibleOutcomeError, UnsupportedArityError
from .phasespace import WignerFunction, inner_product, wigner
from .qstate import basis_state_p, basis_state_q, density_from_vector, tensor

__all__ = [
    "JointDistribution",
    "ObservableId",
    "CollapseEvent",
    "marginal",
    "collapse_table",
    "classic_collapse",
    "basis_wigner",
    "joint_prob",
    "mix_from_probs",
    "quantum_collapse",
    "sample_outcome",
]

#: Outcomes whose prior probability is at or below this are treated as impossible.
IMPOSSIBLE_TOL = 1e-12


def marginal(P, keep):
    """Marginal of ``P`` on the variables in ``keep`` (in that order)."""
    return P.marginal(keep)


def collapse_table(table, axis, outcome, variable=None):
    """Condition a (quasi-)probability table on ``table[..., outcome, ...]``.

    Returns ``delta(x, outcome) * table / P(outcome)`` where ``x`` runs along
    ``axis``, together with the prior ``P(outcome)``.
    """
    if outcome not in (0, 1):
        raise DomainError(f"outcome must be 0 or 1, got {outcome}")
    table = np.asarray(table, dtype=float)
    slab = np.take(table, outcome, axis=axis)
    prior = float(slab.sum())
    if prior <= IMPOSSIBLE_TOL:
        raise ImpossibleOutcomeError(variable, outcome, prior)
    out = np.zeros_like(table)
    index = [slice(None)] * table.ndim
    index[axis] = outcome
    out[tuple(index)] = slab / prior
    return out, prior


def classic_collapse(P, var, outcome):
    """Update ``P`` after observing ``var = outcome``.

    The result is ``delta(var, outcome)`` times the conditional distribution
    of the remaining variables.

    Raises
    ------
    ImpossibleOutcomeError
        If the outcome has zero marginal probability.
    """
    i = P.index(var)
    table, _ = collapse_table(P.probs, i, outcome, P.variables[i])
    return JointDistribution(P.variables, table, P.quasi)


def _basis_vector(axis, x):
    return basis_state_q(x, 2) if axis == "Q" else basis_state_p(x, 2)


@lru_cache(maxsize=None)
def _basis_wigner_cached(key):
    vec = tensor(*[_basis_vector(axis, x)[:, None] for axis, x in key]).ravel()
    return wigner(density_from_vector(vec))


def basis_wigner(observables, outcomes):
    """Wigner function of the product eigenstate ``|x1, y2, ...>``.

    ``observables`` holds one observable per qubit, ordered by qubit.
    """
    obs = sorted(zip(observables, outcomes), key=lambda t: t[0].subsystem)
    key = tuple((o.axis, int(x)) for o, x in obs)
    return _basis_wigner_cached(key)


def _product_observables(W, observables):
    n = W.num_qubits
    if n not in (1, 2):
        raise UnsupportedArityError(f"product-basis collapse supports 1 or 2 qubits, got {n}")
    obs = tuple(ObservableId.parse(o) for o in observables)
    if sorted(o.subsystem for o in obs) != list(range(1, n + 1)):
        raise DomainError(
            f"need exactly one observable per qubit of a {n}-qubit state, got {[str(o) for o in obs]}"
        )
    return obs


def joint_prob(W, *observables):
    """Joint Born distribution of commuting observables from the inner-product rule.

    Computes ``P(x1, y2) = N * sum_alpha W_{|x1,y2>}(alpha) W(alpha)``, an
    independent route to the same table as
    :func:`~wignerepr.phasespace.line_marginal`.
    """
    obs = _product_observables(W, observables)
    p = np.zeros((2,) * len(obs))
    for outcome in product((0, 1), repeat=len(obs)):
        p[outcome] = inner_product(basis_wigner(obs, outcome), W)
    return JointDistribution(obs, p)


def mix_from_probs(P):
    """Wigner function of the mixture ``sum_x P(x) |x><x|`` over a product basis."""
    n = len(P.variables)
    obs = tuple(P.variables)
    if not all(isinstance(o, ObservableId) for o in obs) or sorted(
        o.subsystem for o in obs
    ) != list(range(1, n + 1)):
        raise DomainError(f"variables {P.names()} are not one observable per qubit")
    if n not in (1, 2):
        raise UnsupportedArityError(f"product-basis mixtures support 1 or 2 qubits, got {n}")
    values = np.zeros((2,) * (2 * n))
    for outcome in P.outcomes():
        prob = P.probs[outcome]
        if prob:
            values = values + prob * basis_wigner(obs, outcome).values
    return WignerFunction(n, values)


def quantum_collapse(W, measured, outcome, companion_axis=None):
    """Wigner function after measuring ``measured`` with result ``outcome``.

    For two qubits the update is
    ``W_b = sum_{x1,y2} delta(x1, outcome) P_a(y2 | outcome) W_{|x1,y2>}``
    where ``y2`` is ``companion_axis`` of the other qubit and the sum runs
    over both ``x1`` and ``y2``.

    ``companion_axis`` defaults to the measured axis. The result depends on
    it: measuring ``Q1`` on the Bell state with a ``Q`` companion gives
    ``|q q><q q|``, while a ``P`` companion gives ``|q><q| (x) I/2``.
    """
    measured = ObservableId.parse(measured)
    n = W.num_qubits
    if n == 1:
        obs = (measured,)
    elif n == 2:
        other = 2 if measured.subsystem == 1 else 1
        companion = ObservableId(other, companion_axis or measured.axis)
        obs = tuple(sorted((measured, companion), key=lambda o: o.subsystem))
    else:
        raise UnsupportedArityError(f"quantum collapse supports 1 or 2 qubits, got {n}")
    Pa = joint_prob(W, *obs)
    Pb = classic_collapse(Pa, measured, outcome)
    return mix_from_probs(Pb)


def sample_outcome(P, var, seed):
    """Draw ``var`` from its marginal by inverse CDF over the order (0, 1).

    ``seed`` is anything accepted by :func:`numpy.random.default_rng`.
    """
    m = P.marginal([var])
    p0 = float(m.probs[0])
    u = np.random.default_rng(seed).random()
    outcome = 0 if u < p0 else 1
    return CollapseEvent(m.variables[0], outcome, float(m.probs[outcome]))
