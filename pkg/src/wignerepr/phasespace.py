"""Discrete phase space of ``n`` qubits and the Wigner transform.

A phase point is a tuple of per-qubit pairs ``((q1, p1), ..., (qn, pn))``.
Wigner tables are stored as real arrays of shape ``(2,) * 2n`` with axes
ordered ``q1, p1, q2, p2, ...``; flattening in C order therefore gives the
lexicographic point order used for serialisation.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import reduce
from itertools import product

import numpy as np

from .distributions import JointDistribution, ObservableId
from .errors import ConsistencyError, DomainError
from .qstate import DensityMatrix, _as_matrix, _num_qubits, validate_density

__all__ = [
    "MAX_QUBITS",
    "WignerFunction",
    "phase_points",
    "single_qubit_phase_point",
    "phase_point_operator",
    "wigner",
    "reconstruct",
    "inner_product",
    "marginal",
    "line_marginal",
    "wigner_variables",
]

#: Default cap on the number of qubits handled by the dense transforms.
MAX_QUBITS = 8

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def single_qubit_phase_point(q, p):
    """Phase-point operator ``(I + (-1)^q Z + (-1)^p X + (-1)^(q+p) Y) / 2``.

    >>> single_qubit_phase_point(0, 0)
    array([[1. +0.j , 0.5-0.5j],
           [0.5+0.5j, 0. +0.j ]])
    """
    if q not in (0, 1) or p not in (0, 1):
        raise DomainError(f"phase-space coordinates must be bits, got ({q}, {p})")
    sq, sp = (-1) ** q, (-1) ** p
    return 0.5 * (_I + sq * _Z + sp * _X + sq * sp * _Y)


# _A1[q, p] is the 2x2 operator at (q, p)
_A1 = np.array([[single_qubit_phase_point(q, p) for p in (0, 1)] for q in (0, 1)])


def phase_points(n):
    """All ``4**n`` phase points of ``n`` qubits in lexicographic order."""
    for flat in product((0, 1), repeat=2 * n):
        yield tuple((flat[2 * k], flat[2 * k + 1]) for k in range(n))


def _check_point(alpha):
    alpha = tuple(tuple(c) for c in alpha)
    for c in alpha:
        if len(c) != 2 or c[0] not in (0, 1) or c[1] not in (0, 1):
            raise DomainError(f"invalid phase point {alpha}")
    return alpha


def phase_point_operator(alpha):
    """Tensor product of the single-qubit phase-point operators of ``alpha``."""
    alpha = _check_point(alpha)
    return reduce(np.kron, (_A1[q, p] for q, p in alpha))


def _check_n(n, max_qubits):
    cap = MAX_QUBITS if max_qubits is None else max_qubits
    if n > cap:
        raise DomainError(f"{n} qubits exceeds the configured cap of {cap}")


def _contract_subscripts(n):
    # ket indices 0..n-1, bra indices n..2n-1, phase-space indices 2n..4n-1
    rho = list(range(2 * n))
    ops = [[2 * n + 2 * k, 2 * n + 2 * k + 1, n + k, k] for k in range(n)]
    out = list(range(2 * n, 4 * n))
    return rho, ops, out


@dataclass(frozen=True, eq=False)
class WignerFunction:
    """Real Wigner table over the ``4**n`` phase points of ``n`` qubits."""

    num_qubits: int
    values: np.ndarray

    def __post_init__(self):
        n = int(self.num_qubits)
        v = np.array(self.values, dtype=float)
        if v.size != 4**n:
            raise DomainError(f"{n} qubits need {4**n} Wigner values, got {v.size}")
        v = v.reshape((2,) * (2 * n))
        v.setflags(write=False)
        object.__setattr__(self, "num_qubits", n)
        object.__setattr__(self, "values", v)

    @property
    def dim(self):
        return 2**self.num_qubits

    def __getitem__(self, alpha):
        """Value at a phase point, given as ``((q1, p1), ...)`` or a flat tuple."""
        flat = tuple(np.ravel(alpha))
        return float(self.values[flat])

    def total(self):
        return float(self.values.sum())

    def flat(self):
        return self.values.ravel()

    def points(self):
        return phase_points(self.num_qubits)

    def allclose(self, other, atol=1e-12):
        if isinstance(other, WignerFunction):
            other = other.values
        return bool(np.max(np.abs(self.values - np.asarray(other))) <= atol)

    def __add__(self, other):
        return WignerFunction(self.num_qubits, self.values + other.values)

    def __mul__(self, c):
        return WignerFunction(self.num_qubits, c * self.values)

    __rmul__ = __mul__

    def grid(self):
        """``2**n x 2**n`` array with rows labelled by ``q1..qn`` and columns by ``p1..pn``."""
        n = self.num_qubits
        order = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
        return self.values.transpose(order).reshape(self.dim, self.dim)

    def to_json(self):
        return {"num_qubits": self.num_qubits, "values": [float(x) for x in self.flat()]}

    @classmethod
    def from_json(cls, data):
        return cls(int(data["num_qubits"]), np.asarray(data["values"], dtype=float))

    def to_csv(self):
        n = self.num_qubits
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = [f"{c}{k}" for k in range(1, n + 1) for c in ("q", "p")]
        w.writerow(header + ["value"])
        for flat, value in zip(product((0, 1), repeat=2 * n), self.flat()):
            w.writerow(list(flat) + [repr(float(value))])
        return buf.getvalue()

    def to_ascii(self, decimals=4):
        n = self.num_qubits
        g = self.grid() + 0.0  # drop negative zeros
        width = decimals + 3
        labels = ["".join(map(str, bits)) for bits in product((0, 1), repeat=n)]
        corner = "q\\p"
        lw = max(len(corner), n)
        lines = [corner.ljust(lw) + " " + " ".join(lab.rjust(width) for lab in labels)]
        for lab, row in zip(labels, g):
            cells = " ".join(f"{x: {width}.{decimals}f}" for x in row)
            lines.append(lab.ljust(lw) + " " + cells)
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"WignerFunction(num_qubits={self.num_qubits}, values={self.flat().tolist()})"


def wigner(rho, max_qubits=None):
    """Wigner function ``W(alpha) = tr[rho A(alpha)] / N``.

    ``rho`` may be a :class:`DensityMatrix` or any Hermitian ``2**n``-square
    array (e.g. a partially transposed state).

    Raises
    ------
    ConsistencyError
        If any Wigner value has an imaginary part above ``1e-9``, which
        happens when ``rho`` is not Hermitian.
    """
    m = _as_matrix(rho)
    n = rho.num_qubits if isinstance(rho, DensityMatrix) else _num_qubits(m.shape[0])
    _check_n(n, max_qubits)
    N = 2**n
    rho_idx, op_idx, out_idx = _contract_subscripts(n)
    args = [m.reshape((2,) * (2 * n)), rho_idx]
    for sub in op_idx:
        args += [_A1, sub]
    w = np.einsum(*args, out_idx, optimize=True) / N
    resid = float(np.max(np.abs(w.imag)))
    if resid > 1e-9:
        raise ConsistencyError(f"Wigner table has imaginary residue {resid:.3g}")
    return WignerFunction(n, w.real)


def reconstruct(W, validate=True):
    """Operator ``sum_alpha W(alpha) A(alpha)`` with the given Wigner table.

    With ``validate=True`` the result is checked and returned as a
    :class:`DensityMatrix`; a non-physical table raises
    :class:`~wignerepr.errors.ValidationError` whose ``matrix`` attribute
    holds the reconstructed operator. With ``validate=False`` the raw
    array is returned.
    """
    n = W.num_qubits
    N = 2**n
    _, op_idx, out_idx = _contract_subscripts(n)
    # ket index k pairs with A[..., k, :], bra index n+k with A[..., :, k]
    args = [W.values.astype(complex), out_idx]
    for k, (a, b, _, _) in enumerate(op_idx):
        args += [_A1, [a, b, k, n + k]]
    m = np.einsum(*args, list(range(2 * n)), optimize=True).reshape(N, N)
    if not validate:
        return m
    return validate_density(m, n)


def inner_product(W, W2):
    """``N * sum_alpha W(alpha) W2(alpha)``; equals ``tr(rho rho2)``."""
    if W.num_qubits != W2.num_qubits:
        raise DomainError(f"qubit counts differ ({W.num_qubits} vs {W2.num_qubits})")
    return float(W.dim * np.sum(W.values * W2.values))


def wigner_variables(n):
    """Observables labelling the axes of an ``n``-qubit Wigner table, in order."""
    return tuple(ObservableId(k, a) for k in range(1, n + 1) for a in ("Q", "P"))


def _axis_of(obs):
    return 2 * (obs.subsystem - 1) + (0 if obs.axis == "Q" else 1)


def marginal(W, observables, quasi=False):
    """Sum ``W`` over every coordinate not named in ``observables``.

    At most one observable per qubit is allowed: summing a qubit's
    conjugate coordinate gives Born probabilities of the kept one, and
    summing both coordinates traces the qubit out.
    """
    obs = tuple(ObservableId.parse(o) for o in observables)
    if not obs:
        raise DomainError("need at least one observable")
    subs = [o.subsystem for o in obs]
    if len(set(subs)) != len(subs):
        raise DomainError(f"observables {[str(o) for o in obs]} are not simultaneously measurable")
    if max(subs) > W.num_qubits:
        raise DomainError(f"observable on qubit {max(subs)} of a {W.num_qubits}-qubit state")
    keep = [_axis_of(o) for o in obs]
    drop = tuple(a for a in range(2 * W.num_qubits) if a not in keep)
    p = W.values.sum(axis=drop)
    p = np.transpose(p, [sorted(keep).index(a) for a in keep])
    return JointDistribution(obs, p, quasi)


def line_marginal(W, axes):
    """Joint distribution of one observable per qubit, by summing over lines.

    ``axes`` lists the axis per qubit, e.g. ``"QP"`` for ``(Q1, P2)``.
    """
    axes = tuple(axes)
    if len(axes) != W.num_qubits:
        raise DomainError(f"need one axis per qubit ({W.num_qubits}), got {axes}")
    return marginal(W, [ObservableId(k + 1, a) for k, a in enumerate(axes)])

