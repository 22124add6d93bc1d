"""Qubit states and the operator-level primitives built on them.

Conventions
-----------
* Qubit 1 is the left (most significant) Kronecker factor, so for two
  qubits the basis index is ``k = 2*q1 + q2``.
* The conjugate basis is ``|p> = N**-0.5 * sum_q exp(+2j*pi*q*p/N) |q>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UnsupportedArityError, ValidationError

__all__ = [
    "ATOL",
    "PSD_FLOOR",
    "DensityMatrix",
    "DensityReport",
    "basis_state_q",
    "basis_state_p",
    "density_from_vector",
    "bell_state",
    "maximally_mixed",
    "tensor",
    "partial_transpose",
    "purity",
    "density_report",
    "validate_density",
    "random_pure_state",
    "random_density",
    "matrix_to_json",
    "matrix_from_json",
]

#: Hermiticity, trace and normalisation tolerance.
ATOL = 1e-9
#: Smallest eigenvalue still accepted as positive semidefinite.
PSD_FLOOR = -1e-9


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _num_qubits(dim):
    n = int(dim).bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise DomainError(f"dimension {dim} is not a power of two")
    return n


@dataclass(frozen=True)
class DensityReport:
    """Outcome of checking a matrix against the density-matrix invariants.

    ``violations`` maps the name of each failed invariant (``"hermiticity"``,
    ``"trace"``, ``"psd"``) to its measured defect: the largest entry of
    ``|m - m^H|``, the trace, and the minimum eigenvalue respectively.
    """

    hermiticity_defect: float
    trace: float
    min_eigenvalue: float
    violations: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.violations

    def describe(self):
        if self.ok:
            return "valid density matrix"
        parts = []
        for name, value in self.violations.items():
            if name == "hermiticity":
                parts.append(f"hermiticity violated (max |m - m^H| = {value:.3g})")
            elif name == "trace":
                parts.append(f"trace violated (trace {value:.6g})")
            else:
                parts.append(f"psd violated (eigenvalue {value:.6g})")
        return "; ".join(parts)

    def to_dict(self):
        return {
            "valid": self.ok,
            "hermiticity_defect": self.hermiticity_defect,
            "trace": self.trace,
            "min_eigenvalue": self.min_eigenvalue,
            "violations": dict(self.violations),
        }


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated ``2**n x 2**n`` density matrix.

    Construct through :func:`validate_density` (or the helpers such as
    :func:`bell_state`); the constructor itself does no checking.
    """

    matrix: np.ndarray
    num_qubits: int

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self.num_qubits == other.num_qubits and np.array_equal(
            self.matrix, other.matrix
        )

    def to_json(self):
        d = matrix_to_json(self.matrix)
        d["num_qubits"] = self.num_qubits
        return d

    @classmethod
    def from_json(cls, data):
        m = matrix_from_json(data)
        n = data.get("num_qubits")
        if n is None:
            n = _num_qubits(m.shape[0])
        return validate_density(m, n)


def _as_matrix(m):
    if isinstance(m, DensityMatrix):
        return m.matrix
    return np.asarray(m, dtype=complex)


def basis_state_q(q, N):
    """Computational basis vector ``|q>`` of an ``N``-dimensional space."""
    if not 0 <= q < N:
        raise DomainError(f"q={q} outside [0, {N})")
    v = np.zeros(N, dtype=complex)
    v[q] = 1.0
    return v


def basis_state_p(p, N):
    """Conjugate basis vector ``|p>``, the discrete Fourier transform of ``|q>``."""
    if not 0 <= p < N:
        raise DomainError(f"p={p} outside [0, {N})")
    q = np.arange(N)
    if N == 2:
        # exp(i*pi*q*p) is exactly (-1)**(q*p); avoid sin(pi) roundoff
        return ((-1.0) ** (q * p) / np.sqrt(2)).astype(complex)
    return np.exp(2j * np.pi * q * p / N) / np.sqrt(N)


def density_from_vector(psi, atol=ATOL):
    """Projector ``|psi><psi|`` of a normalised state vector."""
    psi = np.asarray(psi, dtype=complex).ravel()
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > atol:
        raise DomainError(f"state vector is not normalised (squared norm {norm2:.6g})")
    n = _num_qubits(psi.size)
    return DensityMatrix(np.outer(psi, psi.conj()), n)


def bell_state():
    """Density matrix of ``(|00> + |11>)/sqrt(2)``."""
    m = np.zeros((4, 4), dtype=complex)
    m[np.ix_([0, 3], [0, 3])] = 0.5
    return DensityMatrix(m, 2)


def maximally_mixed(n):
    N = 2**n
    return DensityMatrix(np.eye(N, dtype=complex) / N, n)


def tensor(*ops):
    """Kronecker product, first argument as the most significant factor."""
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, _as_matrix(op))
    return out


def partial_transpose(rho, subsystem):
    """Transpose the indices of one qubit of a two-qubit operator.

    Parameters
    ----------
    rho : DensityMatrix or array_like
        Two-qubit (4x4) operator.
    subsystem : {1, 2}
        Which qubit to transpose.

    Returns
    -------
    numpy.ndarray
        Hermitian 4x4 matrix; it need not be positive semidefinite.
    """
    m = _as_matrix(rho)
    if m.shape != (4, 4):
        raise UnsupportedArityError("partial transpose is implemented for two qubits only")
    if subsystem not in (1, 2):
        raise DomainError(f"subsystem must be 1 or 2, got {subsystem}")
    t = m.reshape(2, 2, 2, 2)  # (i1, i2, j1, j2)
    if subsystem == 1:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(4, 4).copy()


def purity(rho):
    """``tr(rho**2)``."""
    m = _as_matrix(rho)
    return float(np.einsum("ij,ji->", m, m).real)


def density_report(m, n):
    """Measure how far ``m`` is from being an ``n``-qubit density matrix."""
    m = np.asarray(m, dtype=complex)
    N = 2**n
    if m.shape != (N, N):
        raise DomainError(f"expected a {N}x{N} matrix for {n} qubits, got {m.shape}")
    herm = float(np.max(np.abs(m - m.conj().T)))
    tr = np.trace(m)
    # eigenvalues of the Hermitian part; the anti-Hermitian part is reported separately
    lam_min = float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])
    violations = {}
    if herm > ATOL:
        violations["hermiticity"] = herm
    if abs(tr - 1.0) > ATOL:
        violations["trace"] = float(tr.real)
    if lam_min < PSD_FLOOR:
        violations["psd"] = lam_min
    return DensityReport(herm, float(tr.real), lam_min, violations)


def validate_density(m, n):
    """Return ``m`` as a :class:`DensityMatrix` or raise :class:`ValidationError`."""
    report = density_report(m, n)
    if not report.ok:
        raise ValidationError(report, np.asarray(m, dtype=complex))
    return DensityMatrix(m, n)


def random_pure_state(n, rng):
    """Haar-random pure state from normalised complex Gaussian amplitudes."""
    N = 2**n
    psi = rng.normal(size=N) + 1j * rng.normal(size=N)
    return density_from_vector(psi / np.linalg.norm(psi))


def random_density(n, rng, rank=None):
    """Random mixed state ``G G^H / tr(G G^H)`` with Gaussian ``G``."""
    N = 2**n
    k = N if rank is None else rank
    g = rng.normal(size=(N, k)) + 1j * rng.normal(size=(N, k))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, n)


def matrix_to_json(m):
    m = _as_matrix(m)
    return {
        "dim": int(m.shape[0]),
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def matrix_from_json(data):
    dim = int(data["dim"])
    entries = data["entries"]
    if dim < 1 or len(entries) != dim * dim:
        raise DomainError(f"expected {dim * dim} entries for dim={dim}, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries])
    return flat.reshape(dim, dim)
