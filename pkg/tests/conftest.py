import numpy as np
import pytest

from wignerepr.qstate import random_density, random_pure_state


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_states(rng, count, n_values=(1, 2)):
    """Alternate pure and full-rank mixed states over the given qubit counts."""
    out = []
    for i in range(count):
        n = n_values[i % len(n_values)]
        make = random_pure_state if (i // len(n_values)) % 2 == 0 else random_density
        out.append(make(n, rng))
    return out


def pauli_phase_point(q, p):
    """Independent construction of the single-qubit phase-point operator."""
    I = np.eye(2)
    sx = np.array([[0, 1], [1, 0]])
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.array([[1, 0], [0, -1]])
    return 0.5 * (I + (-1) ** q * sz + (-1) ** p * sx + (-1) ** (q + p) * sy)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, _ in test_acceptance.CRITERIA:
        if name in test_acceptance.RESULTS:
            ok, detail = test_acceptance.RESULTS[name]
            terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {name}: {detail}")
