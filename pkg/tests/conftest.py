import mpmath
import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from hopfnet.signed_graph import SignedGraph

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def random_signed(rng: np.random.Generator, n: int, density: float = 0.5,
                  symmetric: bool = False) -> SignedGraph:
    """Signed unweighted graph with zero diagonal."""
    a = rng.choice([-1.0, 0.0, 1.0], size=(n, n), p=[density / 2, 1 - density, density / 2])
    if symmetric:
        a = np.triu(a, 1)
        a = a + a.T
    np.fill_diagonal(a, 0.0)
    return SignedGraph(a)


def powering_oracle(a: np.ndarray, k_first: int = 1024, k_last: int = 2048) -> bool:
    """Some ``k0 <= k_first`` has ``A^k`` strictly positive for every ``k0 <= k <= k_last``.

    Each power is rescaled by its max modulus to avoid overflow. The horizon
    is long because random signed matrices can have a second eigenvalue
    within 1% of the spectral radius, where positivity only settles after a
    few hundred powers.
    """
    a = np.asarray(a, dtype=float)
    p = np.eye(a.shape[0])
    last_bad = 0
    for k in range(1, k_last + 1):
        p = p @ a
        top = np.max(np.abs(p))
        if top == 0:
            return False
        p = p / top
        if not np.all(p > 1e-12):
            last_bad = k
    return last_bad < k_first


def paired_distance(x, y) -> float:
    """Largest distance after optimally pairing two multisets."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    cost = np.abs(x[:, None] - y[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max()) if x.size else 0.0


def mp_eigvals(a, dps: int = 60) -> list[complex]:
    """Eigenvalues at ``dps`` digits, rounded to complex doubles."""
    with mpmath.workdps(dps):
        values = mpmath.eig(mpmath.matrix(np.asarray(a, dtype=float).tolist()),
                            left=False, right=False)
        return [complex(v) for v in values]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: int(r[0].split()[1])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
