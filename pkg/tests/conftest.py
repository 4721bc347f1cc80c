import numpy as np
import pytest

from gmsteady.barriers import (
    Exponents,
    Problem,
    SourceModel,
    alg_regime_ledger,
    exp_regime_ledger,
)
from gmsteady.solvers import solve_coupled_alg, solve_coupled_exp


@pytest.fixture(scope="session")
def exp_worked_case():
    """The large-shift worked configuration and its converged solve."""
    exponents = Exponents(2.0, 1.0, 1.0, 0.0)
    problem = Problem(3, 4096.0, 16.0, SourceModel.exp_envelope(1.0, 2.0, 1.0, 1.5))
    ledger = exp_regime_ledger(exponents, 3, 4096.0, 16.0, 1.0, 2.0, 1.0)
    report = solve_coupled_exp(problem, exponents, ledger)
    return problem, exponents, ledger, report


@pytest.fixture(scope="session")
def alg_worked_case():
    """The zero-shift worked configuration and its converged solve."""
    exponents = Exponents(5.0, 2.0, 2.0, 1.0)
    problem = Problem(5, 0.0, 0.0, SourceModel.alg_envelope(0.01, 0.015, 4.0, 0.0125))
    ledger = alg_regime_ledger(exponents, 5, 0.01, 0.015, 4.0)
    report = solve_coupled_alg(problem, exponents, ledger)
    return problem, exponents, ledger, report


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
