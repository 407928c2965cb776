"""
Shared fixtures: bundled datasets and isolation of the global arithmetic settings
"""

import pytest

from cyclotomic import configure, get_settings
from dataset_manager import DatasetManager


@pytest.fixture(autouse=True)
def arithmetic_settings():
    """Every test starts and ends with the same ceiling and precision"""
    saved = get_settings()
    yield saved
    configure(saved)


@pytest.fixture(scope="session")
def manager():
    return DatasetManager()


@pytest.fixture(scope="session")
def toric(manager):
    return manager.load("toric_em_swap")


@pytest.fixture(scope="session")
def fibonacci(manager):
    return manager.load("fibonacci")


@pytest.fixture(scope="session")
def ising(manager):
    return manager.load("ising_modular")


@pytest.fixture(scope="session")
def z3_inversion(manager):
    return manager.load("z3_inversion")


@pytest.fixture(scope="session")
def z3_modular(manager):
    return manager.load("z3_modular")


@pytest.fixture(scope="session")
def fib_swap(manager):
    return manager.load("fib_swap")
