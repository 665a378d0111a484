from fractions import Fraction

import pytest

from prdm import random_suite, reference_instance, standard_families

# Frozen suite seeds: changing any of these invalidates the frozen
# expectations derived from them in the tests.
BUDGET_SUITE_SEED = 20260817
IC_SUITE_SEED = 424242
PSP_SUITE_SEED = 515151
GAMMA_SUITE_SEED = 616161
ORACLE_SUITE_SEED = 909090

BETA_GRID = (Fraction(0), Fraction(1, 5), Fraction(1, 4), Fraction(1, 2))


@pytest.fixture(scope="session")
def reference():
    return reference_instance()


@pytest.fixture(scope="session")
def families():
    return standard_families()


@pytest.fixture(scope="session")
def budget_suite():
    return random_suite(200, BUDGET_SUITE_SEED, 3, 10)


@pytest.fixture(scope="session")
def ic_suite():
    return random_suite(100, IC_SUITE_SEED, 3, 7)


@pytest.fixture(scope="session")
def psp_suite():
    return random_suite(100, PSP_SUITE_SEED, 3, 7)


@pytest.fixture(scope="session")
def gamma_suite():
    return random_suite(40, GAMMA_SUITE_SEED, 3, 7)


@pytest.fixture(scope="session")
def oracle_suite():
    return random_suite(60, ORACLE_SUITE_SEED, 3, 10)
