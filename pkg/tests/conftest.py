import pytest

from copdep import assignment_copula, make_rng


def balanced_assignment_copula(n_cond: int, m: int, rng):
    return assignment_copula(n_cond, m, rng)


@pytest.fixture
def rng():
    return make_rng(20240817)
