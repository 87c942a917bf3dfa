import pytest

from torsioncalc.sampling import (
    derive_rng,
    random_connection,
    random_even_connection,
    random_tensor_field,
)


@pytest.fixture
def rng():
    return derive_rng(20260809, "tests")


def make_instance(seed, label, dim, degree=2, even=True):
    """One seeded (connection, tensor) pair for identity checks."""
    r = derive_rng(seed, label)
    gen = random_even_connection if even else random_connection
    L = gen(r, dim, degree)
    a = random_tensor_field(r, dim, (1, 1), degree)
    return L, a
