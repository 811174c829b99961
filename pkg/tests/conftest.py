import random

import pytest

from toytheory.algebra import QQ, rref
from fractions import Fraction


@pytest.fixture
def rng():
    return random.Random(20240901)


def random_subspace(field, ambient, rng, max_rows=None):
    if max_rows is None:
        max_rows = ambient
    n_rows = rng.randint(0, max_rows)
    if field is QQ:
        rows = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                 for _ in range(ambient)] for _ in range(n_rows)]
    else:
        rows = [[rng.randrange(field.p) for _ in range(ambient)]
                for _ in range(n_rows)]
    return rref(field, ambient, rows)


def random_vector(field, ambient, rng):
    if field is QQ:
        return tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                     for _ in range(ambient))
    return tuple(rng.randrange(field.p) for _ in range(ambient))
