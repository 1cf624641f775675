import pytest

from combideal import poly
from combideal.minority import gf2_rref

# Every grlex division made anywhere in the suite goes through this wrapper,
# which checks that the remainder never has larger degree than the dividend.
DIVISION_LOG = {"grlex_calls": 0, "violations": []}

_original_reduce = poly._reduce


def _watched_reduce(f, basis, order, track):
    out = _original_reduce(f, basis, order, track)
    if order.kind == "grlex":
        DIVISION_LOG["grlex_calls"] += 1
        rem = out[1]
        if rem.degree() > f.degree():
            DIVISION_LOG["violations"].append((str(f), str(rem)))
            raise AssertionError(f"grlex remainder {rem} has larger degree than {f}")
    return out


@pytest.fixture(autouse=True, scope="session")
def watch_divisions():
    poly._reduce = _watched_reduce
    yield DIVISION_LOG
    poly._reduce = _original_reduce


@pytest.fixture
def xor_example():
    # x1 + x3 + x4 = 0 and x2 + x3 + x5 + 1 = 0 over GF(2)
    return gf2_rref([((0, 2, 3), 0), ((1, 2, 4), 1)], 5)
