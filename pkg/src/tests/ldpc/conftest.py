import pytest

from eharqsim.ldpc import ParityCheckMatrix

TOY_ALIST = """6 3
2 3
2 2 2 1 1 1
3 3 3
1 3
1 2
2 3
1
2
3
1 2 4
2 3 5
1 3 6
"""


@pytest.fixture
def toy_rows():
    return [[0, 1, 3], [1, 2, 4], [0, 2, 5]]


@pytest.fixture
def toy_code(toy_rows):
    return ParityCheckMatrix(toy_rows)


@pytest.fixture
def toy_alist():
    return TOY_ALIST
