import itertools

import pytest

import qipsim as q


def strings(alphabet, n_max):
    out = [""]
    for n in range(1, n_max + 1):
        out.extend("".join(t) for t in itertools.product(alphabet, repeat=n))
    return out


@pytest.fixture(scope="session")
def zero_public():
    return q.zero_public_protocol()


@pytest.fixture(scope="session")
def la_mo():
    return q.la_mo_protocol()


@pytest.fixture(scope="session")
def odd():
    return q.odd_protocol()


@pytest.fixture(scope="session")
def pal1():
    return q.pal_sharp_protocol(1)


@pytest.fixture(scope="session")
def pal2():
    return q.pal_sharp_protocol(2)


@pytest.fixture(scope="session")
def center2():
    return q.center_protocol(2)


@pytest.fixture(scope="session")
def upal4():
    return q.upal_protocol(4)


@pytest.fixture(scope="session")
def eraser_zero():
    from qipsim.automata import zero_dfa
    return q.eraser_protocol(zero_dfa(), "eraser_zero")
