import pytest

from mig.lbcs_construct import build_paper_pair


@pytest.fixture(scope="session")
def paper_pair():
    return build_paper_pair()


@pytest.fixture(scope="session")
def catalog5():
    from mig.catalog import all_matroids

    return {n: all_matroids(n) for n in range(6)}


@pytest.fixture(scope="session")
def catalog6():
    from mig.catalog import all_matroids

    return all_matroids(6)


@pytest.fixture(scope="session")
def catalog7():
    from mig.catalog import all_matroids

    return all_matroids(7)


@pytest.fixture(scope="session")
def pauli_grid():
    from mig.quantum import magic_square_observables

    return magic_square_observables()
