import pytest

from thermoshift import LocallyConstant, ShiftModel


@pytest.fixture
def golden_mean():
    return ShiftModel.golden_mean()


@pytest.fixture
def full2():
    return ShiftModel.full(2)


@pytest.fixture
def bernoulli():
    """f(0)=0, f(1)=-1 on two symbols; closed forms exist for everything."""
    return LocallyConstant({0: 0.0, 1: -1.0})
