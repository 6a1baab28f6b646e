import pytest

from jetcohom.liealg import AlgebraSpec, build_algebra
from jetcohom.cochain import CellComplex
from jetcohom.report import RunConfig, cmd_compute


@pytest.fixture(scope="session")
def a1():
    return build_algebra(AlgebraSpec("A", 1))


@pytest.fixture(scope="session")
def a2():
    return build_algebra(AlgebraSpec("A", 2))


@pytest.fixture(scope="session")
def cc_a1(a1):
    return CellComplex(a1)


@pytest.fixture(scope="session")
def cc_a2(a2):
    return CellComplex(a2)


@pytest.fixture(scope="session")
def a1_report():
    return cmd_compute(RunConfig(series="A", rank=1, maxDegree=3, maxEnergy=6))


@pytest.fixture(scope="session")
def a2_report():
    return cmd_compute(RunConfig(series="A", rank=2, maxDegree=2, maxEnergy=4))
