import pytest

from edsmodel.curve import Curve, CurveConfig
from edsmodel.firstorder import Protocol
from edsmodel.ledger import FactorLedger
from edsmodel.model import Model
from edsmodel.primesets import PrimeSets
from edsmodel.ring import Ring
from edsmodel.apparition import Apparition


@pytest.fixture(scope="session")
def curve():
    return Curve(CurveConfig())


@pytest.fixture(scope="session")
def small_curve():
    return Curve(CurveConfig(n_max=12))


@pytest.fixture(scope="session")
def ledger(curve):
    return FactorLedger(curve).build_all()


@pytest.fixture(scope="session")
def apparition(curve):
    return Apparition(curve)


@pytest.fixture(scope="session")
def sets(ledger):
    return PrimeSets(ledger)


@pytest.fixture(scope="session")
def ring(sets, apparition):
    return Ring(sets, apparition)


@pytest.fixture(scope="session")
def model(ring):
    return Model(ring)


@pytest.fixture(scope="session")
def protocol(model):
    return Protocol(model)


@pytest.fixture(scope="session")
def ledger_file(ledger, tmp_path_factory):
    path = tmp_path_factory.mktemp("ledger") / "ledger.json"
    ledger.persist(path)
    return str(path)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
