import pytest

from nlvortex.biphoton import CrystalSpec, PumpSpec
from nlvortex.modes import BeamParams, ModeIndex, default_grid


@pytest.fixture(scope="session")
def params():
    return BeamParams(wavelength=810e-9, waist=1e-3)


@pytest.fixture(scope="session")
def grid(params):
    return default_grid(params)


@pytest.fixture(scope="session")
def crystal():
    return CrystalSpec(length=2e-3)


def make_pump(n, m, wavelength=405e-9, waist=1e-3):
    return PumpSpec(ModeIndex(n, m), wavelength, waist)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
