import pytest

from secrelay.params import SystemParams


@pytest.fixture
def defaults():
    """Reference setting: N_R=100, W=10 kHz, rho=0.9, eps=0.01, SNR_S=10 dB, SNR_max=15 dB."""
    return SystemParams()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
