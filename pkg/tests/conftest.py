import pytest

from snb import BetaPrior, SnbParams


@pytest.fixture
def trial_params() -> SnbParams:
    """The running example used throughout: p=0.2, s=7, t=11."""
    return SnbParams(0.2, 7, 11)


@pytest.fixture
def jeffreys() -> BetaPrior:
    return BetaPrior(0.5, 0.5)
