import pytest

from secrecy_region import ChannelParams


@pytest.fixture
def fig2():
    """Channel used for the power sweep figure."""
    return ChannelParams(a=1.0, a_c=0.05, N=1.0)
