import pytest

from parsim.presets import anthrax_stp


# safe to share: every scenario component is a frozen dataclass
@pytest.fixture(scope="session")
def anthrax():
    return anthrax_stp()
