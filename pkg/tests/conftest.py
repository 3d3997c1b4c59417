import sys
from pathlib import Path

import pytest

from selfcue.config import EngineConfig

# Make the sibling oracle helpers importable regardless of invocation dir.
sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def cfg() -> EngineConfig:
    return EngineConfig()
