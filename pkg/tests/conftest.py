"""
Pytest configuration and common fixtures for psybracket tests.
"""

import shutil
import sys
import tempfile
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from diagram_format import load_diagram
from psy_format import load_psybracket

DATA_DIR = Path(__file__).parent.parent / "data"
PSY_DIR = DATA_DIR / "psybrackets"
CORPUS_DIR = DATA_DIR / "corpus"

PRINTED_CLASSES = ["X1", "X2", "X3", "X4", "X5", "X6"]


@pytest.fixture
def temp_dir():
    """Create a temporary directory for testing."""
    temp_path = tempfile.mkdtemp()
    yield Path(temp_path)
    shutil.rmtree(temp_path, ignore_errors=True)


@pytest.fixture
def psy_dir():
    return PSY_DIR


@pytest.fixture
def corpus_dir():
    return CORPUS_DIR


@pytest.fixture
def psybracket():
    """Loader for the shipped psybrackets by name, e.g. psybracket("X2")."""

    def load(name):
        return load_psybracket(PSY_DIR / f"{name}.psy")

    return load


@pytest.fixture
def printed(psybracket):
    """The six printed order-3 psybrackets, X1..X6."""
    return [psybracket(name) for name in PRINTED_CLASSES]


@pytest.fixture
def diagram():
    """Loader for corpus diagrams by file stem, e.g. diagram("3_1")."""

    def load(name):
        return load_diagram(CORPUS_DIR / f"{name}.pkd")

    return load


@pytest.fixture
def trefoil(diagram):
    return diagram("3_1")


@pytest.fixture
def pseudo_trefoil(diagram):
    """Trefoil with one crossing replaced by a precrossing."""
    return diagram("3_1.3")


@pytest.fixture
def hopf_shadow(diagram):
    return diagram("hopf_shadow")


SAMPLE_PSY = """; Dehn psybracket of Z2
psybracket n=2
[c]
1 2
2 1

2 1
1 2

[p]
1 2
2 1

2 1
1 2
"""

SAMPLE_PKD = """# pseudo trefoil
pseudodiagram sample
crossing a #
crossing b +   # classical
crossing c +
edge a.2 c.1
edge a.3 c.0
edge b.2 a.1
edge b.3 a.0
edge c.2 b.1
edge c.3 b.0
"""
