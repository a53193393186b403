"""
Unit tests for the .pkd diagram format.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from diagram import CrossingKind, validate
from diagram_format import (load_diagram, load_diagram_dir, parse_diagram,
                            save_diagram, serialize_diagram)
from psy_format import FormatError
from tests.conftest import SAMPLE_PKD


class TestParseDiagram:
    """Test cases for parse_diagram."""

    def test_parse_sample(self):
        """Test comments, kinds and edges."""
        d = parse_diagram(SAMPLE_PKD)
        assert d.name == "sample"
        assert d.kinds == {
            "a": CrossingKind.PRE,
            "b": CrossingKind.POSITIVE,
            "c": CrossingKind.POSITIVE,
        }
        assert len(d.edges) == 6
        assert d.mate(("b", 2)) == ("a", 1)
        assert validate(d).valid

    def test_free_loops(self):
        """Test the loops record."""
        d = parse_diagram("pseudodiagram circle\nloops 2 # two circles\n")
        assert d.free_loops == 2
        assert d.crossing_count == 0

    @pytest.mark.parametrize(
        "text, message, line",
        [
            ("crossing a +\n", "expected header", 1),
            ("pseudodiagram x\ncrossing a *\n", "expected 'crossing", 2),
            ("pseudodiagram x\ncrossing a +\ncrossing a -\n", "duplicate crossing a", 3),
            ("pseudodiagram x\nedge a2 b.1\n", "expected <crossing>.<slot>", 2),
            ("pseudodiagram x\nedge a.x b.1\n", "slot must be an integer", 2),
            ("pseudodiagram x\nloops -1\n", "expected 'loops", 2),
            ("pseudodiagram x\nvertex a\n", "unknown record", 2),
        ],
    )
    def test_syntax_errors(self, text, message, line):
        """Test error messages and line numbers."""
        with pytest.raises(FormatError, match=message) as excinfo:
            parse_diagram(text, source="bad.pkd")
        assert excinfo.value.line == line

    def test_empty(self):
        """Test a file with only comments."""
        with pytest.raises(FormatError, match="empty file"):
            parse_diagram("# nothing\n")

    def test_syntax_only(self):
        """Test that map-level problems are left to validate."""
        d = parse_diagram("pseudodiagram x\ncrossing a +\n")
        assert not validate(d).valid


class TestDiagramFiles:
    """Test cases for loading and saving .pkd files."""

    def test_corpus_files_are_canonical(self, corpus_dir):
        """Test that every corpus file equals its own serialization."""
        for path in sorted(corpus_dir.glob("*.pkd")):
            assert serialize_diagram(load_diagram(path)) == path.read_text()

    def test_load_directory(self, corpus_dir):
        """Test loading the corpus in file name order."""
        names = [d.name for d in load_diagram_dir(corpus_dir)]
        assert names == ["3_1.3", "3_1", "4_1", "5_1", "5_2", "hopf_shadow", "unknot"]

    def test_missing_directory(self, temp_dir):
        """Test the error for a missing directory."""
        with pytest.raises(FileNotFoundError):
            load_diagram_dir(temp_dir / "absent")

    def test_save_and_load(self, temp_dir, hopf_shadow):
        """Test writing a diagram and reading it back."""
        path = temp_dir / "hopf.pkd"
        save_diagram(hopf_shadow, path)
        assert load_diagram(path) == hopf_shadow
