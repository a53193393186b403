"""
Unit tests for the psybracket text format.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from algebra import satisfies_axioms
from psy_format import (FormatError, load_psybracket, load_psybracket_dir,
                        parse_psybracket, save_psybracket,
                        serialize_psybracket)
from tests.conftest import SAMPLE_PSY


class TestParsePsybracket:
    """Test cases for parse_psybracket."""

    def test_parse_sample(self):
        """Test a commented file with blank lines between blocks."""
        x = parse_psybracket(SAMPLE_PSY, name="z2")
        assert x.n == 2
        assert x.name == "z2"
        assert x.tc.entries() == [[[1, 2], [2, 1]], [[2, 1], [1, 2]]]
        assert x.tp == x.tc
        assert satisfies_axioms(x.tc, x.tp)

    def test_serialize_then_parse(self, psybracket):
        """Test that serialized output parses back to the same structure."""
        x = psybracket("X4")
        text = serialize_psybracket(x)
        assert text.startswith("psybracket n=3\n[c]\n")
        assert text.endswith("\n")
        assert parse_psybracket(text) == x

    @pytest.mark.parametrize(
        "text, message, line",
        [
            ("psybracket 2\n", "header", 1),
            ("psybracket n=1\n1\n[p]\n1\n", "before the [c] section", 2),
            ("psybracket n=1\n[c]\n1\n[c]\n1\n", "duplicate section", 4),
            ("psybracket n=1\n[c]\n2\n[p]\n1\n", "outside 1..1", 3),
            ("psybracket n=2\n[c]\n1 x\n1 2\n1 2\n1 2\n", "not an integer", 3),
            ("psybracket n=2\n[c]\n1 2 1\n1 2\n1 2\n1 2\n", "expected 2 entries", 3),
        ],
    )
    def test_syntax_errors_carry_line_numbers(self, text, message, line):
        """Test error messages and the reported line."""
        if message != "header" and "[p]" not in text:
            text += "[p]\n" + "1 1\n" * 4
        with pytest.raises(FormatError, match=message) as excinfo:
            parse_psybracket(text, source="bad.psy")
        assert excinfo.value.line == line
        assert excinfo.value.source == "bad.psy"
        assert str(excinfo.value).startswith(f"bad.psy:line {line}: ")

    def test_wrong_row_count(self):
        """Test a section with too few rows."""
        with pytest.raises(FormatError, match="needs 4 rows, found 2"):
            parse_psybracket("psybracket n=2\n[c]\n1 2\n2 1\n[p]\n1 2\n2 1\n1 2\n2 1\n")

    def test_missing_pre_section(self):
        """Test a file without [p]."""
        with pytest.raises(FormatError, match=r"missing section \[p\]"):
            parse_psybracket("psybracket n=1\n[c]\n1\n")

    def test_empty_file(self):
        """Test a file with only comments."""
        with pytest.raises(FormatError, match="empty file"):
            parse_psybracket("; nothing here\n\n")


class TestPsybracketFiles:
    """Test cases for loading and saving .psy files."""

    def test_stem_becomes_name(self, psy_dir):
        """Test that load_psybracket names the structure after the file."""
        assert load_psybracket(psy_dir / "X3.psy").name == "X3"

    def test_load_directory_sorted(self, psy_dir):
        """Test that a directory loads in file name order."""
        names = [x.name for x in load_psybracket_dir(psy_dir)]
        assert names == ["X1", "X2", "X3", "X4", "X5", "X6", "trivial"]

    def test_missing_directory(self, temp_dir):
        """Test the error for a missing directory."""
        with pytest.raises(FileNotFoundError, match="Psybracket directory not found"):
            load_psybracket_dir(temp_dir / "absent")

    def test_save_and_load(self, temp_dir, psybracket):
        """Test writing a file and reading it back."""
        x = psybracket("X6")
        path = temp_dir / "copy.psy"
        save_psybracket(x, path)
        loaded = load_psybracket(path)
        assert loaded == x
        assert loaded.name == "copy"
