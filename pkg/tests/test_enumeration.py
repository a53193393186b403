"""
Tests for tribracket and psybracket enumeration.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from algebra import apply_permutation, canonical_form, is_tribracket, satisfies_axioms
from enumeration import (EnumerationResult, SearchBoundError, brute_force_psybrackets,
                         check_bound, classify, compatible_pre_tensors,
                         enumerate_psybrackets, enumerate_tribrackets,
                         find_isomorphism_class)


@pytest.fixture(scope="module")
def order_three():
    """Full classification on three elements; shared by the slow tests."""
    return enumerate_psybrackets(3)


class TestBounds:
    """Test cases for the search size guard."""

    def test_within_bound(self):
        """Test that sizes up to the bound pass."""
        check_bound(4, 4)

    @pytest.mark.parametrize("n, bound", [(5, 4), (0, 4), (3, 2)])
    def test_out_of_bound(self, n, bound):
        """Test oversize and non-positive carriers."""
        with pytest.raises(SearchBoundError):
            check_bound(n, bound)

    def test_enumeration_respects_bound(self):
        """Test that enumerate_psybrackets refuses large carriers by default."""
        with pytest.raises(SearchBoundError, match="bound is 4"):
            enumerate_psybrackets(5)

    def test_brute_force_bound(self):
        """Test that the unpruned oracle stops at two elements."""
        with pytest.raises(SearchBoundError):
            brute_force_psybrackets(3)


class TestSmallCarriers:
    """Test cases that run the full search on one and two elements."""

    def test_one_element(self):
        """Test that the trivial psybracket is the only one."""
        result = enumerate_psybrackets(1)
        assert result.summary() == "classes=1 total=1"
        assert result.class_sizes == [1]

    def test_tribrackets_are_valid_and_sorted(self):
        """Test enumerate_tribrackets output on two elements."""
        tensors = enumerate_tribrackets(2)
        assert tensors
        assert all(is_tribracket(t) for t in tensors)
        assert [t.flat() for t in tensors] == sorted(t.flat() for t in tensors)

    def test_search_matches_brute_force(self):
        """Test the pruned search against the unpruned oracle on two elements."""
        searched = enumerate_psybrackets(2)
        oracle = brute_force_psybrackets(2)
        assert searched.total == oracle.total
        assert [x.key() for x in searched.representatives] == [
            x.key() for x in oracle.representatives
        ]
        assert searched.class_sizes == oracle.class_sizes

    def test_parallel_search_is_deterministic(self):
        """Test that worker threads do not change the result."""
        assert enumerate_psybrackets(2, jobs=3) == enumerate_psybrackets(2)


class TestClassify:
    """Test cases for classify and find_isomorphism_class."""

    def test_relabelings_share_a_class(self, psybracket):
        """Test that a structure and its relabeling land in one class."""
        x = psybracket("X4")
        result = classify([x, apply_permutation(x, [2, 3, 1])], 3)
        assert isinstance(result, EnumerationResult)
        assert result.classes == 1
        assert result.class_sizes == [2]
        assert result.representatives[0] == canonical_form(x)

    def test_representatives_are_sorted(self, printed):
        """Test that classes come out in key order."""
        result = classify(printed, 3)
        keys = [x.key() for x in result.representatives]
        assert keys == sorted(keys)
        assert result.total == 6

    def test_unknown_structure(self, printed, psybracket):
        """Test find_isomorphism_class for a structure outside the list."""
        result = classify(printed[:2], 3)
        assert find_isomorphism_class(result, psybracket("X6")) is None


class TestPreTensorSearch:
    """Test cases for the precrossing tensor search."""

    def test_shared_classical_tensor(self, psybracket):
        """Test that X1 and X2 are both found over X1's classical tensor."""
        x1, x2 = psybracket("X1"), psybracket("X2")
        found = compatible_pre_tensors(x1.tc)
        assert x1.tp in found
        assert x2.tp in found
        assert all(satisfies_axioms(x1.tc, tp) for tp in found)


@pytest.mark.slow
class TestOrderThree:
    """Full classification on three elements."""

    def test_printed_classes_found(self, order_three, printed):
        """Test that each printed structure belongs to an enumerated class."""
        indices = [find_isomorphism_class(order_three, x) for x in printed]
        assert None not in indices
        assert len(set(indices)) == 6

    def test_class_count(self, order_three):
        """
        Test the exact count under the literal axioms.

        The axioms admit classical tensors such as a+b-c and non-affine
        precrossing tensors besides the six printed classes, so there are 20.
        """
        assert order_three.classes == 20
        assert order_three.total == 36
        assert sum(order_three.class_sizes) == order_three.total
        for rep in order_three.representatives:
            assert satisfies_axioms(rep.tc, rep.tp)
            assert rep == canonical_form(rep)
