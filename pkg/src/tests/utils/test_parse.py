import numpy as np
import pytest

from eharqsim.utils.parse import (
    as_bit_vector,
    as_finite_vector,
    quote_iterable,
)


class TestQuoteIterable:
    def test_single(self):
        assert quote_iterable(["abc"]) == "'abc'"

    def test_several(self):
        assert quote_iterable(["abc", "def", "ghi"]) == (
            "'abc', 'def' and 'ghi'"
        )

    def test_empty(self):
        assert quote_iterable([]) == ""


class TestAsBitVector:
    def test_convert(self):
        bits = as_bit_vector([0, 1, 1, 0])

        assert bits.dtype == np.uint8
        assert bits.tolist() == [0, 1, 1, 0]

    def test_wrong_length(self):
        with pytest.raises(ValueError, match="expected 3"):
            as_bit_vector([0, 1], length=3)

    def test_not_binary(self):
        with pytest.raises(ValueError, match="only contain 0 and 1"):
            as_bit_vector([0, 2, 1])

    def test_not_one_dimensional(self):
        with pytest.raises(ValueError, match="one-dimensional"):
            as_bit_vector([[0, 1], [1, 0]])


class TestAsFiniteVector:
    def test_convert(self):
        values = as_finite_vector([1, 2.5])

        assert values.dtype == np.float64

    def test_non_finite(self):
        with pytest.raises(ValueError, match="non-finite"):
            as_finite_vector([1.0, np.inf], label="LLR vector")
