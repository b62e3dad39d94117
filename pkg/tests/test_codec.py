"""Tests for codec and rationals modules."""

import json
from fractions import Fraction

import pytest

from cooccur.codec import (
    density_from_dict,
    density_to_dict,
    dumps,
    kernel_from_dict,
    kernel_to_dict,
    measure_from_dict,
    measure_to_dict,
    piecewise_from_dict,
    piecewise_to_dict,
    solutions_to_dict,
    variable_from_dict,
    variable_to_dict,
)
from cooccur.conditioning import cond_kernel
from cooccur.density import density_wrt_marginals
from cooccur.exceptions import ModelFileError
from cooccur.rationals import format_decimal, format_rational, is_rational_string, parse_rational
from cooccur.scm import solve
from cooccur.space import IndexSet, MeasureKind


class TestRationals:
    """Tests for exact rational parsing and rendering."""

    @pytest.mark.parametrize("text,expected", [("3/4", Fraction(3, 4)), ("-2", Fraction(-2)), (" 6/4 ", Fraction(3, 2))])
    def test_parse(self, text, expected):
        """Test parsing integers and p/q strings."""
        assert parse_rational(text) == expected

    @pytest.mark.parametrize("value", [0.5, True, "1/0", "0.25", "a/b"])
    def test_parse_rejects_inexact(self, value):
        """Test that floats, booleans and malformed strings are rejected."""
        with pytest.raises(ValueError):
            parse_rational(value)

    def test_is_rational_string(self):
        """Test the string predicate."""
        assert is_rational_string("10/3")
        assert not is_rational_string("1e3")

    def test_format(self):
        """Test canonical rendering."""
        assert format_rational(Fraction(4, 2)) == "2"
        assert format_rational(Fraction(-3, 6)) == "-1/2"

    def test_format_decimal(self):
        """Test decimal rendering with half-even rounding."""
        assert format_decimal(Fraction(1, 3), 4) == "0.3333"
        assert format_decimal(Fraction(1, 8), 2) == "0.12"
        assert format_decimal(Fraction(1, 2), 0) == "0"


class TestCodec:
    """Tests for JSON serialization of engine values."""

    def test_dumps_is_sorted(self):
        """Test deterministic key order."""
        assert dumps({"b": 1, "a": 2}).index('"a"') < dumps({"b": 1, "a": 2}).index('"b"')

    def test_measure(self, m0):
        """Test serializing and re-reading a measure."""
        data = measure_to_dict(m0.measures["P"])
        assert data == {"space": "Omega", "weights": ["1/4"] * 4, "kind": "probability"}
        assert measure_from_dict(data, m0.spaces) == m0.measures["P"]

    def test_measure_unknown_space(self, m0):
        """Test that unknown spaces are load errors."""
        with pytest.raises(ModelFileError):
            measure_from_dict({"space": "Nowhere", "weights": []}, m0.spaces)

    def test_kernel(self, m0, P, X1, X2):
        """Test that a kernel survives a JSON round trip."""
        k = cond_kernel(P, X1, X2)
        data = json.loads(dumps(kernel_to_dict(k)))
        assert data["rows"] == [["1/2", "1/2"], ["1/2", "1/2"]]
        assert kernel_from_dict(data, m0.spaces) == k

    def test_density_index_mismatch(self, P, X1, X2):
        """Test that densities re-parse only onto matching spaces."""
        f = density_wrt_marginals(P, {1: X1, 2: X2}, IndexSet((1, 2)))
        data = density_to_dict(f)
        assert data == {"indices": [1, 2], "base": "marginals", "values": ["1", "1", "1", "1"]}
        assert density_from_dict(data, f.space, f.factors) == f
        with pytest.raises(ModelFileError):
            density_from_dict({**data, "indices": [1, 3]}, f.space, f.factors)

    def test_piecewise(self):
        """Test reading a piecewise-linear function."""
        phi = piecewise_from_dict({"breakpoints": ["0"], "slopes": ["-1", "1"]})
        assert phi(Fraction(-3)) == 3

    def test_solutions(self, m0):
        """Test the solution map rendering."""
        chain = m0.get_scm("chain")
        data = solutions_to_dict(chain, solve(chain))
        assert data == {
            "solutions": [
                {"exo": [0], "endo": [[0, 0]]},
                {"exo": [1], "endo": [[1, 1]]},
            ]
        }

    def test_default_kind_is_finite(self, m0):
        """Test that measures without a kind read back as finite."""
        m = measure_from_dict({"space": "parity", "weights": ["1", "2"]}, m0.spaces)
        assert m.kind is MeasureKind.FINITE

    def test_variable(self, m0):
        """Test a variable through JSON text."""
        Y = m0.get_variable("Y")
        data = json.loads(dumps(variable_to_dict(Y)))
        assert data == {"space": "half", "values": ["0", "1"]}
        assert variable_from_dict(data, m0.spaces) == Y

    def test_piecewise_offset(self):
        """Test that the offset survives serialization."""
        phi = piecewise_from_dict({"breakpoints": ["1/2"], "slopes": ["0", "2"], "offset": "3"})
        data = piecewise_to_dict(phi)
        assert data == {"breakpoints": ["1/2"], "slopes": ["0", "2"], "offset": "3"}
        assert piecewise_from_dict(data) == phi
