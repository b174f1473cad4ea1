"""Canonical form, printing and the expression grammar."""

import pytest
import sympy
from hypothesis import given, strategies as st

from courantkit.errors import ModelSyntaxError
from courantkit.scalars import ScalarRing, canonical, is_polynomial, is_zero

x, y = sympy.symbols("x y")


@st.composite
def polynomials(draw, max_degree=3):
    coeffs = draw(st.lists(st.integers(-5, 5), min_size=4, max_size=8))
    total = 0
    for c in coeffs:
        i = draw(st.integers(0, max_degree))
        j = draw(st.integers(0, max_degree - i))
        total += c * x**i * y**j
    return canonical(total)


class TestCanonical:
    def test_expands_products(self):
        assert canonical(x * (x + 1)) == x**2 + x

    def test_reduces_fractions(self):
        assert canonical((x**2 - 1) / (x - 1)) == x + 1

    def test_rational_functions_normalize(self):
        value = canonical(1 / (2 * x + 2))
        assert value == canonical(sympy.Rational(1, 2) / (x + 1))
        assert is_zero(value - sympy.Rational(1, 2) / (x + 1))

    def test_polynomial_predicate(self):
        assert is_polynomial(x**2 + 3)
        assert not is_polynomial(1 / x)


class TestParse:
    def test_precedence(self, ring2):
        assert ring2.parse("x^2 - 2*x*y + 1/2") == x**2 - 2 * x * y + sympy.Rational(1, 2)
        assert ring2.parse("-x^2") == -x**2
        assert ring2.parse("1 - 2 - 3") == -4
        assert ring2.parse("2^3^2") == 512

    def test_parentheses(self, ring2):
        assert ring2.parse("(x + y)^2") == canonical((x + y) ** 2)

    def test_unknown_identifier_has_position(self, ring2):
        with pytest.raises(ModelSyntaxError) as info:
            ring2.parse("x + z", line=3, column=10)
        assert info.value.line == 3
        assert info.value.column == 14
        assert "x" in info.value.expected and "y" in info.value.expected

    def test_negative_exponent_rejected(self, ring2):
        with pytest.raises(ModelSyntaxError):
            ring2.parse("x^(0-1)")

    def test_division_by_zero(self, ring2):
        with pytest.raises(ModelSyntaxError):
            ring2.parse("x/(y - y)")

    def test_jets(self):
        ring = ScalarRing(("x", "y"), (), ("f",))
        f = ring.function("f")
        value = ring.parse("f[x,y]")
        assert value == sympy.diff(f, x, y)
        assert ring.format(value) == "f[x,y]"


class TestFormat:
    def test_simple(self, ring2):
        assert ring2.format(0) == "0"
        assert ring2.format(x) == "x"
        assert ring2.format(-3) == "-3"

    @given(polynomials())
    def test_polynomials_reparse(self, p):
        ring = ScalarRing(("x", "y"))
        assert ring.parse(ring.format(p)) == p

    @given(polynomials(), polynomials())
    def test_fractions_reparse(self, p, q):
        if is_zero(q):
            return
        ring = ScalarRing(("x", "y"))
        value = canonical(p / q)
        assert is_zero(ring.parse(ring.format(value)) - value)


class TestRing:
    def test_fresh_names_avoid_declared(self):
        ring = ScalarRing(("x",), (), ("f1",))
        assert ring.fresh_names("f", 2) == ["f2", "f3"]

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            ScalarRing(("x", "x"))

    def test_differentiate_formal(self, ring2):
        f = ring2.formal("f")
        assert ring2.differentiate(f * x, 0) == canonical(f + x * sympy.diff(f, x))

    def test_gradient(self, ring2):
        a, b = ring2.symbols
        assert ring2.gradient(a**2 * b + b) == (2 * a * b, a**2 + 1)
