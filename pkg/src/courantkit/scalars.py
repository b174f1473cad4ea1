"""Exact coefficient ring.

Scalars are sympy expressions in three families of indeterminates: base
coordinates, constant parameters, and jets of formal function symbols. A jet
is an unevaluated ``Derivative`` of an applied undefined function, so the jet
rule and the symmetry of mixed partials come for free. Polynomials are kept
expanded; rational functions are kept as ``numerator * denominator**-1`` with
gcd removed and a monic denominator.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Sequence, Tuple

import sympy
from sympy.core.function import AppliedUndef

Scalar = sympy.Expr
Rational = sympy.Rational

ZERO = sympy.Integer(0)
ONE = sympy.Integer(1)


def _has_denominator(expr: sympy.Expr) -> bool:
    return any(
        p.exp.is_negative and not p.base.is_Number
        for p in expr.atoms(sympy.Pow)
    )


def _default_generator_key(gen: sympy.Expr) -> tuple:
    if isinstance(gen, sympy.Symbol):
        return (0, gen.name, ())
    name, jet = _jet_signature(gen)
    if name is not None:
        return (1, name, tuple(str(v) for v in jet))
    return (2, sympy.srepr(gen), ())


def _jet_signature(gen: sympy.Expr):
    """Return (function name, sorted derivative variables) for jets, else (None, ())."""
    if isinstance(gen, AppliedUndef):
        return gen.func.__name__, ()
    if isinstance(gen, sympy.Derivative) and isinstance(gen.expr, AppliedUndef):
        variables: List[sympy.Symbol] = []
        for var, count in gen.variable_count:
            variables.extend([var] * int(count))
        return gen.expr.func.__name__, tuple(sorted(variables, key=lambda s: s.name))
    return None, ()


def monomial_terms(expr: sympy.Expr) -> List[Tuple[Dict[sympy.Expr, int], sympy.Expr]]:
    """Split an expanded polynomial into (exponent map, rational coefficient) pairs."""
    terms = []
    for term in sympy.Add.make_args(expr):
        if term == 0:
            continue
        coeff, rest = term.as_coeff_Mul()
        powers: Dict[sympy.Expr, int] = {}
        if rest != 1:
            for base, exp in rest.as_powers_dict().items():
                powers[base] = powers.get(base, 0) + int(exp)
        terms.append((powers, coeff))
    return terms


def _ordered_terms(expr: sympy.Expr, key) -> List[Tuple[List[Tuple[sympy.Expr, int]], sympy.Expr]]:
    """Terms sorted by graded lexicographic order over generators ranked by ``key``."""
    terms = monomial_terms(expr)
    gens = sorted({g for powers, _ in terms for g in powers}, key=key)
    position = {g: i for i, g in enumerate(gens)}

    def grlex(item):
        powers, _ = item
        exps = [0] * len(gens)
        for g, e in powers.items():
            exps[position[g]] = e
        return (sum(exps), exps)

    ordered = sorted(terms, key=grlex, reverse=True)
    return [
        (sorted(powers.items(), key=lambda kv: position[kv[0]]), coeff)
        for powers, coeff in ordered
    ]


def _leading_coefficient(expr: sympy.Expr) -> sympy.Expr:
    terms = _ordered_terms(expr, _default_generator_key)
    return terms[0][1] if terms else ONE


def as_fraction(value) -> Tuple[sympy.Expr, sympy.Expr]:
    """Numerator and monic denominator of a canonical scalar."""
    expr = canonical(value)
    if not _has_denominator(expr):
        return expr, ONE
    num, den = sympy.fraction(expr)
    return sympy.expand(num), sympy.expand(den)


def canonical(value) -> sympy.Expr:
    """Normal form: expanded polynomial, or reduced fraction with monic denominator."""
    expr = sympy.sympify(value)
    if not _has_denominator(expr):
        return sympy.expand(expr)
    num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
    num, den = sympy.expand(num), sympy.expand(den)
    lc = _leading_coefficient(den)
    if lc != 1:
        num, den = sympy.expand(num / lc), sympy.expand(den / lc)
    if num == 0:
        return ZERO
    if den == 1:
        return num
    return sympy.Mul(num, sympy.Pow(den, -1))


def is_zero(value) -> bool:
    return canonical(value) == 0


def is_polynomial(value) -> bool:
    return not _has_denominator(canonical(value))


@dataclass(frozen=True)
class ScalarRing:
    """Indeterminate numbering for one base: coordinates, then parameters, then jets.

    Coordinates are 0-indexed in the Python API (the model files use 1-based
    frame indices but coordinate names).
    """
    coordinates: Tuple[str, ...] = ()
    parameters: Tuple[str, ...] = ()
    functions: Tuple[str, ...] = ()

    def __post_init__(self):
        names = list(self.coordinates) + list(self.parameters) + list(self.functions)
        if len(set(names)) != len(names):
            raise ValueError(f"Duplicate symbol names in {names}")
        for name in names:
            if not (name.replace('_', 'a').isalnum() and not name[0].isdigit()):
                raise ValueError(f"Invalid symbol name: {name!r}")

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    @cached_property
    def symbols(self) -> Tuple[sympy.Symbol, ...]:
        return tuple(sympy.Symbol(name) for name in self.coordinates)

    @cached_property
    def parameter_symbols(self) -> Tuple[sympy.Symbol, ...]:
        return tuple(sympy.Symbol(name) for name in self.parameters)

    def coordinate(self, i: int) -> sympy.Symbol:
        return self.symbols[i]

    def parameter(self, name: str) -> sympy.Symbol:
        if name not in self.parameters:
            raise KeyError(f"Unknown parameter: {name}")
        return sympy.Symbol(name)

    def formal(self, name: str) -> sympy.Expr:
        """A generic function of all coordinates (a constant over a point)."""
        if not self.symbols:
            return sympy.Symbol(name)
        return sympy.Function(name)(*self.symbols)

    def function(self, name: str) -> sympy.Expr:
        if name not in self.functions:
            raise KeyError(f"Unknown function symbol: {name}")
        return self.formal(name)

    def jet(self, name: str, variables: Sequence[str]) -> sympy.Expr:
        expr = self.function(name)
        if not variables:
            return expr
        return sympy.diff(expr, *[sympy.Symbol(v) for v in variables])

    def fresh_names(self, prefix: str, count: int) -> List[str]:
        taken = set(self.coordinates) | set(self.parameters) | set(self.functions)
        names, k = [], 1
        while len(names) < count:
            candidate = f"{prefix}{k}"
            if candidate not in taken:
                names.append(candidate)
            k += 1
        return names

    def fresh_parameter(self, prefix: str = "lam") -> sympy.Symbol:
        return sympy.Symbol(self.fresh_names(prefix, 1)[0])

    def differentiate(self, s, i: int) -> sympy.Expr:
        if not 0 <= i < self.dim:
            raise IndexError(f"Coordinate index {i} out of range for dimension {self.dim}")
        return canonical(sympy.diff(s, self.symbols[i]))

    def gradient(self, s) -> Tuple[sympy.Expr, ...]:
        return tuple(self.differentiate(s, i) for i in range(self.dim))

    # ------------------------------------------------------------------
    # Canonical printing

    def generator_key(self, gen: sympy.Expr) -> tuple:
        if isinstance(gen, sympy.Symbol):
            if gen.name in self.coordinates:
                return (0, self.coordinates.index(gen.name), '', ())
            if gen.name in self.parameters:
                return (1, self.parameters.index(gen.name), '', ())
            if gen.name in self.functions:
                return (2, 0, gen.name, ())
            return (3, 0, gen.name, ())
        name, jet = _jet_signature(gen)
        if name is not None:
            index = tuple(self._coordinate_rank(v) for v in jet)
            return (2, 0, name, index)
        return (4, 0, sympy.srepr(gen), ())

    def _coordinate_rank(self, symbol: sympy.Symbol) -> int:
        if symbol.name in self.coordinates:
            return self.coordinates.index(symbol.name)
        return len(self.coordinates)

    def format_generator(self, gen: sympy.Expr) -> str:
        if isinstance(gen, sympy.Symbol):
            return gen.name
        name, jet = _jet_signature(gen)
        if name is not None:
            if not jet:
                return name
            ordered = sorted(jet, key=self._coordinate_rank)
            return f"{name}[{','.join(v.name for v in ordered)}]"
        return f"({gen})"

    def _format_polynomial(self, expr: sympy.Expr) -> str:
        terms = _ordered_terms(expr, self.generator_key)
        if not terms:
            return "0"
        pieces = []
        for position, (powers, coeff) in enumerate(terms):
            factors = [
                self.format_generator(g) if e == 1 else f"{self.format_generator(g)}^{e}"
                for g, e in powers
            ]
            magnitude = abs(coeff)
            monomial = "*".join(factors)
            if not monomial:
                body = str(magnitude)
            elif magnitude == 1:
                body = monomial
            else:
                body = f"{magnitude}*{monomial}"
            negative = coeff < 0
            if position == 0:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f" - {body}" if negative else f" + {body}")
        return "".join(pieces)

    def format(self, s) -> str:
        num, den = as_fraction(s)
        if den == 1:
            return self._format_polynomial(num)
        return f"({self._format_polynomial(num)})/({self._format_polynomial(den)})"

    def parse(self, text: str, line: int = 1, column: int = 1) -> sympy.Expr:
        from .expression import parse_expression
        return parse_expression(text, self, line=line, column=column)

    def identifiers(self) -> Iterable[str]:
        return tuple(self.coordinates) + tuple(self.parameters) + tuple(self.functions)
