"""Identity suites on a double.

The first group holds for any pair of algebroid structures in duality; the
second group ("bialgebroid context") is expected only when the pair is a Lie
bialgebroid. Every clause is evaluated and reported either way.
"""

from itertools import product

import sympy

from ..double import DoubleStructure
from ..errors import HypothesisFailure
from ..reports import ERROR, CheckReport
from ..scalars import ZERO, canonical
from ..sections import GradedSection, contract
from .base import Check, formal_multipliers
from .courant_axioms import (anchor_residual, collect, frame_index_tuples,
                             invariance_residual, leibniz_residual, section_inputs)

HALF = sympy.Rational(1, 2)

CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def _cyclic(args):
    return [tuple(args[i] for i in perm) for perm in CYCLIC]


def t_closed_form_residual(D, e1, e2, e3):
    return canonical(D.T_function(e1, e2, e3) - D.T_closed_form(e1, e2, e3))


def t_skew_residual(D, e1, e2, e3):
    t = D.T_function(e1, e2, e3)
    return (canonical(t + D.T_function(e2, e1, e3)), canonical(t + D.T_function(e1, e3, e2)))


def t_expansion_residual(D, e1, e2, e3):
    """([e1,e2],e3)_+ - T - rho(e1)(e2,e3)_+/2 + rho(e2)(e3,e1)_+/2."""
    lhs = D.plus(D.courant_bracket(e1, e2), e3)
    rhs = (
        D.T_function(e1, e2, e3)
        + HALF * D.rho_apply(e1, D.plus(e2, e3))
        - HALF * D.rho_apply(e2, D.plus(e3, e1))
    )
    return canonical(lhs - rhs)


def minus_cyclic_residual(D, e1, e2, e3):
    """Cyclic sum of ([e_i,e_j],e_k)_- against T plus the anchor and bracket corrections."""
    lhs = ZERO
    correction = ZERO
    for a, b, c in _cyclic((e1, e2, e3)):
        lhs += D.minus(D.courant_bracket(a, b), c)
        m = D.minus(a, b)
        correction += (
            D.A.anchor_apply(c.X, m)
            + 2 * D.Astar.anchor_apply(c.xi, m)
            - D._duality(D.Astar.bracket(a.xi, b.xi), c.X)
        )
    return canonical(lhs - D.T_function(e1, e2, e3) - correction)


def interior_lie_residual(D, X, xi, eta):
    """i_X L_xi d eta against the five-term expansion."""
    A, B = D.A, D.Astar
    lhs = contract(X, B.schouten(xi, A.differential(eta)).with_host(B.name)).with_host(B.name)
    g = GradedSection.scalar(D.rank, A.pairing(eta, X))
    rhs = (
        B.bracket(xi, A.lie_derivative(X, eta).with_host(B.name))
        - A.lie_derivative(B.lie_derivative(xi, X).with_host(A.name), eta)
        + B.bracket(A.differential(g).with_host(B.name), xi)
        + A.differential(GradedSection.scalar(D.rank, B.anchor_apply(xi, g.value())))
        - A.differential(GradedSection.scalar(D.rank, A.pairing(B.bracket(xi, eta), X)))
    )
    return lhs - rhs.with_host(B.name)


def mixed_bracket_residual(D, X, xi):
    """[X, xi] against (-L_xi X + d_*<xi,X>/2) + (L_X xi - d<xi,X>/2)."""
    A, B = D.A, D.Astar
    e1, e2 = D.section(X=X), D.section(xi=xi)
    g = GradedSection.scalar(D.rank, A.pairing(xi, X))
    expected = D.section(
        -B.lie_derivative(xi, X) + B.differential(g).scale(HALF),
        A.lie_derivative(X, xi) - A.differential(g).scale(HALF),
    )
    return D.courant_bracket(e1, e2) - expected


def anchor_commutator_residual(D, f):
    """[a(X), a_*(xi)] f - a_*(L_X xi) f + a(L_xi X) f - a(d_*<xi,X>) f."""
    A, B = D.A, D.Astar

    def fn(X, xi):
        lhs = A.anchor_apply(X, B.anchor_apply(xi, f)) - B.anchor_apply(xi, A.anchor_apply(X, f))
        g = GradedSection.scalar(D.rank, A.pairing(xi, X))
        rhs = (
            B.anchor_apply(A.lie_derivative(X, xi), f)
            - A.anchor_apply(B.lie_derivative(xi, X).with_host(A.name), f)
            + A.anchor_apply(B.differential(g).with_host(A.name), f)
        )
        return canonical(lhs - rhs)
    return fn


def exact_exchange_residual(D, f):
    """(L_{d_* f} xi + [d f, xi], L_{d f} X + [d_* f, X])."""
    A, B = D.A, D.Astar
    g = GradedSection.scalar(D.rank, f)
    dstar_f = B.differential(g).with_host(A.name)
    d_f = A.differential(g).with_host(B.name)

    def fn(X, xi):
        return D.section(
            B.lie_derivative(d_f, X) + A.bracket(dstar_f, X),
            A.lie_derivative(dstar_f, xi) + B.bracket(d_f, xi),
        )
    return fn


def twisted_leibniz_residual(D, f):
    def fn(e1, e2):
        lhs = D.twisted_bracket(e1, e2.scale(f))
        rhs = D.twisted_bracket(e1, e2).scale(f) + e2.scale(D.rho_apply(e1, f))
        return lhs - rhs
    return fn


def twisted_anchor_residual(D, g):
    def fn(e1, e2):
        lhs = D.vector_field_apply(D.rho(D.twisted_bracket(e1, e2)), g)
        rhs = D.rho_apply(e1, D.rho_apply(e2, g)) - D.rho_apply(e2, D.rho_apply(e1, g))
        return canonical(lhs - rhs)
    return fn


class IdentitySuite(Check):
    """Closed forms and lemmas used in the proofs of the double construction."""

    def __init__(self, triples: str = "distinct", samples: int = 0, seed: int = 0,
                 max_degree: int = 1, workers: int = 1):
        self.triples = triples
        self.samples = samples
        self.seed = seed
        self.max_degree = max_degree
        self.workers = workers

    def get_name(self) -> str:
        return "identities"

    def run(self, D: DoubleStructure) -> CheckReport:
        report = self.new_report(D.name)
        ring = D.ring
        r = D.rank
        size = 2 * r
        f1, f2, f3 = formal_multipliers(ring, 3, "f")
        (g,) = formal_multipliers(ring, 1, "g")

        def inputs(indices, arity):
            return section_inputs(D, indices, (f1, f2, f3)[:arity], self.samples, arity,
                                  self.seed, self.max_degree)

        triples = inputs(frame_index_tuples(size, 3, self.triples), 3)
        pairs = inputs(frame_index_tuples(size, 2, "all"), 2)
        ordered = inputs(list(product(range(size), repeat=2)), 2)
        # X from A, xi and eta from A*
        mixed = [
            (label, (s[0].X, s[1].xi))
            for label, s in section_inputs(D, [(i, r + j) for i in range(r) for j in range(r)], (f1, f2))
        ]
        exchange = [
            (label, (s[0].X, s[1].xi, s[2].xi))
            for label, s in section_inputs(
                D, [(i, r + j, r + k) for i in range(r) for j in range(r) for k in range(r)],
                (f1, f2, f3),
            )
        ]

        def add(name, items, fn):
            report.add_clause(name, collect(ring, items, fn, self.workers))

        add("T-closed-form", triples, lambda a, b, c: t_closed_form_residual(D, a, b, c))
        add("T-skew", triples, lambda a, b, c: t_skew_residual(D, a, b, c))
        add("T-pairing-expansion", triples, lambda a, b, c: t_expansion_residual(D, a, b, c))
        add("minus-pairing-cyclic", triples, lambda a, b, c: minus_cyclic_residual(D, a, b, c))
        add("interior-lie-exchange", exchange, lambda X, xi, eta: interior_lie_residual(D, X, xi, eta))
        add("mixed-bracket", mixed, lambda X, xi: mixed_bracket_residual(D, X, xi))

        try:
            D.require_algebroids()
        except HypothesisFailure as exc:
            report.add_clause("jacobi-anomaly", detail=str(exc), status=ERROR)
        else:
            add("jacobi-anomaly", triples, lambda a, b, c: D.jacobi_anomaly(a, b, c).residual)

        # bialgebroid context
        add("leibniz-rule", ordered, leibniz_residual(D, g))
        add("anchor-homomorphism", pairs, anchor_residual(D, g))
        add("anchor-commutator", mixed, anchor_commutator_residual(D, g))
        add("pairing-invariance", triples, lambda e, h1, h2: invariance_residual(D, e, h1, h2))
        add("exact-section-exchange", mixed, exact_exchange_residual(D, g))
        add("twisted-leibniz", ordered, twisted_leibniz_residual(D, g))
        add("twisted-anchor", pairs, twisted_anchor_residual(D, g))
        return report


def check_identities(D: DoubleStructure, **kwargs) -> CheckReport:
    return IdentitySuite(**kwargs).run(D)
