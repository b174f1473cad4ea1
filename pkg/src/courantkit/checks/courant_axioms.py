"""The five Courant-algebroid axioms, checked on a double with formal functions.

Sections quantified over are frame elements of E times one formal multiplier
each (plus optional random polynomial sections); functions quantified over
are formal function symbols, so every clause is a finite jet-level identity.
"""

from itertools import combinations, combinations_with_replacement, product
from typing import Callable, List, Sequence, Tuple

from ..reports import CheckReport, Residual
from ..sampling import make_rng, random_double_section
from ..scalars import canonical
from ..utils import parallel_map
from .base import Check, formal_multipliers, is_null, residual

Inputs = List[Tuple[str, tuple]]

TRIPLE_MODES = ("distinct", "all")


def frame_index_tuples(size: int, arity: int, mode: str = "distinct") -> List[tuple]:
    if mode not in TRIPLE_MODES:
        raise ValueError(f"Unknown triple mode: {mode}. Available: {', '.join(TRIPLE_MODES)}")
    if mode == "all":
        return list(combinations_with_replacement(range(size), arity))
    return list(combinations(range(size), arity))


def section_inputs(D, indices: Sequence[tuple], multipliers: Sequence,
                   samples: int = 0, arity: int = 3, seed: int = 0, max_degree: int = 1) -> Inputs:
    """Frame tuples scaled by formal multipliers, then ``samples`` random tuples."""
    frame = D.frame()
    labels = D.frame_labels()
    inputs: Inputs = []
    for idx in indices:
        sections = tuple(frame[i].scale(multipliers[k]) for k, i in enumerate(idx))
        label = ",".join(f"{D.ring.format(multipliers[k])}*{labels[i]}" for k, i in enumerate(idx))
        inputs.append((label, sections))
    rng = make_rng(seed)
    for s in range(samples):
        sections = tuple(random_double_section(D, rng, max_degree) for _ in range(arity))
        inputs.append((f"sample{s + 1}", sections))
    return inputs


def collect(ring, inputs: Inputs, fn: Callable, workers: int = 1) -> List[Residual]:
    """Evaluate ``fn`` on every input, keeping nonzero results in input order."""
    values = parallel_map(lambda item: fn(*item[1]), inputs, workers)
    return [residual(ring, label, v) for (label, _), v in zip(inputs, values) if not is_null(v)]


# ----------------------------------------------------------------------
# Clause residuals


def jacobi_residual(D, e1, e2, e3):
    """[[e1,e2],e3] + c.p. - D T(e1,e2,e3)."""
    return D.jacobiator(e1, e2, e3) - D.script_D(D.T_function(e1, e2, e3))


def anchor_residual(D, g):
    def fn(e1, e2):
        lhs = D.vector_field_apply(D.rho(D.courant_bracket(e1, e2)), g)
        rhs = D.rho_apply(e1, D.rho_apply(e2, g)) - D.rho_apply(e2, D.rho_apply(e1, g))
        return canonical(lhs - rhs)
    return fn


def leibniz_residual(D, f):
    def fn(e1, e2):
        lhs = D.courant_bracket(e1, e2.scale(f))
        rhs = (
            D.courant_bracket(e1, e2).scale(f)
            + e2.scale(D.rho_apply(e1, f))
            - D.script_D(f).scale(D.plus(e1, e2))
        )
        return lhs - rhs
    return fn


def invariance_residual(D, e, h1, h2):
    """rho(e)(h1,h2)_+ - ([e,h1] + D(e,h1)_+, h2)_+ - (h1, [e,h2] + D(e,h2)_+)_+."""
    lhs = D.rho_apply(e, D.plus(h1, h2))
    rhs = D.plus(D.twisted_bracket(e, h1), h2) + D.plus(h1, D.twisted_bracket(e, h2))
    return canonical(lhs - rhs)


class CourantAxiomsCheck(Check):
    """Clauses (i)-(v) of the Courant-algebroid definition."""

    def __init__(self, triples: str = "distinct", samples: int = 0, seed: int = 0,
                 max_degree: int = 1, workers: int = 1):
        self.triples = triples
        self.samples = samples
        self.seed = seed
        self.max_degree = max_degree
        self.workers = workers

    def get_name(self) -> str:
        return "courant-axioms"

    def inputs(self, D, arity: int, indices=None) -> Inputs:
        multipliers = formal_multipliers(D.ring, arity, "f")
        if indices is None:
            indices = frame_index_tuples(2 * D.rank, arity, self.triples)
        return section_inputs(D, indices, multipliers, self.samples, arity, self.seed, self.max_degree)

    def run(self, D) -> CheckReport:
        report = self.new_report(D.name)
        ring = D.ring
        g1, g2 = formal_multipliers(ring, 2, "g")
        size = 2 * D.rank

        triples = self.inputs(D, 3)
        report.add_clause(
            "(i) jacobi",
            collect(ring, triples, lambda a, b, c: jacobi_residual(D, a, b, c), self.workers),
        )

        pairs = self.inputs(D, 2, frame_index_tuples(size, 2, "all"))
        report.add_clause("(ii) anchor", collect(ring, pairs, anchor_residual(D, g1), self.workers))

        ordered = self.inputs(D, 2, list(product(range(size), repeat=2)))
        report.add_clause("(iii) leibniz", collect(ring, ordered, leibniz_residual(D, g1), self.workers))

        value = D.plus(D.script_D(g1), D.script_D(g2))
        report.add_clause(
            "(iv) rho-D",
            [] if value == 0 else [residual(ring, f"{ring.format(g1)},{ring.format(g2)}", value)],
        )

        rotated = [
            (f"{label}@{k + 1}", (s[k], s[(k + 1) % 3], s[(k + 2) % 3]))
            for label, s in triples
            for k in range(3)
        ]
        report.add_clause(
            "(v) invariance",
            collect(ring, rotated, lambda e, h1, h2: invariance_residual(D, e, h1, h2), self.workers),
        )
        return report


def check_courant_axioms(D, triples: str = "distinct", samples: int = 0, seed: int = 0,
                         max_degree: int = 1, workers: int = 1) -> CheckReport:
    return CourantAxiomsCheck(triples, samples, seed, max_degree, workers).run(D)
