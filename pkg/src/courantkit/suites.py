"""Randomized oracle-equivalence suites and the structure-constant mutation harness."""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Optional

from .algebroid import LieAlgebroid
from .checks.bialgebroid import check_bialgebroid
from .checks.courant_axioms import check_courant_axioms
from .dirac import (BivectorOperator, TwoFormOperator, graph_subbundle,
                    integrability_oracle, mc_residual_H, mc_residual_I)
from .double import DoubleStructure
from .errors import HypothesisFailure
from .poisson import PoissonTensor, flipped_cotangent_double, hamiltonian_2form_residual
from .sampling import make_rng, random_section
from .utils import parallel_map

logger = logging.getLogger(__name__)

OPERATOR_KINDS = ("H", "I")


@dataclass
class OracleSummary:
    """Agreement between a Maurer-Cartan criterion and the direct closure test."""
    subject: str
    kind: str
    instances: int = 0
    agreements: int = 0
    dirac: int = 0
    disagreements: List[str] = field(default_factory=list)

    @property
    def agreement_rate(self) -> float:
        return self.agreements / self.instances if self.instances else 1.0

    def get_summary(self) -> Dict[str, Any]:
        return {
            'subject': self.subject,
            'kind': self.kind,
            'instances': self.instances,
            'agreements': self.agreements,
            'dirac': self.dirac,
            'agreement_rate': self.agreement_rate,
            'disagreements': list(self.disagreements),
        }


def _record(summary: OracleSummary, results) -> OracleSummary:
    for label, mc_zero, closed in results:
        summary.instances += 1
        summary.dirac += int(closed)
        if mc_zero == closed:
            summary.agreements += 1
        else:
            summary.disagreements.append(label)
            logger.warning("%s: criterion and oracle disagree on %s", summary.subject, label)
    return summary


def oracle_equivalence(D: DoubleStructure, kind: str = "H", instances: int = 20, seed: int = 0,
                       max_degree: int = 1, workers: int = 1) -> OracleSummary:
    """Random bivectors (kind "H") or 2-forms (kind "I"): residual zero iff graph is Dirac.

    Args:
        D: A Lie bialgebroid double
        kind: "H" for sections of the second power of A, "I" for the dual side
        instances: Number of random operators
        seed: Seed for the numpy generator
        max_degree: Coefficient degree bound
        workers: Thread-pool width

    Returns:
        OracleSummary with one entry per instance
    """
    if kind not in OPERATOR_KINDS:
        raise ValueError(f"Unknown operator kind: {kind}. Available: {', '.join(OPERATOR_KINDS)}")
    D.require_bialgebroid()
    rng = make_rng(seed)
    host = D.A.name if kind == "H" else D.Astar.name
    operators = [random_section(D.ring, D.rank, 2, rng, max_degree, host) for _ in range(instances)]

    def run(item):
        k, op = item
        if kind == "H":
            mc = mc_residual_H(D, op)
            L = graph_subbundle(D, BivectorOperator(op))
        else:
            mc = mc_residual_I(D, op)
            L = graph_subbundle(D, TwoFormOperator(op))
        return f"{kind}{k + 1}: {op.format(D.ring)}", mc.is_zero(), integrability_oracle(L).passed

    results = parallel_map(run, list(enumerate(operators)), workers)
    return _record(OracleSummary(D.name, kind), results)


def form_oracle_equivalence(pi: PoissonTensor, instances: int = 20, seed: int = 0,
                            max_degree: int = 1, workers: int = 1) -> OracleSummary:
    """Random 2-forms: d w + 1/2 [w, w]_pi = 0 iff the graph is Dirac in (T*M_pi, TM)."""
    D = flipped_cotangent_double(pi)
    rng = make_rng(seed)
    forms = [random_section(pi.ring, pi.base_dim, 2, rng, max_degree, D.A.name) for _ in range(instances)]

    def run(item):
        k, omega = item
        mc = hamiltonian_2form_residual(pi, omega)
        L = graph_subbundle(D, BivectorOperator(omega))
        return f"omega{k + 1}: {omega.format(pi.ring)}", mc.is_zero(), integrability_oracle(L).passed

    results = parallel_map(run, list(enumerate(forms)), workers)
    return _record(OracleSummary(D.name, "omega"), results)


# ----------------------------------------------------------------------
# Mutation harness


def perturb(A: LieAlgebroid, i: int, j: int, k: int, delta=1) -> LieAlgebroid:
    """Add ``delta`` to the coefficient of e_k in [e_i, e_j] (and its antisymmetric partner)."""
    table = [[list(row) for row in plane] for plane in A.structure]
    table[i][j][k] = table[i][j][k] + delta
    table[j][i][k] = table[j][i][k] - delta
    return LieAlgebroid(A.ring, A.rank, A.anchor, tuple(tuple(tuple(r) for r in p) for p in table), A.name)


@dataclass
class MutantResult:
    label: str
    failing: List[str]

    @property
    def detected(self) -> bool:
        return bool(self.failing)


def mutants(D: DoubleStructure, delta=1) -> List[tuple]:
    """Every single structure-constant perturbation of either factor."""
    out = []
    for side, alg in (("A", D.A), ("A*", D.Astar)):
        for i, j in combinations(range(D.rank), 2):
            for k in range(D.rank):
                label = f"{side}:c^{k + 1}_{i + 1}{j + 1}+{delta}"
                mutated = perturb(alg, i, j, k, delta)
                pair = (mutated, D.Astar) if side == "A" else (D.A, mutated)
                out.append((label, DoubleStructure(*pair, name=f"{D.name}[{label}]")))
    return out


def _failing_clauses(D: DoubleStructure, deep: bool) -> List[str]:
    failing = []
    for alg in (D.A, D.Astar):
        failing += [f"{alg.name}: {c.name}" for c in alg.report.failures()]
    if failing or not deep:
        return failing
    try:
        failing += [f"bialgebroid: {c.name}" for c in check_bialgebroid(D).failures()]
    except HypothesisFailure as exc:
        failing.append(f"bialgebroid: {exc}")
    if not failing:
        failing += [f"courant: {c.name}" for c in check_courant_axioms(D).failures()]
    return failing


def mutation_suite(D: DoubleStructure, delta=1, deep: bool = True, workers: int = 1,
                   limit: Optional[int] = None) -> List[MutantResult]:
    """Run every mutant through the algebroid checks, escalating to the double's checks.

    A mutant that passes the algebroid axioms is checked for bialgebroid
    compatibility and, if that also passes, for the Courant axioms.
    """
    candidates = mutants(D, delta)[:limit]
    results = parallel_map(
        lambda item: MutantResult(item[0], _failing_clauses(item[1], deep)), candidates, workers,
    )
    undetected = [r.label for r in results if not r.detected]
    if undetected:
        logger.warning("%s: %d undetected mutants: %s", D.name, len(undetected), ", ".join(undetected))
    return results
