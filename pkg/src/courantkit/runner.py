"""Command dispatch: one model document, one command, one deterministic report."""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

from .checks.algebroid_checks import check_morphism_to_algebra
from .checks.base import formal_multipliers, residual
from .checks.bialgebroid import check_bialgebroid
from .checks.courant_axioms import check_courant_axioms, collect, frame_index_tuples, section_inputs
from .checks.identities import check_identities
from .dirac import (BivectorOperator, SubbundleSpec, TwoFormOperator, check_hamiltonian,
                    dual_pair, graph_subbundle, induced_dual_algebroid, integrability_oracle,
                    is_isotropic, mc_residual_H, mc_residual_I, null_dirac_check, reduction_check)
from .errors import CourantKitError, NotPoisson, ResolutionError, ShapeError, SingularMatrix
from .linalg import invert_matrix, matadd
from .model import ModelDocument
from .poisson import compose_minus, compose_plus, cotangent_double, is_poisson, nijenhuis_tensor
from .reports import ERROR, FAIL, PASS, CheckReport, Residual
from .utils import make_serializable

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2

STATUS_ICONS = {PASS: "✅", FAIL: "❌", ERROR: "⚠️"}


@dataclass
class RunFlags:
    """Options shared by every command; unused ones are ignored."""
    double: Optional[str] = None
    u: Optional[str] = None
    v: Optional[str] = None
    graph_of: Optional[str] = None
    h: List[str] = field(default_factory=list)
    plus: bool = False
    minus: bool = False
    omega: Optional[str] = None
    pi: Optional[str] = None
    morphism: Optional[str] = None
    triples: str = "distinct"
    samples: int = 0
    max_degree: int = 2
    seed: int = 0
    workers: int = 1
    identities: bool = False


@dataclass
class ReportDocument:
    """Everything one command produced, printable as text or porcelain JSON."""
    command: str
    reports: List[CheckReport] = field(default_factory=list)
    outputs: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None
    exit_code: int = EXIT_PASS

    @property
    def status(self) -> str:
        if self.exit_code == EXIT_INPUT:
            return ERROR
        return PASS if self.exit_code == EXIT_PASS else FAIL

    def get_summary(self) -> Dict[str, Any]:
        clauses = [c for r in self.reports for c in r.clauses]
        return {
            'command': self.command,
            'status': self.status,
            'exit_code': self.exit_code,
            'clauses': len(clauses),
            'passed': sum(1 for c in clauses if c.passed),
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'status': self.status,
            'exit_code': self.exit_code,
            'error': self.error,
            'outputs': make_serializable(self.outputs),
            'reports': [r.to_dict() for r in self.reports],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [f"$ {self.command}"]
        for report in self.reports:
            lines.append(f"{STATUS_ICONS[report.status]} {report.check} [{report.subject}]")
            for clause in report.clauses:
                suffix = f"  ({clause.detail})" if clause.detail else ""
                lines.append(f"   {STATUS_ICONS[clause.status]} {clause.name}{suffix}")
                for r in clause.residuals:
                    lines.append(f"      {r.witness}: {r.value}")
        if self.outputs:
            lines.append("📊 outputs")
            for key, value in self.outputs.items():
                lines.extend(_format_output(key, value))
        if self.error:
            lines.append(f"❌ error: {self.error}")
        summary = self.get_summary()
        lines.append(
            f"🏁 {summary['status'].upper()}: {summary['passed']}/{summary['clauses']} clauses passed"
            f" (exit {self.exit_code})"
        )
        return "\n".join(lines) + "\n"


def _format_output(key: str, value: Any, indent: str = "   ") -> List[str]:
    if isinstance(value, dict):
        out = [f"{indent}{key}:"]
        for k, v in value.items():
            out.extend(_format_output(str(k), v, indent + "   "))
        return out
    if isinstance(value, (list, tuple)):
        return [f"{indent}{key} = [" + ", ".join(str(v) for v in value) + "]"]
    return [f"{indent}{key} = {value}"]


# ----------------------------------------------------------------------
# Resolution helpers


def _double_name(doc: ModelDocument, flags: RunFlags) -> str:
    if flags.double:
        return flags.double
    if len(doc.doubles) == 1:
        return next(iter(doc.doubles))
    raise ResolutionError("--double is required when the model declares zero or several doubles")


def _require(value: Optional[str], flag: str) -> str:
    if not value:
        raise ResolutionError(f"this command needs {flag}")
    return value


def _matrix_outputs(ring, matrix, label: str) -> Dict[str, str]:
    """Nonzero upper-triangular entries of an antisymmetric frame matrix."""
    n = len(matrix)
    return {
        f"{label}[{i + 1},{j + 1}]": ring.format(matrix[i][j])
        for i in range(n) for j in range(i + 1, n) if matrix[i][j] != 0
    }


def _base_vectors(doc: ModelDocument, names: Sequence[str]) -> List[list]:
    """Components of degree-1 multivector sections on a base-rank host."""
    rows = []
    for name in names:
        t = doc.tensor(name)
        if t.side != "multivector" or t.degree != 1 or t.section.rank != doc.ring.dim:
            raise ShapeError(f"{name!r} is not a vector field on the base")
        rows.append(t.section.components())
    if not rows:
        raise ResolutionError("this command needs --h NAME...")
    return rows


def _graph_operator(doc: ModelDocument, double: str, name: str):
    side, section = doc.on_double(double, name)
    if section.degree != 2:
        raise ShapeError(f"{name!r} has degree {section.degree}; a graph needs degree 2")
    return side, section


# ----------------------------------------------------------------------
# Commands


def cmd_validate(doc: ModelDocument, flags: RunFlags, out: ReportDocument) -> None:
    for decl in doc.algebroids.values():
        out.reports.append(decl.algebroid.report)
    for decl in doc.doubles.values():
        base = decl.double.base_poisson_tensor()
        report = CheckReport("double", decl.name)
        report.add_clause("base-tensor-skew", [] if base is not None else [
            Residual("a a_*^T", "not antisymmetric")
        ])
        out.reports.append(report)
    out.outputs['declarations'] = {
        'algebroids': len(doc.algebroids),
        'tensors': len(doc.tensors),
        'doubles': len(doc.doubles),
        'subbundles': len(doc.subbundles),
        'morphisms': len(doc.morphisms),
    }


def cmd_courant_check(doc: ModelDocument, flags: RunFlags, out: ReportDocument) -> None:
    D = doc.double(_double_name(doc, flags))
    options = dict(triples=flags.triples, samples=flags.samples, seed=flags.seed,
                   max_degree=flags.max_degree, workers=flags.workers)
    out.reports.append(check_courant_axioms(D, **options))
    if flags.identities:
        out.reports.append(check_identities(D, **options))


def cmd_bialgebroid_check(doc: ModelDocument, flags: RunFlags, out: ReportDocument) -> None:
    D = doc.double(_double_name(doc, flags))
    direct = check_bialgebroid(D, flags.workers)
    flipped = check_bialgebroid(D.flip(), flags.workers)
    out.reports.extend([direct, flipped])
    duality = CheckReport("duality", D.name)
    duality.add_clause("flip-agreement", [] if direct.passed == flipped.passed else [
        Residual("verdicts", f"{direct.status} vs {flipped.status}")
    ])
    out.reports.append(duality)


def cmd_anomaly(doc: ModelDocument, flags: RunFlags, out: ReportDocument) -> None:
    D = doc.double(_double_name(doc, flags))
    D.require_algebroids()
    multipliers = formal_multipliers(D.ring, 3, "f")
    indices = frame_index_tuples(2 * D.rank, 3, flags.triples)
    inputs = section_inputs(D, indices, multipliers, flags.samples, 3, flags.seed, flags.max_degree)
    report = CheckReport("anomaly", D.name)
    report.add_clause(
        "residual",
        collect(D.ring, inputs, lambda a, b, c: D.jacobi_anomaly(a, b, c).residual, flags.workers),
        detail="J - D T + (J1 + J2 + c.p.)",
    )
    compatibility = check_bialgebroid(D, flags.workers)
    report.add_clause("compatibility", compatibility.clause("derivation").residuals,
                      detail="d_* derivation of the bracket on A")
    out.reports.append(report)
    out.outputs['triples'] = len(inputs)


def _subbundle_from_flags(doc: ModelDocument, double: str, flags: RunFlags):
    if flags.graph_of:
        side, section = _graph_operator(doc, double, flags.graph_of)
        op = BivectorOperator(section) if side == "A" else TwoFormOperator(section)
        return graph_subbundle(doc.double(double), op, f"graph({flags.graph_of})")
    if len(flags.h) == 1 and flags.h[0] in doc.subbundles:
        return doc.subbundle(flags.h[0])
    if flags.h:
        members = [doc.member(double, m) for m in flags.h]
        return SubbundleSpec(doc.double(double), members, name="L")
    raise ResolutionError("dirac-check needs --graph-of NAME or --h NAME...")


def cmd_dirac_check(doc: ModelDocument, flags: RunFlags, out: ReportDocument) -> None:
    double = _double_name(doc, flags)
    L = _subbundle_from_flags(doc, double, flags)
    D = L.host
    report = CheckReport("dirac-structure", L.name)
    report.add_clause("maximal-rank", [] if L.rank == D.rank else [
        Residual("rank", f"{L.rank} (expected {D.rank})")
    ])
    isotropic = is_isotropic(L)
    report.add_clause("isotropic", [] if isotropic else [Residual("(.,.)_+", "nonzero on L")])
    out.reports.append(report)
    if isotropic:
        report.extend(integrability_oracle(L))
    else:
        report.add_clause("closure", detail="skipped: L is not isotropic", status=ERROR)
    out.outputs['members'] = L.format()


def cmd_mc_residual(doc: ModelDocument, flags: RunFlags, out: ReportDocument) -> None:
    double = _double_name(doc, flags)
    name = _require(flags.graph_of, "--graph-of NAME")
    D = doc.double(double)
    side, section = _graph_operator(doc, double, name)
    if side == "A":
        value, op = mc_residual_H(D, section), BivectorOperator(section)
    else:
        value, op = mc_residual_I(D, section), TwoFormOperator(section)
    report = CheckReport("maurer-cartan", f"{D.name}:{name}")
    report.add_clause("maurer-cartan", [] if value.is_zero() else [residual(D.ring, name, value)])
    closed = integrability_oracle(graph_subbundle(D, op, f"graph({name})")).passed
    report.add_clause("oracle-agreement", [] if closed == value.is_zero() else [
        Residual(name, f"residual {'zero' if value.is_zero() else 'nonzero'}, "
                               f"graph {'closed' if closed else 'not closed'}")
    ])
    out.reports.append(report)
    out.outputs['residual'] = value.format(D.ring)


def cmd_hamiltonian(doc: ModelDocument, flags: RunFlags, out: ReportDocument) -> None:
    if flags.omega:
        pi = doc.poisson(_require(flags.pi, "--pi NAME"))
        omega = doc.tensor(flags.omega)
        if omega.side != "form" or omega.degree != 2:
            raise ShapeError(f"{flags.omega!r} is not a 2-form")
        data, induced = nijenhuis_tensor(pi, omega.section)
        report = CheckReport("nijenhuis", f"{pi.name}:{flags.omega}")
        report.add_clause("closed", [] if data.closed else [
            Residual("d omega", "nonzero")
        ])
        report.add_clause("complementary", [] if data.complementary else [
            Residual("[omega,omega]_pi", "nonzero")
        ])
        if data.tensor_poisson is not None:
            report.add_clause("N-pi-poisson", [] if data.tensor_poisson else [
                Residual("[N pi, N pi]", "nonzero")
            ])
            report.add_clause("compatible", [] if data.compatible else [
                Residual("[pi, N pi]", "nonzero")
            ])
        out.reports.append(report)
        out.outputs['nijenhuis'] = data.get_summary()
        out.outputs['induced'] = induced.format(doc.ring)
        return

    double = _double_name(doc, flags)
    name = _require(flags.graph_of, "--graph-of NAME or --omega NAME --pi NAME")
    D = doc.double(double)
    side, H = _graph_operator(doc, double, name)
    if side != "A":
        raise ShapeError(f"{name!r} lives on A*; hamiltonian operators are bivectors on A")
    report = check_hamiltonian(D, H, name)
    out.reports.append(report)
    if report.clause("maurer-cartan").passed:
        induced = induced_dual_algebroid(D, H)
        out.outputs['induced_anchor'] = [
            "(" + ", ".join(doc.ring.format(v) for v in row) + ")" for row in induced.anchor
        ]
        out.outputs['induced_brackets'] = {
            f"[eps{i + 1},eps{j + 1}]": induced.bracket_frame(i, j).format(doc.ring)
            for i in range(induced.rank) for j in range(i + 1, induced.rank)
            if not induced.bracket_frame(i, j).is_zero()
        }


def cmd_compose(doc: ModelDocument, flags: RunFlags, out: ReportDocument) -> None:
    U = doc.poisson(_require(flags.u, "--u NAME"))
    V = doc.poisson(_require(flags.v, "--v NAME"))
    ring = doc.ring
    if flags.minus:
        result = compose_minus(U, V)
        report = CheckReport("compose-minus", f"{U.name},{V.name}")
        report.extend(check_bialgebroid(result.double, flags.workers), prefix="bialgebroid ")
        report.extend(is_poisson(ring, result.induced.pi, "induced"), prefix="induced ")
        out.reports.append(report)
        out.outputs.update(_matrix_outputs(ring, result.base.matrix(), "base"))
        out.outputs.update(_matrix_outputs(ring, result.induced.matrix(), "induced"))
        return

    report = CheckReport("compose-plus", f"{U.name},{V.name}")
    try:
        W = compose_plus(U, V)
    except NotPoisson as exc:
        report.add_clause("jacobi", exc.report.clause("jacobi").residuals if exc.report else [
            Residual("W", str(exc))
        ])
        out.reports.append(report)
        return
    Wm = W.matrix()
    report.add_clause("jacobi")
    report.add_clause("symmetry")
    try:
        expected = invert_matrix(matadd(invert_matrix(U.matrix()), invert_matrix(V.matrix())))
    except SingularMatrix:
        report.add_clause("inverse-identity", detail="skipped: U, V or U^-1 + V^-1 degenerate")
    else:
        n = len(Wm)
        report.add_clause("inverse-identity", [
            residual(ring, f"W[{i + 1},{j + 1}]", Wm[i][j] - expected[i][j])
            for i in range(n) for j in range(n) if Wm[i][j] != expected[i][j]
        ])
    out.reports.append(report)
    out.outputs.update(_matrix_outputs(ring, Wm, "W"))


def cmd_null_dirac(doc: ModelDocument, flags: RunFlags, out: ReportDocument) -> None:
    double = _double_name(doc, flags)
    D = doc.double(double)
    sections = []
    for name in flags.h:
        side, section = doc.on_double(double, name)
        if side != "A" or section.degree != 1:
            raise ShapeError(f"{name!r} is not a section of {D.A.name}")
        sections.append(section)
    if not sections:
        raise ResolutionError("null-dirac needs --h NAME...")
    out.reports.append(null_dirac_check(D, sections, "h"))


def cmd_reduce_check(doc: ModelDocument, flags: RunFlags, out: ReportDocument) -> None:
    pi = doc.poisson(_require(flags.pi, "--pi NAME"))
    rows = _base_vectors(doc, flags.h)
    reduction = reduction_check(pi, rows)
    null = null_dirac_check(cotangent_double(pi), rows, "D")
    consistency = CheckReport("reduction-consistency", pi.name)
    consistency.add_clause("agreement", [] if reduction.passed == null.passed else [
        Residual("verdicts", f"reduction {reduction.status}, null-dirac {null.status}")
    ])
    out.reports.extend([reduction, consistency])


def cmd_dual_pair(doc: ModelDocument, flags: RunFlags, out: ReportDocument) -> None:
    pi = doc.poisson(_require(flags.pi, "--pi NAME"))
    rows = _base_vectors(doc, flags.h)
    result = dual_pair(pi, rows)
    report = CheckReport("dual-pair", f"{pi.name}:D")
    report.add_clause("null-dirac")
    out.reports.append(report)
    out.outputs['Dbar'] = [x.format(doc.ring) for x in result.tangent_part()]


def cmd_morphism_check(doc: ModelDocument, flags: RunFlags, out: ReportDocument) -> None:
    names = [flags.morphism] if flags.morphism else list(doc.morphisms)
    if not names:
        raise ResolutionError("the model declares no morphisms")
    for name in names:
        out.reports.append(check_morphism_to_algebra(doc.morphism(name)))


COMMANDS: Dict[str, Callable[[ModelDocument, RunFlags, ReportDocument], None]] = {
    'validate': cmd_validate,
    'courant-check': cmd_courant_check,
    'bialgebroid-check': cmd_bialgebroid_check,
    'anomaly': cmd_anomaly,
    'dirac-check': cmd_dirac_check,
    'mc-residual': cmd_mc_residual,
    'hamiltonian': cmd_hamiltonian,
    'compose': cmd_compose,
    'null-dirac': cmd_null_dirac,
    'reduce-check': cmd_reduce_check,
    'dual-pair': cmd_dual_pair,
    'morphism-check': cmd_morphism_check,
}


def run_command(doc: ModelDocument, command: str, flags: Optional[RunFlags] = None,
                echo: Optional[str] = None) -> ReportDocument:
    """Run one command and collect its reports.

    Exit code 0 when every clause passes, 1 when a check fails (including a
    violated hypothesis that carries its own report), 2 on input errors.
    """
    flags = flags or RunFlags()
    out = ReportDocument(echo or command)
    if command not in COMMANDS:
        out.error = f"Unknown command: {command}. Available: {', '.join(COMMANDS)}"
        out.exit_code = EXIT_INPUT
        return out
    try:
        COMMANDS[command](doc, flags, out)
    except CourantKitError as exc:
        out.error = str(exc)
        if exc.report is not None:
            out.reports.append(exc.report)
            out.exit_code = EXIT_FAIL
        else:
            out.exit_code = EXIT_INPUT
        logger.info("%s: %s", command, exc)
        return out
    except ValueError as exc:
        out.error = str(exc)
        out.exit_code = EXIT_INPUT
        return out
    out.exit_code = EXIT_PASS if all(r.passed for r in out.reports) else EXIT_FAIL
    return out
