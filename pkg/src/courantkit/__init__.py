"""Exact symbolic verification of Lie algebroids, bialgebroids, Courant algebroids and Dirac structures."""

__version__ = "0.1.0"

from .algebroid import AlgebroidMorphismToAlgebra, LieAlgebroid
from .dirac import SubbundleSpec, integrability_oracle, mc_residual_H, mc_residual_I
from .double import DoubleSection, DoubleStructure
from .model import ModelDocument, parse_model, print_model
from .poisson import PoissonTensor, compose_minus, compose_plus
from .reports import CheckReport
from .runner import ReportDocument, run_command
from .scalars import ScalarRing
from .sections import GradedSection

__all__ = [
    'ScalarRing',
    'GradedSection',
    'LieAlgebroid',
    'AlgebroidMorphismToAlgebra',
    'DoubleSection',
    'DoubleStructure',
    'SubbundleSpec',
    'integrability_oracle',
    'mc_residual_H',
    'mc_residual_I',
    'PoissonTensor',
    'compose_plus',
    'compose_minus',
    'CheckReport',
    'ModelDocument',
    'parse_model',
    'print_model',
    'ReportDocument',
    'run_command',
]
