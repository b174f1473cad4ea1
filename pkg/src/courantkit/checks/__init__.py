"""Checkers: each one runs a family of identities and returns a CheckReport."""

from .algebroid_checks import check_lie_algebroid, check_morphism_to_algebra, check_subalgebroid
from .base import Check
from .bialgebroid import check_bialgebroid, is_bialgebroid
from .courant_axioms import check_courant_axioms
from .identities import check_identities

__all__ = [
    'Check',
    'check_lie_algebroid',
    'check_subalgebroid',
    'check_morphism_to_algebra',
    'check_bialgebroid',
    'is_bialgebroid',
    'check_courant_axioms',
    'check_identities',
]
