"""Graded sections of the exterior powers of a framed bundle or its dual."""

from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy

from .errors import HostMismatch, ShapeError
from .scalars import ZERO, ScalarRing, canonical

Index = Tuple[int, ...]


def dual_label(label: Optional[str]) -> Optional[str]:
    """``A`` <-> ``A*``."""
    if label is None:
        return None
    return label[:-1] if label.endswith("*") else f"{label}*"


def sort_with_sign(indices: Sequence[int]) -> Tuple[int, Index]:
    """Sort a multi-index, returning the permutation sign (0 on repeats)."""
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    if any(idx[i] == idx[i + 1] for i in range(len(idx) - 1)):
        return 0, tuple(idx)
    return sign, tuple(idx)


def _merge_host(a: Optional[str], b: Optional[str]) -> Optional[str]:
    if a is not None and b is not None and a != b:
        raise HostMismatch(f"Sections live on different bundles: {a} vs {b}")
    return a if a is not None else b


@dataclass(frozen=True)
class GradedSection:
    """A degree-k section with coefficients on increasing frame multi-indices.

    The coefficient of ``(i1, ..., ik)`` is the value on the matching dual
    frame elements (determinant convention). ``host`` labels the bundle the
    section belongs to; ``None`` means "either side" and is used for scalars.
    """
    rank: int
    degree: int
    coefficients: Mapping[Index, sympy.Expr] = field(default_factory=dict)
    host: Optional[str] = None

    def __post_init__(self):
        for key in self.coefficients:
            if len(key) != self.degree or list(key) != sorted(set(key)):
                raise ShapeError(f"Coefficient key {key} is not an increasing {self.degree}-tuple")
            if key and not (0 <= key[0] and key[-1] < self.rank):
                raise ShapeError(f"Coefficient key {key} out of range for rank {self.rank}")

    # ------------------------------------------------------------------
    # Constructors

    @classmethod
    def from_terms(cls, rank: int, degree: int, terms: Iterable[Tuple[Sequence[int], object]],
                   host: Optional[str] = None) -> "GradedSection":
        acc: Dict[Index, sympy.Expr] = {}
        for indices, value in terms:
            sign, key = sort_with_sign(indices)
            if sign == 0:
                continue
            acc[key] = acc.get(key, ZERO) + sign * value
        coefficients = {}
        for key in sorted(acc):
            value = canonical(acc[key])
            if value != 0:
                coefficients[key] = value
        return cls(rank, degree, coefficients, host)

    @classmethod
    def zero(cls, rank: int, degree: int, host: Optional[str] = None) -> "GradedSection":
        return cls(rank, degree, {}, host)

    @classmethod
    def scalar(cls, rank: int, value, host: Optional[str] = None) -> "GradedSection":
        return cls.from_terms(rank, 0, [((), value)], host)

    @classmethod
    def basis(cls, rank: int, i: int, host: Optional[str] = None) -> "GradedSection":
        return cls(rank, 1, {(i,): sympy.Integer(1)}, host)

    @classmethod
    def from_components(cls, components: Sequence, host: Optional[str] = None) -> "GradedSection":
        return cls.from_terms(len(components), 1, [((i,), c) for i, c in enumerate(components)], host)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence], host: Optional[str] = None) -> "GradedSection":
        """Degree-2 section from an antisymmetric frame matrix (upper triangle is read)."""
        r = len(matrix)
        return cls.from_terms(
            r, 2, [((i, j), matrix[i][j]) for i in range(r) for j in range(i + 1, r)], host,
        )

    # ------------------------------------------------------------------
    # Accessors

    def coefficient(self, indices: Sequence[int]) -> sympy.Expr:
        """Signed value on an arbitrary (possibly unsorted) multi-index."""
        sign, key = sort_with_sign(indices)
        if sign == 0:
            return ZERO
        return sign * self.coefficients.get(key, ZERO)

    def components(self) -> List[sympy.Expr]:
        if self.degree != 1:
            raise ShapeError(f"components() needs a degree-1 section, got degree {self.degree}")
        return [self.coefficients.get((i,), ZERO) for i in range(self.rank)]

    def value(self) -> sympy.Expr:
        if self.degree != 0:
            raise ShapeError(f"value() needs a degree-0 section, got degree {self.degree}")
        return self.coefficients.get((), ZERO)

    def matrix(self) -> List[List[sympy.Expr]]:
        if self.degree != 2:
            raise ShapeError(f"matrix() needs a degree-2 section, got degree {self.degree}")
        return [[self.coefficient((i, j)) for j in range(self.rank)] for i in range(self.rank)]

    def is_zero(self) -> bool:
        return not self.coefficients

    def with_host(self, host: Optional[str]) -> "GradedSection":
        return replace(self, host=host)

    # ------------------------------------------------------------------
    # Arithmetic

    def _check_compatible(self, other: "GradedSection") -> Optional[str]:
        if self.rank != other.rank or self.degree != other.degree:
            raise ShapeError(
                f"Cannot combine rank {self.rank} degree {self.degree} with "
                f"rank {other.rank} degree {other.degree}"
            )
        return _merge_host(self.host, other.host)

    def __add__(self, other: "GradedSection") -> "GradedSection":
        host = self._check_compatible(other)
        terms = list(self.coefficients.items()) + list(other.coefficients.items())
        return GradedSection.from_terms(self.rank, self.degree, terms, host)

    def __sub__(self, other: "GradedSection") -> "GradedSection":
        return self + (-other)

    def __neg__(self) -> "GradedSection":
        return self.scale(-1)

    def scale(self, factor) -> "GradedSection":
        return GradedSection.from_terms(
            self.rank, self.degree,
            [(k, factor * v) for k, v in self.coefficients.items()], self.host,
        )

    def __rmul__(self, factor) -> "GradedSection":
        return self.scale(factor)

    def map_coefficients(self, fn) -> "GradedSection":
        return GradedSection.from_terms(
            self.rank, self.degree, [(k, fn(v)) for k, v in self.coefficients.items()], self.host,
        )

    def wedge(self, other: "GradedSection") -> "GradedSection":
        if self.rank != other.rank:
            raise ShapeError("Cannot wedge sections of different ranks")
        host = _merge_host(self.host, other.host)
        terms = [
            (I + J, a * b)
            for I, a in self.coefficients.items()
            for J, b in other.coefficients.items()
        ]
        return GradedSection.from_terms(self.rank, self.degree + other.degree, terms, host)

    def format(self, ring: ScalarRing) -> str:
        """Canonical text: ``[1,2]: expr; [1,3]: expr`` with 1-based frame indices."""
        if self.degree == 0:
            return ring.format(self.value())
        if not self.coefficients:
            return "0"
        return "; ".join(
            f"[{','.join(str(i + 1) for i in key)}]: {ring.format(value)}"
            for key, value in sorted(self.coefficients.items())
        )


def contract(v: GradedSection, w: GradedSection) -> GradedSection:
    """Insert the degree-1 section ``v`` into the leading slot of ``w``.

    ``v`` and ``w`` must live on mutually dual bundles.
    """
    _check_dual(v, w)
    terms = []
    for I, coeff in w.coefficients.items():
        for p, m in enumerate(I):
            vm = v.coefficients.get((m,))
            if vm is not None:
                terms.append((I[:p] + I[p + 1:], (-1) ** p * vm * coeff))
    return GradedSection.from_terms(w.rank, w.degree - 1, terms, w.host)


def contract_trailing(v: GradedSection, w: GradedSection) -> GradedSection:
    """Insert ``v`` into the last slot of ``w``."""
    _check_dual(v, w)
    k = w.degree
    terms = []
    for I, coeff in w.coefficients.items():
        for p, m in enumerate(I):
            vm = v.coefficients.get((m,))
            if vm is not None:
                terms.append((I[:p] + I[p + 1:], (-1) ** (k - 1 - p) * vm * coeff))
    return GradedSection.from_terms(w.rank, k - 1, terms, w.host)


def pair(v: GradedSection, w: GradedSection) -> sympy.Expr:
    """Duality pairing of two degree-1 sections on dual bundles."""
    _check_dual(v, w)
    if w.degree != 1:
        raise ShapeError("pair() needs two degree-1 sections")
    return canonical(sum(
        (c * w.coefficients[key] for key, c in v.coefficients.items() if key in w.coefficients),
        ZERO,
    ))


def _check_dual(v: GradedSection, w: GradedSection) -> None:
    if v.degree != 1:
        raise ShapeError(f"Only degree-1 sections can be inserted, got degree {v.degree}")
    if v.rank != w.rank:
        raise ShapeError(f"Rank mismatch: {v.rank} vs {w.rank}")
    if v.host is not None and w.host is not None and v.host != dual_label(w.host):
        raise HostMismatch(f"{v.host} does not pair with {w.host}")
