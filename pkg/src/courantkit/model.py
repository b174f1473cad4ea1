"""Model files: a sectioned key/value text format declaring the objects to check.

A file looks like::

    [base]
    coordinates = ["x", "y", "z"]

    [algebroid TM]
    kind = tangent

    [bivector pi]
    host = "TM"
    "1,2" = "z"

    [algebroid C]
    kind = cotangent
    poisson = "pi"

    [double std]
    pair = ["TM", "C"]

Frame indices in keys are 1-based. Expressions are quoted strings in the
scalar grammar. ``print_model`` writes the canonical form, and
``parse_model(print_model(doc)) == doc``.
"""

from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from .algebroid import AlgebroidMorphismToAlgebra, LieAlgebroid
from .dirac import SubbundleSpec
from .double import DoubleSection, DoubleStructure
from .errors import ModelSyntaxError, NotPoisson, ResolutionError, ShapeError
from .poisson import PoissonTensor, cotangent_algebroid
from .scalars import ScalarRing
from .sections import GradedSection

SECTION_KINDS = ("base", "algebroid", "bivector", "form", "section", "double", "subbundle", "morphism")
ALGEBROID_KINDS = ("tangent", "zero", "cotangent", "table")
SIDES = ("multivector", "form")

FIXED_KEYS = {
    "base": ("coordinates", "parameters", "functions"),
    "algebroid": ("kind", "rank", "poisson", "anchor.N", '"I,J"'),
    "bivector": ("host", '"I,J"'),
    "form": ("host", '"I,J"'),
    "section": ("host", "side", "degree", "components", "value", '"I,J,..."'),
    "double": ("pair",),
    "subbundle": ("double", "members"),
    "morphism": ("source", "target", '"I"'),
}


# ----------------------------------------------------------------------
# Declarations


@dataclass(frozen=True)
class AlgebroidDecl:
    name: str
    kind: str
    algebroid: LieAlgebroid
    poisson: Optional[str] = None


@dataclass(frozen=True)
class TensorDecl:
    """A named section of an exterior power of an algebroid or of its dual.

    ``section`` carries no host label; it is attached when the tensor is used
    inside a double.
    """
    name: str
    kind: str
    host: str
    side: str
    section: GradedSection

    @property
    def degree(self) -> int:
        return self.section.degree


@dataclass(frozen=True)
class DoubleDecl:
    name: str
    pair: Tuple[str, str]
    double: DoubleStructure


@dataclass(frozen=True)
class SubbundleDecl:
    name: str
    double: str
    members: Tuple[str, ...]


@dataclass(frozen=True)
class MorphismDecl:
    name: str
    source: str
    target: str
    morphism: AlgebroidMorphismToAlgebra


@dataclass
class ModelDocument:
    """Everything declared in one model file, resolved and validated."""
    ring: ScalarRing
    algebroids: Dict[str, AlgebroidDecl] = field(default_factory=dict)
    tensors: Dict[str, TensorDecl] = field(default_factory=dict)
    doubles: Dict[str, DoubleDecl] = field(default_factory=dict)
    subbundles: Dict[str, SubbundleDecl] = field(default_factory=dict)
    morphisms: Dict[str, MorphismDecl] = field(default_factory=dict)

    def _lookup(self, table: dict, name: str, what: str):
        if name not in table:
            known = ", ".join(table) or "none declared"
            raise ResolutionError(f"Unknown {what} {name!r} (known: {known})")
        return table[name]

    def algebroid(self, name: str) -> LieAlgebroid:
        return self._lookup(self.algebroids, name, "algebroid").algebroid

    def tensor(self, name: str) -> TensorDecl:
        return self._lookup(self.tensors, name, "tensor")

    def double_decl(self, name: str) -> DoubleDecl:
        return self._lookup(self.doubles, name, "double")

    def double(self, name: str) -> DoubleStructure:
        return self.double_decl(name).double

    def morphism(self, name: str) -> AlgebroidMorphismToAlgebra:
        return self._lookup(self.morphisms, name, "morphism").morphism

    def poisson(self, name: str) -> PoissonTensor:
        """A bivector on a base-rank algebroid, verified as a Poisson tensor."""
        decl = self.tensor(name)
        if decl.kind != "bivector" or decl.section.rank != self.ring.dim:
            raise ResolutionError(f"{name!r} is not a bivector on the base")
        return PoissonTensor(self.ring, decl.section, name)

    def on_double(self, double_name: str, tensor_name: str) -> Tuple[str, GradedSection]:
        """Place a tensor in a double: ("A", section) or ("A*", section), host attached.

        A multivector of the first factor and a form of the second live on A;
        the other two combinations live on A*.
        """
        decl = self.double_decl(double_name)
        tensor = self.tensor(tensor_name)
        D = decl.double
        first, second = decl.pair
        if tensor.host not in (first, second):
            raise ResolutionError(
                f"Tensor {tensor_name!r} lives on {tensor.host!r}, not on a factor of {double_name!r}"
            )
        on_first = (tensor.host == first) == (tensor.side == "multivector")
        if first == second:
            on_first = tensor.side == "multivector"
        if on_first:
            return "A", tensor.section.with_host(D.A.name)
        return "A*", tensor.section.with_host(D.Astar.name)

    def member(self, double_name: str, expression: str) -> DoubleSection:
        """A double section written as ``name`` or ``name+name``."""
        D = self.double(double_name)
        X = D.A.zero_multivector(1)
        xi = D.Astar.zero_multivector(1)
        for part in expression.split("+"):
            side, section = self.on_double(double_name, part.strip())
            if section.degree != 1:
                raise ShapeError(f"Member {part.strip()!r} has degree {section.degree}, expected 1")
            if side == "A":
                X = X + section
            else:
                xi = xi + section
        return D.section(X, xi)

    def subbundle(self, name: str) -> SubbundleSpec:
        decl = self._lookup(self.subbundles, name, "subbundle")
        D = self.double(decl.double)
        return SubbundleSpec(D, [self.member(decl.double, m) for m in decl.members], name=name)


# ----------------------------------------------------------------------
# Lexing


class Token(NamedTuple):
    kind: str  # "[", "]", "=", ",", "string", "word"
    text: str
    line: int
    column: int


WORD_EXTRA = "_.*+-^"


def tokenize_line(text: str, line: int) -> List[Token]:
    tokens: List[Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == "#":
            break
        elif ch in "[]=,":
            tokens.append(Token(ch, ch, line, i + 1))
            i += 1
        elif ch == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise ModelSyntaxError("unterminated string", line, i + 1, ['"'])
            tokens.append(Token("string", text[i + 1:end], line, i + 2))
            i = end + 1
        elif ch.isalnum() or ch in WORD_EXTRA:
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] in WORD_EXTRA):
                i += 1
            tokens.append(Token("word", text[start:i], line, start + 1))
        else:
            raise ModelSyntaxError(f"unexpected character {ch!r}", line, i + 1,
                                   ["[", "]", "=", ",", '"', "name"])
    return tokens


@dataclass
class RawValue:
    text: str
    line: int
    column: int
    items: Optional[List["RawValue"]] = None

    @property
    def is_list(self) -> bool:
        return self.items is not None


@dataclass
class RawSection:
    kind: str
    name: Optional[str]
    line: int
    entries: Dict[str, RawValue] = field(default_factory=dict)
    key_positions: Dict[str, Tuple[int, int]] = field(default_factory=dict)


def _expect(tokens: List[Token], pos: int, kinds: Sequence[str], line: int, width: int) -> Token:
    if pos >= len(tokens):
        raise ModelSyntaxError("unexpected end of line", line, width + 1, kinds)
    tok = tokens[pos]
    if tok.kind not in kinds:
        raise ModelSyntaxError(f"unexpected {tok.text!r}", tok.line, tok.column, kinds)
    return tok


def _parse_value(tokens: List[Token], pos: int, line: int, width: int) -> Tuple[RawValue, int]:
    tok = _expect(tokens, pos, ("string", "word", "["), line, width)
    if tok.kind != "[":
        return RawValue(tok.text, tok.line, tok.column), pos + 1
    items: List[RawValue] = []
    pos += 1
    if pos < len(tokens) and tokens[pos].kind == "]":
        return RawValue("", tok.line, tok.column, items), pos + 1
    while True:
        item = _expect(tokens, pos, ("string", "word"), line, width)
        items.append(RawValue(item.text, item.line, item.column))
        sep = _expect(tokens, pos + 1, (",", "]"), line, width)
        pos += 2
        if sep.kind == "]":
            return RawValue("", tok.line, tok.column, items), pos


def read_sections(text: str) -> List[RawSection]:
    """Split a model file into raw sections with positioned values."""
    sections: List[RawSection] = []
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        tokens = tokenize_line(raw_line, lineno)
        if not tokens:
            continue
        width = len(raw_line.rstrip())
        if tokens[0].kind == "[":
            kind = _expect(tokens, 1, ("word",), lineno, width)
            if kind.text not in SECTION_KINDS:
                raise ModelSyntaxError(f"unknown section {kind.text!r}", lineno, kind.column, SECTION_KINDS)
            pos = 2
            name = None
            if kind.text != "base":
                name = _expect(tokens, pos, ("word",), lineno, width).text
                pos += 1
            _expect(tokens, pos, ("]",), lineno, width)
            if pos + 1 < len(tokens):
                extra = tokens[pos + 1]
                raise ModelSyntaxError("text after section header", lineno, extra.column, ["end of line"])
            sections.append(RawSection(kind.text, name, lineno))
            continue
        if not sections:
            raise ModelSyntaxError("entry before any section header", lineno, tokens[0].column, ["["])
        key = _expect(tokens, 0, ("word", "string"), lineno, width)
        _expect(tokens, 1, ("=",), lineno, width)
        value, pos = _parse_value(tokens, 2, lineno, width)
        if pos < len(tokens):
            raise ModelSyntaxError("text after value", lineno, tokens[pos].column, ["end of line"])
        current = sections[-1]
        if key.text in current.entries:
            raise ModelSyntaxError(f"duplicate key {key.text!r}", lineno, key.column)
        current.entries[key.text] = value
        current.key_positions[key.text] = (lineno, key.column)
    return sections


# ----------------------------------------------------------------------
# Building the document


def _indices(key: str, section: RawSection, arity: Optional[int], bound: int,
             entry: Optional[str] = None) -> Tuple[int, ...]:
    line, column = section.key_positions[entry or key]
    parts = key.split(",")
    try:
        values = tuple(int(p.strip()) - 1 for p in parts)
    except ValueError:
        raise ModelSyntaxError(f"unknown key {key!r}", line, column, FIXED_KEYS[section.kind])
    if arity is not None and len(values) != arity:
        raise ShapeError(f"line {line}: key {key!r} needs {arity} indices")
    if any(not 0 <= v < bound for v in values):
        raise ShapeError(f"line {line}: index out of range 1..{bound} in {key!r}")
    return values


class _Builder:
    def __init__(self, sections: List[RawSection]):
        self.sections = sections
        self.ring = ScalarRing()
        self.doc: Optional[ModelDocument] = None

    # -- value helpers

    def expr(self, value: RawValue):
        if value.is_list:
            raise ModelSyntaxError("expected an expression string", value.line, value.column, ['"'])
        return self.ring.parse(value.text, value.line, value.column)

    def exprs(self, value: RawValue, length: int) -> list:
        if not value.is_list:
            raise ModelSyntaxError("expected a list", value.line, value.column, ["["])
        if len(value.items) != length:
            raise ShapeError(f"line {value.line}: expected {length} entries, got {len(value.items)}")
        return [self.expr(item) for item in value.items]

    def names(self, value: RawValue) -> List[str]:
        if not value.is_list:
            raise ModelSyntaxError("expected a list", value.line, value.column, ["["])
        return [item.text for item in value.items]

    def integer(self, value: RawValue) -> int:
        try:
            return int(value.text)
        except ValueError:
            raise ModelSyntaxError("expected an integer", value.line, value.column, ["integer"])

    def word(self, section: RawSection, key: str, choices: Sequence[str] = (), default=None) -> str:
        if key not in section.entries:
            if default is not None:
                return default
            raise ModelSyntaxError(f"[{section.kind}] section needs {key!r}", section.line, 1, [key])
        value = section.entries[key]
        if value.is_list or (choices and value.text not in choices):
            raise ModelSyntaxError(f"invalid value for {key!r}", value.line, value.column, choices)
        return value.text

    def check_keys(self, section: RawSection, allowed: Sequence[str], indexed: bool) -> None:
        for key in section.entries:
            if key in allowed or key.startswith("anchor.") and "anchor.N" in allowed:
                continue
            if indexed and all(p.strip().isdigit() for p in key.split(",")):
                continue
            line, column = section.key_positions[key]
            raise ModelSyntaxError(f"unknown key {key!r}", line, column, FIXED_KEYS[section.kind])

    # -- passes

    def build(self) -> ModelDocument:
        bases = [s for s in self.sections if s.kind == "base"]
        if len(bases) != 1:
            line = bases[1].line if len(bases) > 1 else 1
            raise ModelSyntaxError("exactly one [base] section is required", line, 1, ["[base]"])
        self.build_base(bases[0])
        self.doc = ModelDocument(self.ring)

        seen = set()
        for s in self.sections:
            if s.kind == "base":
                continue
            if s.name in seen:
                raise ModelSyntaxError(f"name {s.name!r} declared twice", s.line, 1)
            seen.add(s.name)

        ranks = {s.name: self.algebroid_rank(s) for s in self.sections if s.kind == "algebroid"}
        for s in self.sections:
            if s.kind in ("bivector", "form", "section"):
                self.build_tensor(s, ranks)
        for s in self.sections:
            if s.kind == "algebroid":
                self.build_algebroid(s, ranks[s.name])
        self.doc.algebroids = {
            s.name: self.doc.algebroids[s.name] for s in self.sections if s.kind == "algebroid"
        }
        for s in self.sections:
            if s.kind == "double":
                self.build_double(s)
        for s in self.sections:
            if s.kind == "subbundle":
                self.build_subbundle(s)
            elif s.kind == "morphism":
                self.build_morphism(s)
        return self.doc

    def build_base(self, s: RawSection) -> None:
        self.check_keys(s, FIXED_KEYS["base"], False)
        lists = {key: tuple(self.names(s.entries[key])) if key in s.entries else () for key in FIXED_KEYS["base"]}
        try:
            self.ring = ScalarRing(lists["coordinates"], lists["parameters"], lists["functions"])
        except ValueError as exc:
            raise ModelSyntaxError(str(exc), s.line, 1)

    def algebroid_rank(self, s: RawSection) -> int:
        self.check_keys(s, ("kind", "rank", "poisson", "anchor.N"), True)
        kind = self.word(s, "kind", ALGEBROID_KINDS)
        if kind in ("tangent", "cotangent"):
            return self.ring.dim
        if "rank" not in s.entries:
            raise ModelSyntaxError(f"[algebroid {s.name}] needs 'rank'", s.line, 1, ["rank"])
        return self.integer(s.entries["rank"])

    def build_algebroid(self, s: RawSection, rank: int) -> None:
        kind = self.word(s, "kind", ALGEBROID_KINDS)
        n = self.ring.dim
        poisson = None
        if kind == "tangent":
            algebroid = LieAlgebroid.tangent(self.ring, s.name)
        elif kind == "zero":
            algebroid = LieAlgebroid.zero(self.ring, rank, s.name)
        elif kind == "cotangent":
            poisson = self.word(s, "poisson")
            try:
                pi = self.doc.poisson(poisson)
            except NotPoisson as exc:
                raise ShapeError(f"line {s.line}: {exc}")
            algebroid = cotangent_algebroid(pi, s.name)
        else:
            anchor = [[0] * n for _ in range(rank)]
            brackets = {}
            for key, value in s.entries.items():
                if key.startswith("anchor."):
                    (i,) = _indices(key[len("anchor."):], s, 1, rank, key)
                    anchor[i] = self.exprs(value, n)
                elif key not in ("kind", "rank"):
                    i, j = _indices(key, s, 2, rank)
                    if i >= j:
                        raise ShapeError(f"line {value.line}: bracket keys need I < J, got {key!r}")
                    brackets[(i, j)] = self.exprs(value, rank)
            algebroid = LieAlgebroid.from_brackets(self.ring, rank, anchor, brackets, s.name)
        self.doc.algebroids[s.name] = AlgebroidDecl(s.name, kind, algebroid, poisson)

    def build_tensor(self, s: RawSection, ranks: Dict[str, int]) -> None:
        if s.kind == "section":
            self.check_keys(s, FIXED_KEYS["section"], True)
            side = self.word(s, "side", SIDES, "multivector")
            degree = self.integer(s.entries["degree"]) if "degree" in s.entries else 1
        else:
            self.check_keys(s, ("host",), True)
            side = "multivector" if s.kind == "bivector" else "form"
            degree = 2
        host = self.word(s, "host")
        if host not in ranks:
            line, column = s.key_positions["host"]
            raise ResolutionError(f"line {line}: unknown algebroid {host!r}")
        rank = ranks[host]
        if not 0 <= degree <= rank:
            raise ShapeError(f"line {s.line}: degree {degree} out of range for rank {rank}")
        if "components" in s.entries:
            if degree != 1:
                raise ShapeError(f"line {s.line}: 'components' needs degree 1")
            terms = [((i,), c) for i, c in enumerate(self.exprs(s.entries["components"], rank))]
        elif "value" in s.entries:
            if degree != 0:
                raise ShapeError(f"line {s.line}: 'value' needs degree 0")
            terms = [((), self.expr(s.entries["value"]))]
        else:
            terms = [
                (_indices(key, s, degree, rank), self.expr(value))
                for key, value in s.entries.items()
                if key not in ("host", "side", "degree")
            ]
            if any(len(set(idx)) != len(idx) or list(idx) != sorted(idx) for idx, _ in terms):
                raise ShapeError(f"line {s.line}: entry keys must be strictly increasing")
        section = GradedSection.from_terms(rank, degree, terms)
        self.doc.tensors[s.name] = TensorDecl(s.name, s.kind, host, side, section)

    def build_double(self, s: RawSection) -> None:
        self.check_keys(s, ("pair",), False)
        if "pair" not in s.entries:
            raise ModelSyntaxError(f"[double {s.name}] needs 'pair'", s.line, 1, ["pair"])
        pair = self.names(s.entries["pair"])
        if len(pair) != 2:
            value = s.entries["pair"]
            raise ShapeError(f"line {value.line}: 'pair' needs two algebroid names")
        try:
            D = DoubleStructure(self.doc.algebroid(pair[0]), self.doc.algebroid(pair[1]), s.name)
        except ResolutionError as exc:
            raise ResolutionError(f"line {s.line}: {exc}")
        self.doc.doubles[s.name] = DoubleDecl(s.name, (pair[0], pair[1]), D)

    def build_subbundle(self, s: RawSection) -> None:
        self.check_keys(s, ("double", "members"), False)
        double = self.word(s, "double")
        members = tuple(self.names(s.entries["members"])) if "members" in s.entries else ()
        decl = SubbundleDecl(s.name, double, members)
        self.doc.subbundles[s.name] = decl
        try:
            self.doc.subbundle(s.name)
        except ResolutionError as exc:
            raise ResolutionError(f"line {s.line}: {exc}")

    def build_morphism(self, s: RawSection) -> None:
        self.check_keys(s, ("source", "target"), True)
        source_name, target_name = self.word(s, "source"), self.word(s, "target")
        try:
            source = self.doc.algebroid(source_name)
            target = self.doc.algebroid(target_name)
        except ResolutionError as exc:
            raise ResolutionError(f"line {s.line}: {exc}")
        algebra = _as_algebra(target, s.line)
        phi = [[0] * algebra.rank for _ in range(source.rank)]
        for key, value in s.entries.items():
            if key in ("source", "target"):
                continue
            (i,) = _indices(key, s, 1, source.rank)
            phi[i] = self.exprs(value, algebra.rank)
        morphism = AlgebroidMorphismToAlgebra(source, algebra, tuple(tuple(r) for r in phi), s.name)
        self.doc.morphisms[s.name] = MorphismDecl(s.name, source_name, target_name, morphism)


def _as_algebra(target: LieAlgebroid, line: int) -> LieAlgebroid:
    """The target's structure constants as a Lie algebra over a point."""
    if any(v != 0 for row in target.anchor for v in row):
        raise ShapeError(f"line {line}: morphism target {target.name!r} has a nonzero anchor")
    constants = [v for plane in target.structure for row in plane for v in row]
    if any(getattr(v, "free_symbols", set()) for v in constants):
        raise ShapeError(f"line {line}: morphism target {target.name!r} has non-constant structure")
    return LieAlgebroid(ScalarRing(), target.rank, tuple(() for _ in range(target.rank)),
                        target.structure, target.name)


def parse_model(text: str) -> ModelDocument:
    """Parse and resolve a model file.

    Raises:
        ModelSyntaxError: with line, column and the accepted tokens
        ResolutionError: when a name is never declared
        ShapeError: when ranks or dimensions disagree
    """
    return _Builder(read_sections(text)).build()


def load_model(path: str) -> ModelDocument:
    with open(path, "r", encoding="utf-8") as f:
        return parse_model(f.read())


# ----------------------------------------------------------------------
# Printing


def _quote(text: str) -> str:
    return f'"{text}"'


def _list(items: Sequence[str]) -> str:
    return "[" + ", ".join(_quote(t) for t in items) + "]"


def _key(indices: Sequence[int]) -> str:
    return _quote(",".join(str(i + 1) for i in indices))


def print_model(doc: ModelDocument) -> str:
    """Canonical text of a document."""
    ring = doc.ring
    fmt = ring.format
    out: List[str] = [
        "[base]",
        f"coordinates = {_list(ring.coordinates)}",
        f"parameters = {_list(ring.parameters)}",
        f"functions = {_list(ring.functions)}",
    ]

    def tensor_lines(t: TensorDecl) -> List[str]:
        lines = [f"[{t.kind} {t.name}]", f"host = {_quote(t.host)}"]
        if t.kind == "section":
            lines += [f"side = {t.side}", f"degree = {t.degree}"]
            if t.degree == 1:
                return lines + [f"components = {_list([fmt(c) for c in t.section.components()])}"]
            if t.degree == 0:
                return lines + [f"value = {_quote(fmt(t.section.value()))}"]
        return lines + [f"{_key(k)} = {_quote(fmt(v))}" for k, v in sorted(t.section.coefficients.items())]

    printed_tensors = set()
    for decl in doc.algebroids.values():
        A = decl.algebroid
        if decl.kind == "cotangent" and decl.poisson not in printed_tensors:
            out += [""] + tensor_lines(doc.tensors[decl.poisson])
            printed_tensors.add(decl.poisson)
        out += ["", f"[algebroid {decl.name}]", f"kind = {decl.kind}"]
        if decl.kind == "cotangent":
            out.append(f"poisson = {_quote(decl.poisson)}")
        elif decl.kind in ("zero", "table"):
            out.append(f"rank = {A.rank}")
        if decl.kind == "table":
            for i, row in enumerate(A.anchor):
                if any(v != 0 for v in row):
                    out.append(f"anchor.{i + 1} = {_list([fmt(v) for v in row])}")
            for i in range(A.rank):
                for j in range(i + 1, A.rank):
                    row = A.structure[i][j]
                    if any(v != 0 for v in row):
                        out.append(f"{_key((i, j))} = {_list([fmt(v) for v in row])}")

    for name, t in doc.tensors.items():
        if name not in printed_tensors:
            out += [""] + tensor_lines(t)
    for d in doc.doubles.values():
        out += ["", f"[double {d.name}]", f"pair = {_list(d.pair)}"]
    for sb in doc.subbundles.values():
        out += ["", f"[subbundle {sb.name}]", f"double = {_quote(sb.double)}", f"members = {_list(sb.members)}"]
    for m in doc.morphisms.values():
        out += ["", f"[morphism {m.name}]", f"source = {_quote(m.source)}", f"target = {_quote(m.target)}"]
        for i, row in enumerate(m.morphism.phi):
            out.append(f"{_key((i,))} = {_list([fmt(v) for v in row])}")
    return "\n".join(out) + "\n"
