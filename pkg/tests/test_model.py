"""Reading, resolving and printing model files."""

from pathlib import Path

import pytest
import sympy

from courantkit.errors import ModelSyntaxError, RankDeficient, ResolutionError, ShapeError
from courantkit.model import load_model, parse_model, print_model, read_sections

from conftest import MODELS_DIR

MINIMAL = """\
[base]
coordinates = ["x", "y"]

[algebroid A]
kind = table
rank = 2
"1,2" = ["0", "x^2"]
anchor.1 = ["1", "0"]
"""


def with_bracket(entry: str) -> str:
    return MINIMAL.replace('"1,2" = ["0", "x^2"]', entry)


class TestReading:
    def test_sections_and_positions(self):
        sections = read_sections(MINIMAL)
        assert [(s.kind, s.name, s.line) for s in sections] == [("base", None, 1), ("algebroid", "A", 4)]
        value = sections[1].entries["1,2"]
        assert [(item.text, item.column) for item in value.items] == [("0", 11), ("x^2", 16)]

    def test_comments_and_blank_lines(self):
        doc = parse_model("# header\n\n[base]  # trailing\ncoordinates = [\"x\"]\n")
        assert doc.ring.coordinates == ("x",)

    def test_unterminated_string(self):
        with pytest.raises(ModelSyntaxError) as info:
            parse_model('[base]\ncoordinates = ["x]\n')
        assert (info.value.line, info.value.column) == (2, 16)

    def test_unknown_section(self):
        with pytest.raises(ModelSyntaxError) as info:
            parse_model("[base]\n\n[widget W]\n")
        assert info.value.line == 3
        assert "algebroid" in info.value.expected

    def test_entry_before_header(self):
        with pytest.raises(ModelSyntaxError):
            parse_model('coordinates = ["x"]\n')

    def test_duplicate_key(self):
        with pytest.raises(ModelSyntaxError):
            parse_model('[base]\ncoordinates = ["x"]\ncoordinates = ["y"]\n')


class TestResolution:
    def test_minimal(self):
        doc = parse_model(MINIMAL)
        x, _ = doc.ring.symbols
        A = doc.algebroid("A")
        assert A.bracket_frame(0, 1).components() == [0, x**2]
        assert A.anchor[0] == (1, 0)
        assert doc.algebroids["A"].kind == "table"

    def test_undeclared_identifier(self):
        with pytest.raises(ModelSyntaxError) as info:
            parse_model(with_bracket('"1,2" = ["0", "z"]'))
        assert (info.value.line, info.value.column) == (7, 16)
        assert "x" in info.value.expected

    def test_unknown_algebroid(self):
        text = MINIMAL + '\n[double D]\npair = ["A", "B"]\n'
        with pytest.raises(ResolutionError):
            parse_model(text)

    def test_unknown_host(self):
        with pytest.raises(ResolutionError):
            parse_model(MINIMAL + '\n[bivector H]\nhost = "T"\n"1,2" = "1"\n')

    def test_wrong_list_length(self):
        with pytest.raises(ShapeError):
            parse_model(with_bracket('"1,2" = ["0"]'))

    def test_reversed_bracket_key(self):
        with pytest.raises(ShapeError):
            parse_model(with_bracket('"2,1" = ["0", "1"]'))

    def test_index_out_of_range(self):
        with pytest.raises(ShapeError):
            parse_model(with_bracket('"1,3" = ["0", "1"]'))

    def test_bad_kind(self):
        with pytest.raises(ModelSyntaxError) as info:
            parse_model(MINIMAL.replace("kind = table", "kind = tabel"))
        assert "tangent" in info.value.expected

    def test_duplicate_names(self):
        with pytest.raises(ModelSyntaxError):
            parse_model(MINIMAL + "\n[algebroid A]\nkind = tangent\n")

    def test_cotangent_of_non_poisson(self):
        text = """\
[base]
coordinates = ["x", "y", "z"]

[algebroid TM]
kind = tangent

[bivector bad]
host = "TM"
"1,2" = "y"
"2,3" = "x"

[algebroid C]
kind = cotangent
poisson = "bad"
"""
        with pytest.raises(ShapeError):
            parse_model(text)

    def test_dependent_subbundle(self):
        text = (MODELS_DIR / "plane.model").read_text().replace('members = ["X", "Y"]', 'members = ["X", "X"]')
        with pytest.raises(RankDeficient):
            parse_model(text)

    def test_morphism_target_with_anchor(self):
        text = MINIMAL + '\n[morphism m]\nsource = "A"\ntarget = "A"\n"1" = ["1", "0"]\n'
        with pytest.raises(ShapeError):
            parse_model(text)


class TestDocument:
    def setup_method(self):
        self.doc = load_model(MODELS_DIR / "plane.model")

    def test_on_double(self):
        assert self.doc.on_double("std", "X")[0] == "A"
        side, eta = self.doc.on_double("std", "eta")
        assert side == "A*"
        assert eta.host == "TM*"

    def test_member(self):
        x, _ = self.doc.ring.symbols
        e = self.doc.member("std", "X+eta")
        assert e.X.components() == [1, 0]
        assert e.xi.components() == [0, x]

    def test_member_wrong_degree(self):
        with pytest.raises(ShapeError):
            self.doc.member("std", "H")

    def test_subbundle(self):
        L = self.doc.subbundle("tangent")
        assert L.rank == 2
        assert L.name == "tangent"

    def test_poisson(self):
        assert self.doc.poisson("sym").matrix()[0][1] == 1
        with pytest.raises(ResolutionError):
            self.doc.poisson("omega")

    def test_unknown_names(self):
        with pytest.raises(ResolutionError):
            self.doc.double("nope")
        with pytest.raises(ResolutionError):
            self.doc.tensor("nope")


class TestPrinting:
    @pytest.mark.parametrize("path", sorted(MODELS_DIR.glob("*.model")), ids=lambda p: p.stem)
    def test_round_trip(self, path: Path):
        doc = load_model(path)
        assert parse_model(print_model(doc)) == doc

    def test_canonical_is_stable(self):
        doc = load_model(MODELS_DIR / "linear_r3.model")
        text = print_model(doc)
        assert print_model(parse_model(text)) == text

    def test_cotangent_tensor_printed_first(self):
        text = print_model(load_model(MODELS_DIR / "linear_r3.model"))
        assert text.index("[bivector pi]") < text.index("[algebroid C]")

    def test_expression_forms(self):
        doc = parse_model(with_bracket('"1,2" = ["0", "(x + 1)^2 - 1"]'))
        x, _ = doc.ring.symbols
        assert sympy.expand(doc.algebroid("A").structure[0][1][1] - (x**2 + 2 * x)) == 0
