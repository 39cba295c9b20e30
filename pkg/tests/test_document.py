"""Tests for the geometry document language."""

import pytest

from neutral4.config import get_settings
from neutral4.errors import DocumentError, ExprSyntaxError, UnknownSymbolError
from neutral4.exprdsl.document import Backend, parse_geometry, to_text
from neutral4.exprdsl.expr import evaluate_value

settings = get_settings()

SHIPPED = ["flat_neutral", "petean_torus", "kodaira", "sl2r_r", "inoue_s_plus", "hopf"]

MINIMAL = """
geometry "g" {
    backend coordinate;
    coords x y u v;
    %s
}
"""


def document(body: str) -> str:
    return MINIMAL % body


class TestParseGeometry:
    """Test cases for parse_geometry."""

    def setup_method(self):
        """Setup test fixtures."""
        self.texts = {name: (settings.models_dir / f"{name}.geom").read_text(encoding="utf-8") for name in SHIPPED}

    def test_shipped_models_parse(self):
        """Test that every shipped document parses with four names and a symmetric metric."""
        for name, text in self.texts.items():
            doc = parse_geometry(text)
            assert doc.name == name, f"Failed for {name}: parsed name {doc.name}"
            assert len(doc.names) == 4
            for i in range(4):
                for j in range(4):
                    assert doc.metric[i][j] == doc.metric[j][i], f"{name}: metric[{i}][{j}] not symmetric"

    def test_backends(self):
        """Test the backend of each shipped document."""
        test_cases = [
            ("flat_neutral", Backend.COORDINATE),
            ("petean_torus", Backend.COORDINATE),
            ("sl2r_r", Backend.FRAME),
            ("hopf", Backend.FRAME),
        ]

        for name, expected in test_cases:
            doc = parse_geometry(self.texts[name])
            assert doc.backend == expected, f"Failed for {name}: got {doc.backend}, expected {expected}"

    def test_round_trip(self):
        """Test that to_text reproduces the parsed document."""
        for name, text in self.texts.items():
            doc = parse_geometry(text)
            assert parse_geometry(to_text(doc)) == doc, f"Round trip failed for {name}"

    def test_combination_fields(self):
        """Test fields declared as combinations of earlier fields."""
        doc = parse_geometry(self.texts["flat_neutral"])

        x = doc.field("X").components

        assert [evaluate_value(c, [0.0] * 4, {}) for c in x] == [1.0, 0.0, 1.0, 0.0]

    def test_wedge_forms(self):
        """Test 2-forms declared as wedge sums of 1-forms."""
        doc = parse_geometry(self.texts["sl2r_r"])

        omega = doc.form("omega")
        values = [[evaluate_value(omega.components[i][j], [0.0] * 4, {}) for j in range(4)] for i in range(4)]

        assert omega.degree == 2
        assert values[0][1] == 1.0 and values[1][0] == -1.0
        assert values[2][3] == -1.0
        assert values[0][2] == 0.0

    def test_parameter_docs(self):
        doc = parse_geometry(self.texts["inoue_s_plus"])

        names = [p.name for p in doc.params]

        assert names[:4] == ["n11", "n12", "n21", "n22"]
        assert "det 1" in doc.params[0].doc


class TestDocumentErrors:
    """Test cases for rejected documents."""

    def test_structural_errors(self):
        """Test DocumentError on structural violations."""
        test_cases = [
            ("metric diag(1, 1, -1);", "diag needs 4"),
            ('metric { [0][1] = "x"; [1][0] = "y"; }', "differs"),
            ("param x = 1; metric diag(1, 1, -1, -1);", "duplicate name"),
            ("metric diag(1, 1, -1, -1); metric diag(1, 1, 1, 1);", "twice"),
            ("domain w (0, 1); metric diag(1, 1, -1, -1);", "undeclared coordinate"),
            ("domain v (1, 0); metric diag(1, 1, -1, -1);", "empty domain"),
            ('metric diag(1, 1, -1, -1); field X = ("1", "0", "0");', "needs 4 components"),
            ("param pi = 1; metric diag(1, 1, -1, -1);", "reserved"),
            ("", "missing metric"),
        ]

        for body, fragment in test_cases:
            with pytest.raises(DocumentError) as info:
                parse_geometry(document(body))
            assert fragment in str(info.value), f"Failed for {body!r}: {info.value}"

    def test_undeclared_symbol(self):
        with pytest.raises(UnknownSymbolError) as info:
            parse_geometry(document('metric { [0][0] = "w"; [1][1] = "1"; [2][2] = "-1"; [3][3] = "-1"; }'))

        assert info.value.symbol == "w"

    def test_syntax_error_offset_points_into_document(self):
        """Test that an error inside a quoted entry is located in the whole document."""
        text = document('metric { [0][0] = "1 +"; [1][1] = "1"; [2][2] = "-1"; [3][3] = "-1"; }')

        with pytest.raises(ExprSyntaxError) as info:
            parse_geometry(text)

        assert info.value.offset == text.encode("utf-8").index(b'1 +"') + 3

    def test_frame_only_statements(self):
        with pytest.raises(DocumentError):
            parse_geometry(document("metric diag(1, 1, -1, -1); bracket [x,y] = u;"))
