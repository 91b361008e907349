import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hbce.taxonomy import (
    N_ORIGINAL_LABELS,
    Taxonomy,
    TaxonomyError,
    default_taxonomy_text,
    derive_uncertain,
    load_taxonomy,
    parse_taxonomy,
    serialize,
    validate,
)


class TestParse:
    def test_two_labels_one_edge(self):
        t = parse_taxonomy("label Cardiac\nlabel Cardiomegaly\nedge Cardiac > Cardiomegaly")
        assert t.names == ["Cardiac", "Cardiomegaly"]
        assert t.edges == ((0, 1),)

    def test_single_label(self):
        t = parse_taxonomy("label A")
        assert len(t) == 1 and t.edges == ()

    def test_undeclared_label(self):
        with pytest.raises(TaxonomyError, match="undeclared label 'B'") as exc:
            parse_taxonomy("label A\nedge A > B")
        assert exc.value.line == 2

    def test_duplicate_label_reports_line(self):
        with pytest.raises(TaxonomyError, match="duplicate") as exc:
            parse_taxonomy("label A\n\nlabel A")
        assert exc.value.line == 3

    def test_syntax_error_reports_line(self):
        with pytest.raises(TaxonomyError) as exc:
            parse_taxonomy("# header\nlabel A\nnode A")
        assert exc.value.line == 3

    def test_edge_without_separator(self):
        with pytest.raises(TaxonomyError):
            parse_taxonomy("label A\nlabel B\nedge A B")

    def test_self_edge_rejected(self):
        with pytest.raises(TaxonomyError):
            parse_taxonomy("label A\nedge A > A")

    def test_names_with_spaces_and_comments(self):
        t = parse_taxonomy("# c\nlabel Fluid Accumulation\n\nlabel Pleural Effusion\n"
                           "# unattested\nedge Fluid Accumulation > Pleural Effusion\n")
        assert t.has_edge("Fluid Accumulation", "Pleural Effusion")

    def test_declaration_order_is_index_order(self):
        t = parse_taxonomy("label Z\nlabel A\nlabel M")
        assert [lab.index for lab in t.labels] == [0, 1, 2]
        assert t.index("M") == 2


class TestDefaultTaxonomy:
    def test_size(self, default_tax):
        assert len(default_tax) == 21

    @pytest.mark.parametrize("child", ["Pleural Effusion", "Pneumonia", "Edema", "Consolidation"])
    def test_fluid_accumulation_children(self, default_tax, child):
        assert default_tax.has_edge("Fluid Accumulation", child)

    def test_cardiomegaly_under_cardiac(self, default_tax):
        assert default_tax.has_edge("Cardiac", "Cardiomegaly")

    def test_six_parents(self, default_tax):
        parents = {default_tax.names[p] for p, _ in default_tax.edges}
        assert parents == {"Abnormal", "Cardiac", "Fluid Accumulation", "Missing Lung Tissue",
                           "Opacity", "Other"}

    def test_validates(self, default_tax):
        report = validate(default_tax)
        assert report.ok and not report.errors

    def test_uncertain_is_standalone(self, default_tax):
        u = default_tax.index("Uncertain")
        assert not default_tax.parents(u) and not default_tax.children(u)

    def test_original_labels_are_the_fourteen(self, default_tax):
        assert len(default_tax.original_labels()) == N_ORIGINAL_LABELS

    def test_unattested_edges_are_marked(self):
        lines = default_taxonomy_text().splitlines()
        attested = {"Fluid Accumulation > Pleural Effusion", "Fluid Accumulation > Pneumonia",
                    "Fluid Accumulation > Edema", "Fluid Accumulation > Consolidation",
                    "Cardiac > Cardiomegaly"}
        for i, line in enumerate(lines):
            if line.startswith("edge "):
                marked = lines[i - 1].strip() == "# unattested"
                assert marked == (line[5:] not in attested), line


class TestValidate:
    def test_two_cycle(self):
        t = Taxonomy.from_names(["A", "B"], [("A", "B"), ("B", "A")])
        report = validate(t)
        assert not report.ok
        assert len(report.errors) == 1 and report.errors[0].kind == "cycle"

    def test_multi_parent_is_warning(self):
        t = Taxonomy.from_names(["A", "B", "C"], [("A", "C"), ("B", "C")])
        report = validate(t)
        assert report.ok
        assert [w.kind for w in report.warnings] == ["multi_parent"]

    def test_isolated_label_warning(self):
        t = Taxonomy.from_names(["A", "B", "C"], [("A", "B")])
        report = validate(t)
        assert report.ok and [w.labels for w in report.warnings] == [("C",)]

    @settings(max_examples=60, deadline=None)
    @given(st.integers(3, 12), st.data())
    def test_every_back_edge_is_detected(self, n, data):
        # a random DAG along a random order, then one edge pointing backwards along a path
        order = data.draw(st.permutations(range(n)))
        chain = [(order[i], order[i + 1]) for i in range(n - 1)]
        extra = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                                   max_size=10))
        pos = {v: i for i, v in enumerate(order)}
        forward = {(a, b) for a, b in extra if pos[a] < pos[b]} | set(chain)
        t = Taxonomy.from_names([f"L{i}" for i in range(n)],
                                [(f"L{a}", f"L{b}") for a, b in sorted(forward)])
        assert validate(t).ok
        i, j = sorted(data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2,
                                         unique=True)))
        back = (order[j], order[i])
        cyclic = t.with_edge(*back)
        assert not validate(cyclic).ok


@st.composite
def taxonomies(draw):
    n = draw(st.integers(1, 10))
    names = draw(st.lists(
        st.text(st.characters(whitelist_categories=("Lu", "Ll", "Nd"), whitelist_characters=" -"),
                min_size=1, max_size=12).map(str.strip).filter(bool),
        min_size=n, max_size=n, unique=True))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=15))
    edges = list(dict.fromkeys((a, b) for a, b in pairs if a < b))
    return Taxonomy.from_names(names, [(names[a], names[b]) for a, b in edges])


class TestRoundTrip:
    @settings(max_examples=100, deadline=None)
    @given(taxonomies())
    def test_parse_serialize_identity(self, t):
        assert parse_taxonomy(serialize(t)) == t

    def test_default_file_roundtrip(self, default_tax, tmp_path):
        path = tmp_path / "t.tax"
        path.write_text(serialize(default_tax))
        assert load_taxonomy(path) == default_tax


class TestDeriveUncertain:
    def test_all_zero(self):
        assert derive_uncertain(np.zeros(14, dtype=int)) == 1

    def test_no_finding(self, default_tax):
        orig = default_tax.original_labels()
        row = np.zeros(14, dtype=int)
        row[orig.index(default_tax.index("No Finding"))] = 1
        assert derive_uncertain(row) == 0

    def test_edema(self, default_tax):
        orig = default_tax.original_labels()
        row = np.zeros(14, dtype=int)
        row[orig.index(default_tax.index("Edema"))] = 1
        assert derive_uncertain(row) == 0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            derive_uncertain(np.zeros(13, dtype=int))

    @given(st.lists(st.integers(0, 1), min_size=14, max_size=14))
    def test_flag_iff_sum_zero(self, row):
        assert derive_uncertain(row) == int(sum(row) == 0)

    def test_matrix_input(self):
        m = np.array([[0] * 14, [1] + [0] * 13])
        np.testing.assert_array_equal(derive_uncertain(m), [1, 0])
