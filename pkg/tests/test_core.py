import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from narrachart.core import (
    BindingRecord,
    BindingResult,
    CellRef,
    ColumnKind,
    ColumnMeta,
    DataTable,
    Metrics,
    augment_table,
    derived_parts,
    validate_binding,
    validate_table,
)


def make_table(rows, columns=("A", "B", "C")):
    return DataTable("t", [ColumnMeta(c) for c in columns], rows)


class TestValidateTable:
    def test_well_formed(self):
        t = make_table([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        assert validate_table(t) == []

    def test_ragged_row(self):
        t = make_table([[1, 2, 3], [1, 2], [4, 5, 6]])
        assert validate_table(t) == ["row 2: expected 3 cells, got 2"]

    def test_duplicate_column_names(self):
        t = DataTable("t", [ColumnMeta("Active"), ColumnMeta("Active")], [[1, 2]])
        violations = validate_table(t)
        assert len(violations) == 1
        assert "duplicate" in violations[0] and "Active" in violations[0]

    def test_empty_table(self):
        t = DataTable("t", [ColumnMeta("A")], [])
        assert "table has no rows" in validate_table(t)

    def test_non_numeric_cell_in_numeric_column(self):
        t = DataTable("t", [ColumnMeta("A", ColumnKind.NUMERIC)], [["oops"]])
        assert any("non-numeric" in v for v in validate_table(t))

    def test_nulls_allowed_in_numeric_column(self):
        t = DataTable("t", [ColumnMeta("A")], [[1.0], [None], [2.0]])
        assert validate_table(t) == []


def record(column="change in GDP", start=7, end=10, **kw):
    kw.setdefault("trend", "sharp decrease")
    return BindingRecord(
        object_name="change in real GDP",
        data_name=column,
        position=(CellRef(column, start), CellRef(column, end)),
        text="the change in real GDP suffers a sharp decrease",
        **kw,
    )


class TestValidateBinding:
    def test_appendix_style_document_is_clean(self, gdp_table):
        result = BindingResult(
            records=(
                record(),
                record(start=11, end=14, trend="rise"),
            ),
            reason="two trends",
        )
        assert validate_binding(result, gdp_table) == []

    def test_trend_num_exclusivity(self, gdp_table):
        bad = record(trend="rise", num=[5.0])
        res = BindingResult(records=(bad,), reason="r")
        violations = validate_binding(res, gdp_table)
        assert len(violations) == 1
        assert "both Trend and Num" in violations[0]

    def test_row_out_of_range(self, gdp_table):
        res = BindingResult(records=(record(start=99, end=99),), reason="r")
        violations = validate_binding(res, gdp_table)
        assert len(violations) == 1
        assert "out of range" in violations[0]

    def test_unknown_column(self, gdp_table):
        res = BindingResult(records=(record(column="GNP"),), reason="r")
        assert any("unknown column" in v for v in validate_binding(res, gdp_table))

    def test_position_column_must_match_data_name(self, gdp_table):
        rec = BindingRecord(
            object_name="x",
            data_name="change in GDP",
            position=(CellRef("Quarter", 1), CellRef("Quarter", 2)),
            trend="rise",
        )
        res = BindingResult(records=(rec,), reason="r")
        assert any("!= DataName" in v for v in validate_binding(res, gdp_table))

    def test_reversed_span(self, gdp_table):
        res = BindingResult(records=(record(start=10, end=7),), reason="r")
        assert any("after end row" in v for v in validate_binding(res, gdp_table))

    def test_subject_only_record_is_allowed(self, gdp_table):
        rec = BindingRecord(
            object_name="change in real GDP",
            data_name="change in GDP",
            position=(CellRef("change in GDP", 1), CellRef("change in GDP", 14)),
        )
        res = BindingResult(records=(rec,), reason="subject only")
        assert validate_binding(res, gdp_table) == []

    def test_derived_combined_column(self, power_table):
        name = "Renewables + Nuclear"
        rec = BindingRecord(
            object_name="renewables and nuclear together",
            data_name=name,
            position=(CellRef(name, 5), CellRef(name, 5)),
            num=[306.0],
        )
        res = BindingResult(records=(rec,), reason="combined")
        assert validate_binding(res, power_table) == []


class TestDerivedColumns:
    def test_with_derived_sum(self, power_table):
        t = power_table.with_derived_sum(["Renewables", "Nuclear"])
        assert t.has_column("Renewables + Nuclear")
        assert t.cell("Renewables + Nuclear", 5) == 211 + 95

    def test_derived_parts_roundtrip(self, power_table):
        assert derived_parts("Renewables + Nuclear", power_table) == [
            "Renewables",
            "Nuclear",
        ]
        assert derived_parts("Renewables", power_table) is None
        assert derived_parts("Foo + Bar", power_table) is None

    def test_null_propagates_into_sum(self):
        t = DataTable(
            "t", [ColumnMeta("A"), ColumnMeta("B")], [[1, 2], [None, 3]]
        )
        t2 = t.with_derived_sum(["A", "B"])
        assert t2.column_values("A + B") == [3.0, None]

    def test_augment_table(self, power_table):
        name = "Renewables + Nuclear"
        rec = BindingRecord(
            object_name="combined",
            data_name=name,
            position=(CellRef(name, 1), CellRef(name, 1)),
            num=[152.0],
        )
        res = BindingResult(records=(rec,), reason="")
        assert augment_table(power_table, res).has_column(name)


class TestMetrics:
    def test_exact_spot_check(self):
        m = Metrics.from_counts(3, 1, 2)
        assert m.precision == 0.75
        assert m.recall == 0.6
        assert m.f1 == pytest.approx(2 / 3, abs=0)

    def test_zero_counts(self):
        m = Metrics.from_counts(0, 0, 0)
        assert (m.precision, m.recall, m.f1) == (0.0, 0.0, 0.0)

    @given(
        tp=st.integers(min_value=0, max_value=500),
        fp=st.integers(min_value=0, max_value=500),
        fn=st.integers(min_value=0, max_value=500),
    )
    def test_f1_is_harmonic_mean(self, tp, fp, fn):
        m = Metrics.from_counts(tp, fp, fn)
        if m.precision + m.recall > 0:
            harmonic = 2 * m.precision * m.recall / (m.precision + m.recall)
            assert math.isclose(m.f1, harmonic, abs_tol=1e-12)
        else:
            assert m.f1 == 0.0
