import pytest
from hypothesis import given
from hypothesis import strategies as st

from narrachart.core import (
    BindingRecord,
    BindingResult,
    CellRef,
    ColumnKind,
    validate_binding,
)
from narrachart.wire import (
    RECORD_FIELDS,
    MalformedResponse,
    parse_binding,
    record_from_obj,
    record_to_obj,
    result_from_obj,
    result_to_obj,
    serialize_binding,
    table_from_csv,
    table_from_obj,
    table_to_obj,
)


class TestParseAppendixDocs:
    def test_gdp_document(self, appendix_gdp_doc, gdp_table):
        result = parse_binding(appendix_gdp_doc)
        assert len(result.records) == 2
        first, second = result.records
        assert first.object_name == "change in real GDP"
        assert first.data_name == "change in GDP"
        assert first.row_span == (7, 10)
        assert first.trend == "sharp decrease"
        assert first.num is None
        assert second.row_span == (11, 14)
        assert second.trend == "rise"
        assert second.text == "then a rise."
        assert result.reason.startswith("There is one object")
        assert validate_binding(result, gdp_table) == []

    def test_hedge_document_survives_stray_braces(self, appendix_hedge_doc, hedge_table):
        result = parse_binding(appendix_hedge_doc)
        assert len(result.records) == 3
        by_col = {r.data_name: r for r in result.records}
        assert by_col["Active"].num == (669.0,)
        assert by_col["Active"].row_span == (3, 3)
        assert by_col["Launches"].num == (5.0,)
        assert by_col["Launches"].row_span == (1, 1)
        assert by_col["Liquidations"].num == (18.0,)
        assert by_col["Liquidations"].row_span == (2, 2)
        assert all(r.trend is None for r in result.records)
        assert validate_binding(result, hedge_table) == []

    def test_tolerates_surrounding_prose(self, appendix_gdp_doc):
        raw = "Sure! Here is the binding you asked for.\n\n" + appendix_gdp_doc + "\nHope this helps."
        result = parse_binding(raw)
        assert len(result.records) == 2

    def test_missing_position_is_malformed(self):
        raw = '{"ObjectName": "x", "DataName": "y", "Trend": "rise", "Num": [Null], "Text": "x rose"}'
        with pytest.raises(MalformedResponse, match="Position"):
            parse_binding(raw)

    def test_empty_and_garbage_input(self):
        with pytest.raises(MalformedResponse):
            parse_binding("")
        with pytest.raises(MalformedResponse):
            parse_binding("no template here at all")

    def test_single_position_pair_becomes_point_ref(self):
        raw = '{"ObjectName": "x", "DataName": "A", "Position": [["A", 3]], "Num": [7], "Text": "7"}'
        rec = parse_binding(raw).records[0]
        assert rec.row_span == (3, 3)


class TestSerialize:
    def test_field_names_bit_exact(self, appendix_gdp_doc):
        result = parse_binding(appendix_gdp_doc)
        out = serialize_binding(result)
        for name in RECORD_FIELDS:
            assert f'"{name}"' in out
        assert out.count('"ObjectName"') == 2
        assert 'Reason: "' in out

    def test_absent_num_serializes_as_bracketed_null(self):
        rec = BindingRecord(
            object_name="o",
            data_name="A",
            position=(CellRef("A", 1), CellRef("A", 2)),
            trend="rise",
            text="t",
        )
        out = serialize_binding(BindingResult((rec,), "r"))
        assert '"Num": [Null]' in out
        assert '"Trend": "rise"' in out

    def test_absent_trend_serializes_as_none_string(self):
        rec = BindingRecord(
            object_name="o",
            data_name="A",
            position=(CellRef("A", 1), CellRef("A", 1)),
            num=[669.0],
            text="t",
        )
        out = serialize_binding(BindingResult((rec,), "r"))
        assert '"Trend": "None"' in out
        assert '"Num": [669]' in out


_name = st.text(
    alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd"), whitelist_characters=" "),
    min_size=1,
    max_size=20,
).map(lambda s: s.strip() or "x")


@st.composite
def binding_results(draw):
    records = []
    for _ in range(draw(st.integers(1, 4))):
        col = draw(_name)
        a = draw(st.integers(1, 50))
        b = draw(st.integers(1, 50))
        lo, hi = min(a, b), max(a, b)
        use_trend = draw(st.booleans())
        trend = draw(_name) if use_trend else None
        num = None
        if not use_trend and draw(st.booleans()):
            num = tuple(
                draw(
                    st.lists(
                        st.floats(-1e6, 1e6, allow_nan=False).map(lambda f: round(f, 4)),
                        min_size=1,
                        max_size=3,
                    )
                )
            )
        records.append(
            BindingRecord(
                object_name=draw(_name),
                data_name=col,
                position=(CellRef(col, lo), CellRef(col, hi)),
                trend=trend,
                num=num,
                text=draw(_name),
            )
        )
    return BindingResult(tuple(records), reason=draw(_name))


class TestRoundTrip:
    @given(binding_results())
    def test_parse_serialize_roundtrip(self, result):
        assert parse_binding(serialize_binding(result)) == result

    def test_roundtrip_with_escapes(self):
        rec = BindingRecord(
            object_name='the "big" one',
            data_name="A",
            position=(CellRef("A", 1), CellRef("A", 1)),
            num=[1.5],
            text="line one\nline two",
        )
        result = BindingResult((rec,), reason='said "done"\nand left')
        assert parse_binding(serialize_binding(result)) == result

    @given(binding_results())
    def test_obj_roundtrip(self, result):
        assert result_from_obj(result_to_obj(result)) == result


class TestTableInput:
    def test_csv_with_units_and_kinds(self, power_table):
        cols = {c.name: c for c in power_table.columns}
        assert cols["Year"].kind is ColumnKind.TEMPORAL
        assert cols["Renewables"].kind is ColumnKind.NUMERIC
        assert cols["Renewables"].unit == "Billion kWh"
        assert power_table.cell("Renewables", 5) == 211
        assert power_table.row_count == 5

    def test_csv_temporal_detection_from_values(self):
        t = table_from_csv("Quarter,GDP\n2007 Q1,1.0\n2007 Q2,2.0\n")
        assert t.column("Quarter").kind is ColumnKind.TEMPORAL

    def test_obj_roundtrip(self, hedge_table):
        again = table_from_obj(table_to_obj(hedge_table))
        assert again.column_names == hedge_table.column_names
        assert again.rows == hedge_table.rows

    def test_empty_csv_rejected(self):
        with pytest.raises(ValueError):
            table_from_csv("")
