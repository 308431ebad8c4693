import io
import random

import pytest
from hypothesis import given, settings, strategies as st

from nbgrade import (
    ArgumentError,
    Dataset,
    DomainViolation,
    ParseError,
    RangeError,
    Schema,
    SchemaMismatchError,
    VariableSpec,
    builtin_student_schema,
    generate,
    load_csv,
    restrict,
    split_folds,
)
from nbgrade.dataset import fold_assignment, read_csv
from nbgrade.synthgen import default_plant_spec

MED_GOBT = builtin_student_schema().project({"Med"})


def test_minimal_file():
    data = load_csv(b"Med,GObt\nHindi,First\n", MED_GOBT)
    assert len(data) == 1
    assert data.records[0] == {"Med": "Hindi", "GObt": "First"}


def test_column_order_is_free():
    a = load_csv("GObt,Med\nFirst,Hindi\n", MED_GOBT)
    b = load_csv("Med,GObt\nHindi,First\n", MED_GOBT)
    assert a == b


def test_missing_token():
    schema = builtin_student_schema().project({"SOH"})
    data = load_csv("SOH,GObt\n?,Second\n", schema)
    assert data.records[0]["SOH"] is None


@pytest.mark.parametrize("cell,label", [("92", "O"), ("92%", "O"), ("39.99", "F"), ("C", "C")])
def test_percentages_discretized(cell, label):
    schema = builtin_student_schema().project({"GSS"})
    assert load_csv(f"GSS,GObt\n{cell},70\n", schema).records[0] == {"GSS": label, "GObt": "First"}


def test_quoting_and_binary_stream():
    schema = Schema((VariableSpec("x", "predictor", ("a,b", 'say "hi"')), VariableSpec("y", "response", ("p", "q"))))
    src = io.BytesIO('x,y\n"a,b",p\n"say ""hi""",q\n'.encode("utf-8"))
    data = load_csv(src, schema)
    assert [r["x"] for r in data] == ["a,b", 'say "hi"']
    assert load_csv(data.to_csv(), schema) == data


class TestErrors:
    def test_unknown_header(self):
        with pytest.raises(SchemaMismatchError) as info:
            load_csv("Med,GObt,Extra\nHindi,First,1\n", MED_GOBT)
        assert "Extra" in str(info.value)

    def test_absent_header(self):
        with pytest.raises(SchemaMismatchError) as info:
            load_csv("Med\nHindi\n", MED_GOBT)
        assert "GObt" in str(info.value)

    def test_domain_violation_carries_row(self):
        with pytest.raises(DomainViolation) as info:
            load_csv("Med,GObt\nHindi,First\nFrench,First\n", MED_GOBT)
        assert info.value.row == 3 and info.value.variable == "Med" and info.value.value == "French"

    def test_bad_percentage(self):
        schema = builtin_student_schema().project({"GSS"})
        with pytest.raises(ParseError, match="row 2"):
            load_csv("GSS,GObt\n9.2.1,First\n", schema)
        with pytest.raises(RangeError, match="row 2"):
            load_csv("GSS,GObt\n101,First\n", schema)

    def test_ragged_row(self):
        with pytest.raises(ParseError, match="row 2"):
            load_csv("Med,GObt\nHindi\n", MED_GOBT)

    def test_skip_invalid_counts(self):
        data, skipped = read_csv("Med,GObt\nHindi,First\nFrench,First\nMix,Pass\n", MED_GOBT, skip_invalid=True)
        assert len(data) == 1 and len(skipped) == 2

    def test_empty_source(self):
        assert len(load_csv(b"", MED_GOBT)) == 0
        assert len(load_csv("Med,GObt\n", MED_GOBT)) == 0

    def test_record_validated_on_construction(self):
        with pytest.raises(DomainViolation):
            Dataset(MED_GOBT, ({"Med": "Latin", "GObt": "First"},))
        with pytest.raises(SchemaMismatchError):
            Dataset(MED_GOBT, ({"Med": "Hindi"},))


def test_response_column_optional_for_scoring():
    data = load_csv("Med\nHindi\n", MED_GOBT, require_response=False)
    assert data.records[0] == {"Med": "Hindi", "GObt": None}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**64 - 1), st.floats(0, 0.5))
def test_csv_round_trip(seed, missing):
    schema = builtin_student_schema()
    data = generate(schema, default_plant_spec(seed % 1000, n=30, missing_rate=missing))
    again = load_csv(data.to_csv(), schema)
    assert again == data
    assert again.to_csv() == data.to_csv()


class TestFolds:
    def _data(self, n):
        return generate(builtin_student_schema(), default_plant_spec(1, n=n))

    def test_even_split(self):
        assert [len(f) for f in split_folds(self._data(10), 5, 42)] == [2, 2, 2, 2, 2]

    def test_remainder(self):
        assert sorted(len(f) for f in split_folds(self._data(11), 5, 42)) == [2, 2, 2, 2, 3]

    def test_deterministic(self):
        data = self._data(23)
        assert split_folds(data, 4, 42) == split_folds(data, 4, 42)
        assert fold_assignment(23, 4, 42) != fold_assignment(23, 4, 43)

    def test_bit_exact_assignment(self):
        # Frozen output of the documented shuffle, guarding cross-implementation reproducibility.
        assert fold_assignment(10, 3, 42) == FROZEN_ASSIGNMENT

    @given(st.integers(2, 40), st.integers(2, 8), st.integers(0, 2**64 - 1))
    def test_partition(self, n, k, seed):
        if k > n:
            with pytest.raises(ArgumentError):
                fold_assignment(n, k, seed)
            return
        assign = fold_assignment(n, k, seed)
        sizes = [assign.count(f) for f in range(k)]
        assert sum(sizes) == n and max(sizes) - min(sizes) <= 1

    def test_folds_partition_records(self):
        data = self._data(17)
        folds = split_folds(data, 3, 9)
        indices = [id(r) for f in folds for r in f.records]
        assert sorted(indices) == sorted(id(r) for r in data.records)

    def test_bad_k(self):
        with pytest.raises(ArgumentError):
            split_folds(self._data(3), 4, 0)
        with pytest.raises(ArgumentError):
            split_folds(self._data(3), 1, 0)


FROZEN_ASSIGNMENT = [0, 2, 1, 0, 2, 2, 1, 0, 0, 1]


class TestRestrict:
    def _data(self):
        return generate(builtin_student_schema(), default_plant_spec(5, n=40, missing_rate=0.1))

    def test_identity(self):
        data = self._data()
        assert restrict(data, data.schema.predictor_names) == data

    def test_empty_projection(self):
        out = restrict(self._data(), set())
        assert out.schema.names == ("GObt",) and len(out) == 40

    def test_single(self):
        out = restrict(self._data(), {"GSS"})
        assert out.schema.predictor_names == ("GSS",) and len(out) == 40

    def test_unknown(self):
        with pytest.raises(ArgumentError):
            restrict(self._data(), {"Shoe"})
        with pytest.raises(ArgumentError):
            restrict(self._data(), {"GObt"})

    def test_composition(self):
        data = self._data()
        rng = random.Random(3)
        names = list(data.schema.predictor_names)
        for _ in range(20):
            a = set(rng.sample(names, rng.randint(0, len(names))))
            b = set(rng.sample(sorted(a), rng.randint(0, len(a)))) if a else set()
            assert restrict(restrict(data, a), b) == restrict(data, a & b)
