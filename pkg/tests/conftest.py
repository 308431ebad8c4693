from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from nbgrade import Dataset, Schema, VariableSpec

PREDICTOR_NAMES = ("A", "B", "C")
CLASS_LABELS = ("c0", "c1", "c2")


def small_schema(n_predictors: int, domain_sizes: list[int], n_classes: int) -> Schema:
    variables = [
        VariableSpec(PREDICTOR_NAMES[i], "predictor", tuple(f"v{j}" for j in range(domain_sizes[i])))
        for i in range(n_predictors)
    ]
    variables.append(VariableSpec("y", "response", CLASS_LABELS[:n_classes]))
    return Schema(tuple(variables))


def random_instance(rng: random.Random, *, max_records=20, missing=0.0, min_records=1):
    """Random small schema + dataset + query record, as plain rows for the oracles."""
    n_pred = rng.randint(1, 3)
    sizes = [rng.randint(2, 3) for _ in range(n_pred)]
    n_classes = rng.randint(2, 3)
    schema = small_schema(n_pred, sizes, n_classes)
    rows = []
    for _ in range(rng.randint(min_records, max_records)):
        row = {}
        for spec in schema.predictors:
            row[spec.name] = None if rng.random() < missing else rng.choice(spec.domain)
        row["y"] = rng.choice(schema.classes)
        rows.append(row)
    query = {spec.name: rng.choice(spec.domain) for spec in schema.predictors}
    query["y"] = None
    return schema, Dataset(schema, tuple(rows)), rows, query


@st.composite
def instances(draw, max_records=20, allow_missing=False):
    n_pred = draw(st.integers(1, 3))
    sizes = [draw(st.integers(2, 3)) for _ in range(n_pred)]
    n_classes = draw(st.integers(2, 3))
    schema = small_schema(n_pred, sizes, n_classes)
    n = draw(st.integers(1, max_records))

    def value(spec):
        options = list(spec.domain) + ([None] if allow_missing else [])
        return st.sampled_from(options)

    rows = []
    for _ in range(n):
        row = {spec.name: draw(value(spec)) for spec in schema.predictors}
        row["y"] = draw(st.sampled_from(schema.classes))
        rows.append(row)
    query = {spec.name: draw(value(spec)) for spec in schema.predictors}
    query["y"] = None
    return schema, Dataset(schema, tuple(rows)), rows, query


@pytest.fixture
def student_schema():
    from nbgrade import builtin_student_schema

    return builtin_student_schema()


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report_criterion():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""

    def record(label: str, passed: bool, detail: str) -> None:
        _ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
