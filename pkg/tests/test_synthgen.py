import math

import pytest

from nbgrade import (
    FormatError,
    SpecError,
    builtin_student_schema,
    generate,
    load_csv,
    train,
)
from nbgrade.synthgen import DEFAULT_RESPONSE_MARGINAL, PlantSpec, default_plant_spec

SCHEMA = builtin_student_schema()


def test_unplanted_predictors_look_uniform():
    data = generate(SCHEMA, PlantSpec(100, 21, dict(DEFAULT_RESPONSE_MARGINAL)))
    for spec in SCHEMA.predictors:
        d = len(spec.domain)
        p = 1 / d
        sigma = math.sqrt(100 * p * (1 - p))
        for v in spec.domain:
            count = sum(r[spec.name] == v for r in data.records)
            assert abs(count - 100 * p) <= 4 * sigma, (spec.name, v, count)


def test_planted_conditional_recovered():
    planted = {"GSS": {c: {"O": 0.9, "F": 0.1} for c in SCHEMA.classes}}
    data = generate(SCHEMA, PlantSpec(1000, 5, dict(DEFAULT_RESPONSE_MARGINAL), planted))
    assert abs(train(data, 0).cpt["GSS"]["First"]["O"] - 0.9) <= 0.1


@pytest.mark.parametrize("n", [300, 3000])
def test_cpts_converge(n):
    spec = default_plant_spec(31, n=n)
    model = train(generate(SCHEMA, spec), 0)
    for name, table in spec.planted.items():
        for c, row in table.items():
            n_class = model.class_counts[c]
            for v in SCHEMA[name].domain:
                p = row.get(v, 0.0)
                tol = 3 * math.sqrt(p * (1 - p) / n_class) + 1 / n_class
                assert abs(model.cpt[name][c][v] - p) <= tol, (name, c, v)


def test_deterministic_and_seed_sensitive():
    a = generate(SCHEMA, default_plant_spec(77)).to_csv()
    assert a == generate(SCHEMA, default_plant_spec(77)).to_csv()
    assert a != generate(SCHEMA, default_plant_spec(78)).to_csv()


def test_prefix_stable():
    # Per-record streams: a shorter cohort is a prefix of a longer one.
    short = generate(SCHEMA, default_plant_spec(4, n=20))
    long = generate(SCHEMA, default_plant_spec(4, n=50))
    assert long.records[:20] == short.records


def test_missing_rate():
    data = generate(SCHEMA, default_plant_spec(6, n=500, missing_rate=0.2))
    cells = [r[s.name] for r in data.records for s in SCHEMA.predictors]
    frac = sum(v is None for v in cells) / len(cells)
    assert abs(frac - 0.2) < 0.02
    assert all(r["GObt"] is not None for r in data.records)
    assert load_csv(data.to_csv(), SCHEMA) == data


def test_per_variable_missing_rate():
    spec = PlantSpec(200, 1, dict(DEFAULT_RESPONSE_MARGINAL), {}, {"Sex": 0.5})
    data = generate(SCHEMA, spec)
    assert any(r["Sex"] is None for r in data.records)
    assert all(r["Cat"] is not None for r in data.records)


@pytest.mark.parametrize(
    "kwargs,needle",
    [
        (dict(response_marginal={"First": 0.5, "Second": 0.4}), "response_marginal"),
        (dict(response_marginal={"First": 1.0, "Pass": 0.0}), "response_marginal"),
        (dict(planted={"GObt": {}}), "GObt"),
        (dict(planted={"Med": {c: {"Hindi": 0.5, "Mix": 0.4} for c in SCHEMA.classes}}), "planted['Med']"),
        (dict(planted={"Med": {"First": {"Hindi": 1.0}}}), "Med"),
        (dict(missing_rate=1.0), "missing_rate"),
        (dict(missing_rate={"Shoe": 0.1}), "Shoe"),
        (dict(n=0), "n must"),
        (dict(seed=-1), "seed"),
    ],
)
def test_invalid_specs(kwargs, needle):
    base = dict(n=10, seed=0, response_marginal=dict(DEFAULT_RESPONSE_MARGINAL))
    base.update(kwargs)
    with pytest.raises(SpecError) as info:
        generate(SCHEMA, PlantSpec(**base))
    assert needle in str(info.value)


def test_spec_json_round_trip():
    spec = default_plant_spec(9, missing_rate=0.05)
    again = PlantSpec.from_json(spec.to_json())
    assert again == spec
    assert generate(SCHEMA, again).to_csv() == generate(SCHEMA, spec).to_csv()
    with pytest.raises(FormatError):
        PlantSpec.from_json("{")
    with pytest.raises(FormatError):
        PlantSpec.from_json('{"n": 3}')
