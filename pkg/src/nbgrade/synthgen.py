"""Seeded synthetic cohorts with planted predictor/response dependencies.

Each record ``i`` and schema variable ``j`` get their own ``SplitMix64``
stream seeded with ``derive(seed, i, j)``.  The response is drawn first
from its marginal; each predictor then draws its value (from its planted
class-conditional table, or uniformly) and afterwards one ``uniform()``
that blanks the value when below the variable's missing rate.  Records can
therefore be produced in any order with identical results.
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any, Union

from nbgrade.dataset import Dataset, Record
from nbgrade.errors import FormatError, SpecError
from nbgrade.prng import MASK64, SplitMix64, derive
from nbgrade.schema import Schema

_TOL = 1e-9


@dataclass(frozen=True)
class PlantSpec:
    """Cohort recipe.

    ``planted[predictor][class][value]`` is ``P(value | class)``.
    ``missing_rate`` is either one rate for all predictors or a per-predictor
    mapping (unlisted predictors get 0).  The response is never blanked.
    """

    n: int
    seed: int
    response_marginal: dict[str, float]
    planted: dict[str, dict[str, dict[str, float]]] = field(default_factory=dict)
    missing_rate: Union[float, dict[str, float]] = 0.0

    def rate_for(self, name: str) -> float:
        if isinstance(self.missing_rate, Mapping):
            return float(self.missing_rate.get(name, 0.0))
        return float(self.missing_rate)

    def validate(self, schema: Schema) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise SpecError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed <= MASK64:
            raise SpecError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        _check_distribution(self.response_marginal, schema.classes, "response_marginal")
        for name, table in self.planted.items():
            if name not in schema.predictor_names:
                raise SpecError(f"planted[{name!r}]: not a predictor of the schema")
            if set(table) != set(schema.classes):
                raise SpecError(f"planted[{name!r}]: needs one row per class {list(schema.classes)}")
            for c, row in table.items():
                _check_distribution(row, schema[name].domain, f"planted[{name!r}][{c!r}]")
        rates = self.missing_rate if isinstance(self.missing_rate, Mapping) else {"*": self.missing_rate}
        for name, r in rates.items():
            if name != "*" and name not in schema.predictor_names:
                raise SpecError(f"missing_rate[{name!r}]: not a predictor of the schema")
            if not isinstance(r, (int, float)) or not 0.0 <= r < 1.0:
                raise SpecError(f"missing_rate[{name!r}] must lie in [0, 1), got {r!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "seed": self.seed,
            "response_marginal": dict(self.response_marginal),
            "planted": self.planted,
            "missing_rate": self.missing_rate,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> PlantSpec:
        try:
            return cls(
                n=doc["n"],
                seed=doc["seed"],
                response_marginal=dict(doc["response_marginal"]),
                planted={k: {c: dict(r) for c, r in t.items()} for k, t in doc.get("planted", {}).items()},
                missing_rate=doc.get("missing_rate", 0.0),
            )
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise FormatError(f"plant spec: malformed document ({exc!r})") from exc

    @classmethod
    def from_json(cls, text: str) -> PlantSpec:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"plant spec: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        if not isinstance(doc, dict):
            raise FormatError("plant spec: top level must be an object")
        return cls.from_dict(doc)


def _check_distribution(dist: Mapping[str, float], labels: tuple[str, ...], where: str) -> None:
    unknown = sorted(set(dist) - set(labels))
    if unknown:
        raise SpecError(f"{where}: labels {unknown} not in domain {list(labels)}")
    for label, p in dist.items():
        if isinstance(p, bool) or not isinstance(p, (int, float)) or not math.isfinite(p) or p < 0:
            raise SpecError(f"{where}[{label!r}]: probability must be a finite number >= 0, got {p!r}")
    total = math.fsum(dist.values())
    if abs(total - 1.0) > _TOL:
        raise SpecError(f"{where}: probabilities sum to {total!r}, not 1")


def generate(schema: Schema, spec: PlantSpec) -> Dataset:
    spec.validate(schema)
    classes = schema.classes
    class_weights = [float(spec.response_marginal.get(c, 0.0)) for c in classes]
    index = {name: j for j, name in enumerate(schema.names)}
    response = schema.response.name

    predictor_plan = []
    for var in schema.predictors:
        table = spec.planted.get(var.name)
        if table is None:
            weights = None
        else:
            weights = {c: [float(table[c].get(v, 0.0)) for v in var.domain] for c in classes}
        predictor_plan.append((var, index[var.name], weights, spec.rate_for(var.name)))

    records = []
    for i in range(spec.n):
        rng = SplitMix64(derive(spec.seed, i, index[response]))
        label = classes[rng.choice_index(class_weights)]
        values: dict[str, str | None] = {}
        for var, j, weights, rate in predictor_plan:
            rng = SplitMix64(derive(spec.seed, i, j))
            if weights is None:
                value: str | None = var.domain[rng.below(len(var.domain))]
            else:
                value = var.domain[rng.choice_index(weights[label])]
            if rng.uniform() < rate:
                value = None
            values[var.name] = value
        values[response] = label
        records.append(Record({n: values[n] for n in schema.names}))
    return Dataset(schema, tuple(records))


DEFAULT_RESPONSE_MARGINAL = {"First": 0.40, "Second": 0.35, "Third": 0.15, "Fail": 0.10}

# Senior-secondary grade tracks the course grade closely; living location and
# medium of teaching carry weaker signal.
_DEFAULT_PLANTED = {
    "GSS": {
        "First": {"O": 0.35, "A": 0.35, "B": 0.20, "C": 0.05, "D": 0.03, "E": 0.01, "F": 0.01},
        "Second": {"O": 0.03, "A": 0.07, "B": 0.20, "C": 0.40, "D": 0.20, "E": 0.07, "F": 0.03},
        "Third": {"O": 0.01, "A": 0.02, "B": 0.07, "C": 0.15, "D": 0.45, "E": 0.25, "F": 0.05},
        "Fail": {"O": 0.01, "A": 0.01, "B": 0.02, "C": 0.06, "D": 0.15, "E": 0.35, "F": 0.40},
    },
    "LLoc": {
        "First": {"Village": 0.10, "Town": 0.20, "Tahseel": 0.15, "District": 0.55},
        "Second": {"Village": 0.15, "Town": 0.55, "Tahseel": 0.15, "District": 0.15},
        "Third": {"Village": 0.30, "Town": 0.15, "Tahseel": 0.40, "District": 0.15},
        "Fail": {"Village": 0.55, "Town": 0.10, "Tahseel": 0.25, "District": 0.10},
    },
    "Med": {
        "First": {"Hindi": 0.65, "English": 0.10, "Mix": 0.25},
        "Second": {"Hindi": 0.20, "English": 0.15, "Mix": 0.65},
        "Third": {"Hindi": 0.25, "English": 0.45, "Mix": 0.30},
        "Fail": {"Hindi": 0.20, "English": 0.60, "Mix": 0.20},
    },
}


def default_plant_spec(seed: int = 0, n: int = 300, missing_rate: float = 0.0) -> PlantSpec:
    """The reference cohort: 300 students, GSS strongly planted, LLoc and Med weaker."""
    planted = {k: {c: dict(r) for c, r in t.items()} for k, t in _DEFAULT_PLANTED.items()}
    return PlantSpec(n, seed, dict(DEFAULT_RESPONSE_MARGINAL), planted, missing_rate)
