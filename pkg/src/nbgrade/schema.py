"""Variable dictionary, domain validation and percentage discretization.

The builtin schema is the student data dictionary: sixteen categorical
predictors plus the course grade ``GObt`` as response.  Two variables carry
grade bands that turn raw percentage marks into labels.  Bands are
lower-inclusive half-open intervals, with the top band closed at 100.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any

from nbgrade.errors import ArgumentError, DomainViolation, FormatError, RangeError, UsageError

MISSING_TOKEN = "?"

PREDICTOR = "predictor"
RESPONSE = "response"
_ROLES = (PREDICTOR, RESPONSE)


@dataclass(frozen=True)
class VariableSpec:
    """One categorical variable.

    ``bands`` is an ascending tuple of ``(lower_bound, label)`` pairs; band
    ``i`` covers ``[lower_i, lower_{i+1})`` and the last band covers
    ``[lower_last, 100]``.
    """

    name: str
    role: str
    domain: tuple[str, ...]
    bands: tuple[tuple[float, str], ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "domain", tuple(self.domain))
        if self.bands is not None:
            object.__setattr__(self, "bands", tuple((float(lo), lab) for lo, lab in self.bands))
        if not isinstance(self.name, str) or not self.name:
            raise ArgumentError("variable name must be a non-empty string")
        if self.role not in _ROLES:
            raise ArgumentError(f"{self.name}: role must be one of {_ROLES}, got {self.role!r}")
        if len(self.domain) < 2:
            raise ArgumentError(f"{self.name}: domain needs at least 2 labels")
        if any(not isinstance(v, str) or not v for v in self.domain):
            raise ArgumentError(f"{self.name}: domain labels must be non-empty strings")
        if len(set(self.domain)) != len(self.domain):
            raise ArgumentError(f"{self.name}: duplicate domain labels")
        if MISSING_TOKEN in self.domain:
            raise ArgumentError(f"{self.name}: {MISSING_TOKEN!r} is reserved for missing values")
        if self.bands is not None:
            self._check_bands()

    def _check_bands(self) -> None:
        bands = self.bands
        if not bands:
            raise ArgumentError(f"{self.name}: bands must be non-empty when given")
        lowers = [lo for lo, _ in bands]
        if lowers[0] != 0.0:
            raise ArgumentError(f"{self.name}: lowest band must start at 0")
        if any(b <= a for a, b in zip(lowers, lowers[1:])):
            raise ArgumentError(f"{self.name}: band lower bounds must be strictly ascending")
        if lowers[-1] >= 100.0:
            raise ArgumentError(f"{self.name}: band lower bounds must be below 100")
        for _, label in bands:
            if label not in self.domain:
                raise ArgumentError(f"{self.name}: band label {label!r} not in domain")

    @property
    def has_discretizer(self) -> bool:
        return self.bands is not None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "role": self.role, "domain": list(self.domain)}
        if self.bands is not None:
            out["bands"] = [{"min": _json_number(lo), "label": lab} for lo, lab in self.bands]
        return out


@dataclass(frozen=True)
class Schema:
    variables: tuple[VariableSpec, ...]
    _by_name: dict[str, VariableSpec] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ArgumentError("variable names must be unique")
        n_resp = sum(v.role == RESPONSE for v in self.variables)
        if n_resp != 1:
            raise ArgumentError(f"schema needs exactly one response variable, found {n_resp}")
        object.__setattr__(self, "_by_name", {v.name: v for v in self.variables})

    def __getitem__(self, name: str) -> VariableSpec:
        try:
            return self._by_name[name]
        except KeyError:
            raise ArgumentError(f"unknown variable {name!r}") from None

    def __contains__(self, name: object) -> bool:
        return name in self._by_name

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def response(self) -> VariableSpec:
        return next(v for v in self.variables if v.role == RESPONSE)

    @property
    def predictors(self) -> tuple[VariableSpec, ...]:
        return tuple(v for v in self.variables if v.role == PREDICTOR)

    @property
    def predictor_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.predictors)

    @property
    def classes(self) -> tuple[str, ...]:
        return self.response.domain

    def project(self, keep: Iterable[str]) -> Schema:
        """Schema restricted to ``keep`` predictors plus the response, in original order."""
        keep = set(keep)
        unknown = sorted(keep - set(self.predictor_names))
        if unknown:
            raise ArgumentError(f"not predictors of this schema: {', '.join(unknown)}")
        return Schema(tuple(v for v in self.variables if v.role == RESPONSE or v.name in keep))

    def to_dict(self) -> dict[str, Any]:
        return {"variables": [v.to_dict() for v in self.variables]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> Schema:
        try:
            entries = doc["variables"]
            if not isinstance(entries, list):
                raise FormatError("schema: 'variables' must be a list")
            variables = []
            for i, e in enumerate(entries):
                bands = e.get("bands")
                if bands is not None:
                    bands = tuple((float(b["min"]), str(b["label"])) for b in bands)
                domain = e["domain"]
                if not isinstance(domain, list):
                    raise FormatError(f"schema: variables[{i}].domain must be a list")
                variables.append(VariableSpec(str(e["name"]), e["role"], tuple(domain), bands))
        except (KeyError, TypeError, AttributeError) as exc:
            raise FormatError(f"schema: malformed document ({exc!r})") from exc
        return cls(tuple(variables))

    @classmethod
    def from_json(cls, text: str) -> Schema:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"schema: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        if not isinstance(doc, dict):
            raise FormatError("schema: top level must be an object")
        return cls.from_dict(doc)


def _json_number(x: float) -> int | float:
    return int(x) if float(x).is_integer() else x


_QUALIFICATIONS = (
    "no-education",
    "elementary",
    "secondary",
    "graduate",
    "post-graduate",
    "doctorate",
    "not-applicable",
)

GSS_BANDS = ((0, "F"), (40, "E"), (50, "D"), (60, "C"), (70, "B"), (80, "A"), (90, "O"))
GOBT_BANDS = ((0, "Fail"), (36, "Third"), (45, "Second"), (60, "First"))


def builtin_student_schema() -> Schema:
    """The 16-predictor student data dictionary with ``GObt`` as response."""
    p = PREDICTOR
    return Schema(
        (
            VariableSpec("Sex", p, ("Male", "Female")),
            VariableSpec("Cat", p, ("General", "OBC", "SC", "ST")),
            VariableSpec("Med", p, ("Hindi", "English", "Mix")),
            VariableSpec("SFH", p, ("veg", "non-veg")),
            VariableSpec("SOH", p, ("drinking", "smoking", "both", "not-applicable")),
            VariableSpec("LLoc", p, ("Village", "Town", "Tahseel", "District")),
            VariableSpec("Hos", p, ("Yes", "No")),
            VariableSpec("FSize", p, ("1", "2", "3", ">3")),
            VariableSpec("FStat", p, ("Joint", "Individual")),
            VariableSpec("FAIn", p, ("BPL", "poor", "medium", "high")),
            VariableSpec("GSS", p, ("O", "A", "B", "C", "D", "E", "F"), GSS_BANDS),
            VariableSpec("TColl", p, ("Female", "Co-education")),
            VariableSpec("FQual", p, _QUALIFICATIONS),
            VariableSpec("MQual", p, _QUALIFICATIONS),
            VariableSpec("FOcc", p, ("Service", "retired", "not-applicable")),
            VariableSpec("MOcc", p, ("House-wife", "Service", "retired", "not-applicable")),
            VariableSpec("GObt", RESPONSE, ("First", "Second", "Third", "Fail"), GOBT_BANDS),
        )
    )


def discretize(pct: float, spec: VariableSpec) -> str:
    """Map a percentage mark to its band label.

    >>> gss = builtin_student_schema()["GSS"]
    >>> discretize(95, gss), discretize(0, gss)
    ('O', 'F')
    """
    if spec.bands is None:
        raise UsageError(f"{spec.name} has no discretizer")
    pct = float(pct)
    if math.isnan(pct) or pct < 0.0 or pct > 100.0:
        raise RangeError(f"{spec.name}: percentage {pct} outside [0, 100]")
    label = spec.bands[0][1]
    for lower, band_label in spec.bands:
        if pct >= lower:
            label = band_label
        else:
            break
    return label


def validate_value(spec: VariableSpec, raw: str) -> str | None:
    """Return the domain label for ``raw``, or ``None`` for the missing token.

    Matching is exact and case-sensitive after trimming surrounding whitespace.
    """
    value = raw.strip()
    if value == MISSING_TOKEN:
        return None
    if value in spec.domain:
        return value
    raise DomainViolation(spec.name, value, spec.domain)
