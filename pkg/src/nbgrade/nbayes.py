"""Categorical naive Bayes: counting-based training and log-space posteriors.

Training estimates each class prior as its relative frequency and each
conditional ``P(value | class)`` as

    (count(V=value, class) + alpha) / (count(class, V observed) + alpha * |domain(V)|)

so ``alpha=0`` gives raw frequencies and ``alpha=1`` is Laplace smoothing.
Records missing ``V`` drop out of ``V``'s counts only.  At inference a
missing predictor contributes no factor at all.
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping
from dataclasses import dataclass
from typing import IO, Any, Union

from nbgrade.dataset import Dataset
from nbgrade.errors import (
    ArgumentError,
    DegenerateEvidenceError,
    DomainViolation,
    FormatError,
    TrainingError,
    ValidationError,
)
from nbgrade.schema import Schema

DEFAULT_ALPHA = 1.0


@dataclass(frozen=True)
class NBModel:
    """Trained model.

    ``cpt[predictor][class][value]`` holds ``P(value | class)``.  Every
    mapping is ordered as in the schema, which keeps serialization stable.
    A (predictor, class) pair with no observations under ``alpha=0`` gets a
    uniform row.
    """

    schema: Schema
    alpha: float
    priors: dict[str, float]
    cpt: dict[str, dict[str, dict[str, float]]]
    class_counts: dict[str, int]
    n_train: int

    @property
    def classes(self) -> tuple[str, ...]:
        return self.schema.classes


@dataclass(frozen=True)
class Posterior:
    probs: dict[str, float]
    used_variables: frozenset[str]

    def argmax(self) -> str:
        """Most probable class; on exact ties the earliest class in domain order wins."""
        best, best_p = None, -1.0
        for label, p in self.probs.items():
            if p > best_p:
                best, best_p = label, p
        assert best is not None
        return best


def train(data: Dataset, alpha: float = DEFAULT_ALPHA) -> NBModel:
    """Fit priors and conditional probability tables by counting."""
    alpha = float(alpha)
    if not alpha >= 0.0 or math.isinf(alpha):
        raise ArgumentError(f"alpha must be a finite number >= 0, got {alpha}")
    if len(data) == 0:
        raise ArgumentError("cannot train on an empty dataset")
    schema = data.schema
    response = schema.response.name
    classes = schema.classes

    class_counts = dict.fromkeys(classes, 0)
    for i, rec in enumerate(data.records):
        label = rec[response]
        if label is None:
            raise TrainingError(f"record {i}: response {response} is missing")
        class_counts[label] += 1
    n = len(data)
    priors = {c: class_counts[c] / n for c in classes}

    cpt: dict[str, dict[str, dict[str, float]]] = {}
    for spec in schema.predictors:
        counts = {c: dict.fromkeys(spec.domain, 0) for c in classes}
        for rec in data.records:
            value = rec[spec.name]
            if value is not None:
                counts[rec[response]][value] += 1
        d = len(spec.domain)
        table: dict[str, dict[str, float]] = {}
        for c in classes:
            denom = sum(counts[c].values()) + alpha * d
            if denom == 0:
                table[c] = {v: 1.0 / d for v in spec.domain}
            else:
                table[c] = {v: (counts[c][v] + alpha) / denom for v in spec.domain}
        cpt[spec.name] = table

    return NBModel(schema, alpha, priors, cpt, class_counts, n)


def log_scores(model: NBModel, record: Mapping[str, str | None]) -> tuple[dict[str, float], list[str]]:
    """Unnormalized log posterior per class and the predictors that contributed.

    Zero probabilities map to ``-inf``.  The response entry of ``record``, if
    any, is ignored.
    """
    used: list[str] = []
    factors: list[tuple[str, str]] = []
    for spec in model.schema.predictors:
        if spec.name not in record:
            raise ArgumentError(f"record has no entry for predictor {spec.name}")
        value = record[spec.name]
        if value is None:
            continue
        if value not in spec.domain:
            raise DomainViolation(spec.name, str(value), spec.domain)
        used.append(spec.name)
        factors.append((spec.name, value))

    scores: dict[str, float] = {}
    for c in model.classes:
        s = _log(model.priors[c])
        for name, value in factors:
            s += _log(model.cpt[name][c][value])
        scores[c] = s
    return scores, used


def _log(p: float) -> float:
    return math.log(p) if p > 0.0 else -math.inf


def posterior(model: NBModel, record: Mapping[str, str | None]) -> Posterior:
    """Class posterior for one record, normalized after subtracting the max log score."""
    scores, used = log_scores(model, record)
    top = max(scores.values())
    if top == -math.inf:
        raise DegenerateEvidenceError(
            "every class has zero probability for this record (alpha=0 with unseen evidence)"
        )
    weights = {c: math.exp(s - top) for c, s in scores.items()}
    total = sum(weights.values())
    return Posterior({c: w / total for c, w in weights.items()}, frozenset(used))


def predict(model: NBModel, record: Mapping[str, str | None]) -> str:
    return posterior(model, record).argmax()


def model_to_dict(model: NBModel) -> dict[str, Any]:
    return {
        "alpha": model.alpha,
        "n_train": model.n_train,
        "schema": model.schema.to_dict(),
        "priors": dict(model.priors),
        "cpt": {name: {c: dict(row) for c, row in table.items()} for name, table in model.cpt.items()},
        "class_counts": dict(model.class_counts),
    }


def save_model(model: NBModel, stream: IO[bytes] | None = None) -> bytes:
    """Serialize to JSON bytes; also written to ``stream`` when given.

    Floats use Python's shortest round-trip repr, so loading restores every
    probability bit for bit.
    """
    payload = (json.dumps(model_to_dict(model), indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if stream is not None:
        stream.write(payload)
    return payload


def load_model(source: Union[bytes, str, IO[bytes]]) -> NBModel:
    if hasattr(source, "read"):
        source = source.read()  # type: ignore[union-attr]
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"model: not UTF-8 at byte offset {exc.start}") from exc
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise FormatError(
            f"model: invalid JSON at offset {exc.pos} (line {exc.lineno} column {exc.colno}): {exc.msg}"
        ) from exc
    return _model_from_dict(doc)


def _model_from_dict(doc: Any) -> NBModel:
    if not isinstance(doc, dict):
        raise FormatError("model: top level must be an object")
    required = ("alpha", "n_train", "schema", "priors", "cpt", "class_counts")
    absent = [k for k in required if k not in doc]
    if absent:
        raise FormatError(f"model: missing keys {absent}")
    try:
        schema = Schema.from_dict(doc["schema"])
    except ValidationError as exc:
        raise FormatError(f"model: embedded schema invalid: {exc}") from exc
    classes = schema.classes

    alpha = _number(doc["alpha"], "alpha")
    n_train = doc["n_train"]
    if not isinstance(n_train, int) or isinstance(n_train, bool) or n_train < 1:
        raise FormatError("model: n_train must be a positive integer")

    priors = _prob_row(doc["priors"], classes, "priors")
    counts_doc = doc["class_counts"]
    if not isinstance(counts_doc, dict) or list(counts_doc) != list(classes):
        raise FormatError(f"model: class_counts keys must be {list(classes)}")
    class_counts = {}
    for c in classes:
        v = counts_doc[c]
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise FormatError(f"model: class_counts[{c!r}] must be a non-negative integer")
        class_counts[c] = v
    if sum(class_counts.values()) != n_train:
        raise FormatError("model: class_counts do not sum to n_train")

    cpt_doc = doc["cpt"]
    if not isinstance(cpt_doc, dict) or list(cpt_doc) != list(schema.predictor_names):
        raise FormatError(f"model: cpt keys must be {list(schema.predictor_names)}")
    cpt = {}
    for spec in schema.predictors:
        table_doc = cpt_doc[spec.name]
        if not isinstance(table_doc, dict) or list(table_doc) != list(classes):
            raise FormatError(f"model: cpt[{spec.name!r}] keys must be {list(classes)}")
        cpt[spec.name] = {
            c: _prob_row(table_doc[c], spec.domain, f"cpt[{spec.name!r}][{c!r}]") for c in classes
        }
    return NBModel(schema, alpha, priors, cpt, class_counts, n_train)


def _number(x: Any, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise FormatError(f"model: {where} must be a finite number")
    return float(x)


def _prob_row(row: Any, labels: tuple[str, ...], where: str) -> dict[str, float]:
    if not isinstance(row, dict) or list(row) != list(labels):
        raise FormatError(f"model: {where} keys must be {list(labels)}")
    out = {}
    for label in labels:
        p = _number(row[label], f"{where}[{label!r}]")
        if not 0.0 <= p <= 1.0:
            raise FormatError(f"model: {where}[{label!r}] = {p} is not a probability")
        out[label] = p
    return out
