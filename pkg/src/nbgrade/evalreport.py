"""Evaluation (holdout and k-fold) and tabular reports."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any

from nbgrade.dataset import Dataset, fold_assignment
from nbgrade.errors import ArgumentError, TrainingError
from nbgrade.nbayes import NBModel, predict, train


@dataclass(frozen=True)
class ClassMetrics:
    """Precision and recall for one class.

    A ratio whose denominator is zero is reported as 0.0 with its ``*_defined``
    flag set to False.
    """

    precision: float
    recall: float
    precision_defined: bool
    recall_defined: bool


@dataclass(frozen=True)
class EvalReport:
    classes: tuple[str, ...]
    confusion: tuple[tuple[int, ...], ...]  # [true][predicted]
    n_eval: int
    fold_accuracies: tuple[float, ...] = ()
    accuracy: float = field(init=False)
    per_class: dict[str, ClassMetrics] = field(init=False)

    def __post_init__(self) -> None:
        k = len(self.classes)
        correct = sum(self.confusion[i][i] for i in range(k))
        object.__setattr__(self, "accuracy", correct / self.n_eval)
        per_class = {}
        for i, c in enumerate(self.classes):
            tp = self.confusion[i][i]
            predicted = sum(self.confusion[t][i] for t in range(k))
            actual = sum(self.confusion[i])
            per_class[c] = ClassMetrics(
                tp / predicted if predicted else 0.0,
                tp / actual if actual else 0.0,
                predicted > 0,
                actual > 0,
            )
        object.__setattr__(self, "per_class", per_class)

    @classmethod
    def from_pairs(
        cls, classes: tuple[str, ...], pairs: list[tuple[str, str]], fold_accuracies: tuple[float, ...] = ()
    ) -> EvalReport:
        """Tally ``(true, predicted)`` pairs into a report."""
        if not pairs:
            raise ArgumentError("no records to evaluate")
        index = {c: i for i, c in enumerate(classes)}
        grid = [[0] * len(classes) for _ in classes]
        for truth, pred in pairs:
            grid[index[truth]][index[pred]] += 1
        return cls(classes, tuple(tuple(r) for r in grid), len(pairs), fold_accuracies)

    def majority_baseline(self) -> float:
        """Accuracy of always predicting the most frequent true class."""
        return max(sum(row) for row in self.confusion) / self.n_eval

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "n_eval": self.n_eval,
            "accuracy": self.accuracy,
            "classes": list(self.classes),
            "confusion": [list(r) for r in self.confusion],
            "per_class": {
                c: {
                    "precision": m.precision,
                    "recall": m.recall,
                    "precision_defined": m.precision_defined,
                    "recall_defined": m.recall_defined,
                }
                for c, m in self.per_class.items()
            },
        }
        if self.fold_accuracies:
            doc["fold_accuracies"] = list(self.fold_accuracies)
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        corner = "true\\pred"
        width = max(len(c) for c in self.classes + (corner,))
        cell = max(6, max(len(c) for c in self.classes))
        out = [f"records evaluated: {self.n_eval}", f"accuracy: {self.accuracy:.4f}", ""]
        out.append(f"{corner:<{width}}" + "".join(f"  {c:>{cell}}" for c in self.classes))
        for c, row in zip(self.classes, self.confusion):
            out.append(f"{c:<{width}}" + "".join(f"  {n:>{cell}}" for n in row))
        out += ["", f"{'class':<{width}}  precision     recall"]
        for c, m in self.per_class.items():
            p = f"{m.precision:.4f}" + ("" if m.precision_defined else "*")
            r = f"{m.recall:.4f}" + ("" if m.recall_defined else "*")
            out.append(f"{c:<{width}}  {p:>9}  {r:>9}")
        if not all(m.precision_defined and m.recall_defined for m in self.per_class.values()):
            out.append("* undefined (no predictions or no true records for the class), shown as 0")
        if self.fold_accuracies:
            out += ["", "per-fold accuracy: " + " ".join(f"{a:.4f}" for a in self.fold_accuracies)]
        return "\n".join(out) + "\n"


def _truths(data: Dataset) -> list[str]:
    truths = data.responses()
    for i, t in enumerate(truths):
        if t is None:
            raise TrainingError(f"record {i}: response {data.schema.response.name} is missing")
    return truths  # type: ignore[return-value]


def evaluate(model: NBModel, data: Dataset) -> EvalReport:
    if len(data) == 0:
        raise ArgumentError("cannot evaluate on an empty dataset")
    if data.schema != model.schema:
        raise ArgumentError("dataset schema does not match the model schema")
    truths = _truths(data)
    pairs = [(t, predict(model, rec)) for t, rec in zip(truths, data.records)]
    return EvalReport.from_pairs(model.classes, pairs)


def cross_validate(data: Dataset, k: int, alpha: float, seed: int) -> EvalReport:
    """Pooled k-fold report; fold membership comes from ``fold_assignment``.

    Predictions are pooled in original record order, so the result does not
    depend on the order folds are processed.
    """
    truths = _truths(data)
    assign = fold_assignment(len(data), k, seed)
    predicted: list[str | None] = [None] * len(data)
    fold_acc = []
    for fold in range(k):
        held = [i for i, f in enumerate(assign) if f == fold]
        model = train(data.subset(i for i, f in enumerate(assign) if f != fold), alpha)
        hits = 0
        for i in held:
            predicted[i] = predict(model, data.records[i])
            hits += predicted[i] == truths[i]
        fold_acc.append(hits / len(held))
    pairs = [(t, p) for t, p in zip(truths, predicted)]
    return EvalReport.from_pairs(data.schema.classes, pairs, tuple(fold_acc))  # type: ignore[arg-type]


@dataclass(frozen=True)
class ContingencyTable:
    """Counts of one predictor's values against response classes.

    Records where either the predictor or the response is missing are left
    out of the cells and counted in ``excluded``.
    """

    variable: str
    values: tuple[str, ...]
    classes: tuple[str, ...]
    cells: dict[tuple[str, str], int]
    excluded: int

    @property
    def row_totals(self) -> dict[str, int]:
        return {v: sum(self.cells[v, c] for c in self.classes) for v in self.values}

    @property
    def column_totals(self) -> dict[str, int]:
        return {c: sum(self.cells[v, c] for v in self.values) for c in self.classes}

    @property
    def total(self) -> int:
        return sum(self.cells.values())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.variable, *self.classes])
        for v in self.values:
            w.writerow([v, *(self.cells[v, c] for c in self.classes)])
        return buf.getvalue()

    def to_text(self) -> str:
        head = [self.variable, *self.classes, "Total"]
        rows = [[v, *(str(self.cells[v, c]) for c in self.classes), str(self.row_totals[v])] for v in self.values]
        cols = self.column_totals
        rows.append(["Total", *(str(cols[c]) for c in self.classes), str(self.total)])
        widths = [max(len(r[i]) for r in [head, *rows]) for i in range(len(head))]

        def fmt(row: list[str]) -> str:
            return "  ".join(s.ljust(widths[0]) if i == 0 else s.rjust(widths[i]) for i, s in enumerate(row))

        lines = [fmt(head), *map(fmt, rows), f"excluded (missing): {self.excluded}"]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "variable": self.variable,
            "classes": list(self.classes),
            "rows": {v: {c: self.cells[v, c] for c in self.classes} for v in self.values},
            "row_totals": self.row_totals,
            "column_totals": self.column_totals,
            "excluded": self.excluded,
        }
        return json.dumps(doc, indent=2) + "\n"


def contingency(data: Dataset, var: str) -> ContingencyTable:
    schema = data.schema
    if var not in schema.predictor_names:
        raise ArgumentError(f"{var!r} is not a predictor")
    spec = schema[var]
    response = schema.response.name
    cells = {(v, c): 0 for v in spec.domain for c in schema.classes}
    excluded = 0
    for rec in data.records:
        value, label = rec[var], rec[response]
        if value is None or label is None:
            excluded += 1
        else:
            cells[value, label] += 1
    return ContingencyTable(var, spec.domain, schema.classes, cells, excluded)
