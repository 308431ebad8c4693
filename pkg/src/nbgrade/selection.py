"""Filter-style relevance ranking of predictors.

A predictor's score is the resubstitution accuracy of a naive Bayes model
that sees only that predictor (no smoothing).  With one predictor the model
predicts, for each value, the class seen most often with it, so the score
reduces to ``sum_v max_c count(V=v, class=c) / N``, counting only records
where the predictor is observed.  Predictors scoring strictly above the
threshold (default 0.5) are selected.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass

from nbgrade.dataset import Dataset
from nbgrade.errors import ArgumentError, TrainingError

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class FeatureRanking:
    scores: tuple[tuple[str, float], ...]
    threshold: float
    selected: frozenset[str]

    def score_of(self, name: str) -> float:
        return dict(self.scores)[name]

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.scores]

    def to_text(self) -> str:
        width = max([len("Variable")] + [len(n) for n, _ in self.scores])
        lines = [f"{'Variable':<{width}}  Probability"]
        lines += [f"{n:<{width}}  {s:.4f}" for n, s in self.scores]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "threshold": self.threshold,
            "scores": [{"name": n, "score": s, "selected": n in self.selected} for n, s in self.scores],
            "selected": [n for n, _ in self.scores if n in self.selected],
        }
        return json.dumps(doc, indent=2) + "\n"


def feature_score(data: Dataset, var: str) -> float:
    """Single-predictor resubstitution accuracy of ``var``; 0.0 if it is never observed."""
    schema = data.schema
    if var not in schema.predictor_names:
        raise ArgumentError(f"{var!r} is not a predictor")
    response = schema.response.name
    joint: Counter[tuple[str, str]] = Counter()
    for i, rec in enumerate(data.records):
        label = rec[response]
        if label is None:
            raise TrainingError(f"record {i}: response {response} is missing")
        value = rec[var]
        if value is not None:
            joint[value, label] += 1
    observed = sum(joint.values())
    if observed == 0:
        return 0.0
    best: dict[str, int] = {}
    for (value, _), n in joint.items():
        best[value] = max(best.get(value, 0), n)
    return sum(best.values()) / observed


def rank_features(data: Dataset, threshold: float = DEFAULT_THRESHOLD) -> FeatureRanking:
    """Score every predictor, order by score (desc) then name, select ``score > threshold``."""
    if len(data) == 0:
        raise ArgumentError("cannot rank features on an empty dataset")
    names = data.schema.predictor_names
    scores = [feature_score(data, n) for n in names]
    ordered = tuple(sorted(zip(names, scores), key=lambda t: (-t[1], t[0])))
    selected = frozenset(n for n, s in ordered if s > threshold)
    return FeatureRanking(ordered, float(threshold), selected)
