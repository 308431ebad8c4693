"""Categorical naive Bayes for student grade prediction.

Covers the whole pipeline: a typed variable dictionary with grade-band
discretization, CSV ingestion, training with optional Laplace smoothing,
missing-tolerant posteriors, single-variable relevance ranking,
cross-validated evaluation, contingency tables and a seeded synthetic
cohort generator.
"""

from nbgrade.dataset import Dataset, Record, load_csv, restrict, split_folds, write_csv
from nbgrade.errors import (
    ArgumentError,
    DegenerateEvidenceError,
    DomainViolation,
    FormatError,
    NBGradeError,
    ParseError,
    RangeError,
    SchemaMismatchError,
    SpecError,
    TrainingError,
    UsageError,
    ValidationError,
)
from nbgrade.evalreport import ContingencyTable, EvalReport, contingency, cross_validate, evaluate
from nbgrade.nbayes import NBModel, Posterior, load_model, posterior, predict, save_model, train
from nbgrade.schema import (
    MISSING_TOKEN,
    Schema,
    VariableSpec,
    builtin_student_schema,
    discretize,
    validate_value,
)
from nbgrade.selection import FeatureRanking, feature_score, rank_features
from nbgrade.synthgen import PlantSpec, default_plant_spec, generate

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "ContingencyTable",
    "Dataset",
    "DegenerateEvidenceError",
    "DomainViolation",
    "EvalReport",
    "FeatureRanking",
    "FormatError",
    "MISSING_TOKEN",
    "NBGradeError",
    "NBModel",
    "ParseError",
    "PlantSpec",
    "Posterior",
    "RangeError",
    "Record",
    "Schema",
    "SchemaMismatchError",
    "SpecError",
    "TrainingError",
    "UsageError",
    "ValidationError",
    "VariableSpec",
    "builtin_student_schema",
    "contingency",
    "cross_validate",
    "default_plant_spec",
    "discretize",
    "evaluate",
    "feature_score",
    "generate",
    "load_csv",
    "load_model",
    "posterior",
    "predict",
    "rank_features",
    "restrict",
    "save_model",
    "split_folds",
    "train",
    "validate_value",
    "write_csv",
]
