"""Schema-validated categorical datasets: CSV I/O, projection and fold splitting."""

from __future__ import annotations

import csv
import io
import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import IO, Union

from nbgrade.errors import (
    ArgumentError,
    DomainViolation,
    ParseError,
    RangeError,
    SchemaMismatchError,
    ValidationError,
)
from nbgrade.prng import SplitMix64
from nbgrade.schema import MISSING_TOKEN, Schema, discretize, validate_value

Source = Union[bytes, str, IO[bytes], IO[str]]

# Cells shaped like a number for a banded variable; anything else is read as a label.
_NUMERIC_LIKE = re.compile(r"^[+-]?[0-9.eE+-]*[0-9][0-9.eE+-]*%?$")


class Record(Mapping[str, Union[str, None]]):
    """Immutable mapping of variable name to label, ``None`` marking a missing value."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[str, str | None] | Iterable[tuple[str, str | None]]):
        self._values = dict(values)

    def __getitem__(self, key: str) -> str | None:
        return self._values[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __hash__(self) -> int:
        return hash(frozenset(self._values.items()))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Record):
            return self._values == other._values
        if isinstance(other, Mapping):
            return self._values == dict(other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"Record({self._values!r})"

    def project(self, names: Iterable[str]) -> Record:
        return Record({n: self._values[n] for n in names})


def check_record(schema: Schema, record: Mapping[str, str | None], row: int | None = None) -> None:
    """Raise if ``record`` keys differ from the schema or a value is outside its domain."""
    if set(record) != set(schema.names):
        extra = sorted(set(record) - set(schema.names))
        missing = sorted(set(schema.names) - set(record))
        where = f"row {row}: " if row is not None else ""
        raise SchemaMismatchError(f"{where}record keys mismatch (unexpected {extra}, absent {missing})")
    for spec in schema.variables:
        value = record[spec.name]
        if value is not None and value not in spec.domain:
            raise DomainViolation(spec.name, str(value), spec.domain, row)


@dataclass(frozen=True)
class Dataset:
    schema: Schema
    records: tuple[Record, ...]

    def __post_init__(self) -> None:
        recs = tuple(r if isinstance(r, Record) else Record(r) for r in self.records)
        for i, r in enumerate(recs):
            check_record(self.schema, r, row=i)
        object.__setattr__(self, "records", recs)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[Record]:
        return iter(self.records)

    def responses(self) -> list[str | None]:
        name = self.schema.response.name
        return [r[name] for r in self.records]

    def subset(self, indices: Iterable[int]) -> Dataset:
        return Dataset(self.schema, tuple(self.records[i] for i in indices))

    def to_csv(self) -> str:
        buf = io.StringIO()
        write_csv(self, buf)
        return buf.getvalue()


def _text_lines(source: Source) -> IO[str]:
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"), newline="")
    if isinstance(source, str):
        return io.StringIO(source, newline="")
    if isinstance(source, io.TextIOBase):
        return source  # type: ignore[return-value]
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return io.StringIO(data, newline="")


def _parse_cell(schema: Schema, name: str, raw: str, row: int) -> str | None:
    spec = schema[name]
    cell = raw.strip()
    if spec.bands is not None and cell != MISSING_TOKEN and cell not in spec.domain and _NUMERIC_LIKE.match(cell):
        try:
            pct = float(cell[:-1] if cell.endswith("%") else cell)
        except ValueError:
            raise ParseError(f"row {row}: {name}: cannot parse percentage {cell!r}") from None
        try:
            return discretize(pct, spec)
        except RangeError as exc:
            raise RangeError(f"row {row}: {exc}") from None
    try:
        return validate_value(spec, cell)
    except DomainViolation as exc:
        raise DomainViolation(exc.variable, exc.value, exc.domain, row) from None


def read_csv(
    source: Source,
    schema: Schema,
    *,
    skip_invalid: bool = False,
    require_response: bool = True,
) -> tuple[Dataset, list[ValidationError]]:
    """Parse CSV into a dataset, returning it with the per-row errors that were skipped.

    Row numbers in errors are physical line numbers (the header is line 1).
    With ``skip_invalid`` false the first invalid row raises.  With
    ``require_response`` false the response column may be absent from the
    header, in which case every record's response is missing.  An input with
    no header at all yields an empty dataset.
    """
    reader = csv.reader(_text_lines(source))
    header = next(reader, None)
    if header is None:
        return Dataset(schema, ()), []
    header = [h.strip() for h in header]
    expected = set(schema.names)
    optional = set() if require_response else {schema.response.name}
    dupes = sorted({h for h in header if header.count(h) > 1})
    unknown = [h for h in header if h not in expected]
    absent = [n for n in schema.names if n not in header and n not in optional]
    if dupes or unknown or absent:
        raise SchemaMismatchError(
            f"header {header} does not match schema columns {list(schema.names)}"
            f" (unknown: {unknown}, absent: {absent}, duplicated: {dupes})"
        )

    records: list[Record] = []
    skipped: list[ValidationError] = []
    for cells in reader:
        row = reader.line_num
        if not cells or all(not c.strip() for c in cells) and len(cells) <= 1:
            continue
        try:
            if len(cells) != len(header):
                raise ParseError(f"row {row}: expected {len(header)} cells, found {len(cells)}")
            values = {name: _parse_cell(schema, name, raw, row) for name, raw in zip(header, cells)}
            for name in schema.names:
                values.setdefault(name, None)
            records.append(Record({n: values[n] for n in schema.names}))
        except ValidationError as exc:
            if not skip_invalid:
                raise
            skipped.append(exc)
    return Dataset(schema, tuple(records)), skipped


def load_csv(source: Source, schema: Schema, *, require_response: bool = True) -> Dataset:
    """Strict load: any invalid row fails the whole file.

    Columns may appear in any order.  Cells of banded variables that parse
    as numbers (an optional trailing ``%`` is allowed) are discretized;
    other cells must be domain labels or ``?``.
    """
    data, _ = read_csv(source, schema, require_response=require_response)
    return data


def write_csv(data: Dataset, stream: IO[str]) -> None:
    """Write ``data`` with columns in schema order and ``?`` for missing values."""
    writer = csv.writer(stream, lineterminator="\n")
    names = data.schema.names
    writer.writerow(names)
    for rec in data.records:
        writer.writerow([MISSING_TOKEN if rec[n] is None else rec[n] for n in names])


def fold_assignment(n: int, k: int, seed: int) -> list[int]:
    """Fold index of each of ``n`` records.

    Indices ``0..n-1`` are Fisher-Yates shuffled with ``SplitMix64(seed)``;
    the record at shuffled position ``p`` goes to fold ``p mod k``.
    """
    if k < 2:
        raise ArgumentError(f"k must be at least 2, got {k}")
    if n < k:
        raise ArgumentError(f"cannot split {n} records into {k} folds")
    order = list(range(n))
    SplitMix64(seed).shuffle(order)
    folds = [0] * n
    for pos, idx in enumerate(order):
        folds[idx] = pos % k
    return folds


def split_folds(data: Dataset, k: int, seed: int) -> list[Dataset]:
    """Partition ``data`` into ``k`` folds whose sizes differ by at most one.

    Records keep their original relative order inside each fold.
    """
    assign = fold_assignment(len(data), k, seed)
    return [data.subset(i for i, f in enumerate(assign) if f == fold) for fold in range(k)]


def restrict(data: Dataset, keep: Iterable[str]) -> Dataset:
    """Project ``data`` onto the ``keep`` predictors plus the response."""
    schema = data.schema.project(keep)
    names = schema.names
    return Dataset(schema, tuple(r.project(names) for r in data.records))
