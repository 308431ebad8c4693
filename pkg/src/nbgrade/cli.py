"""Command-line front end.

Exit status: 0 success, 1 validation failure, 2 usage error, 3 I/O or
format error.  Diagnostics go to stderr; data goes to stdout or ``--out``.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import sys
from collections.abc import Sequence
from typing import IO

from nbgrade.dataset import Dataset, read_csv
from nbgrade.errors import FormatError, NBGradeError, UsageError, ValidationError
from nbgrade.evalreport import contingency, cross_validate
from nbgrade.nbayes import DEFAULT_ALPHA, load_model, posterior, save_model, train
from nbgrade.schema import MISSING_TOKEN, Schema, builtin_student_schema
from nbgrade.selection import DEFAULT_THRESHOLD, rank_features
from nbgrade.synthgen import PlantSpec, default_plant_spec, generate

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage().rstrip()}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nbgrade", description="Naive Bayes grade prediction for categorical student data.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    sp = sub.add_parser("schema", help="inspect schemas")
    ssub = sp.add_subparsers(dest="schema_command", metavar="ACTION", parser_class=_Parser)
    ssub.required = True
    show = ssub.add_parser("show", help="print a schema as JSON")
    src = show.add_mutually_exclusive_group()
    src.add_argument("--builtin", action="store_true", help="the builtin student schema (default)")
    src.add_argument("--file", metavar="F", help="schema JSON file")

    g = sub.add_parser("gen", help="generate a synthetic cohort CSV")
    g.add_argument("--spec", required=True, metavar="S", help="plant spec JSON file, or 'default'")
    g.add_argument("--schema", default="builtin", metavar="S")
    g.add_argument("--seed", type=int, help="override the spec's seed")
    g.add_argument("--n", type=int, help="override the spec's cohort size")
    g.add_argument("--out", metavar="F")

    t = sub.add_parser("train", help="train a model")
    _data_args(t)
    t.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    t.add_argument("--out", metavar="M")

    pr = sub.add_parser("predict", help="append predictions and posteriors to a CSV")
    pr.add_argument("--model", required=True, metavar="M")
    pr.add_argument("--data", required=True, metavar="F")
    pr.add_argument("--skip-invalid", action="store_true")
    pr.add_argument("--out", metavar="F2")

    r = sub.add_parser("rank", help="rank predictors by single-variable accuracy")
    _data_args(r)
    r.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    r.add_argument("--format", choices=("text", "json"), default="text")

    e = sub.add_parser("evaluate", help="k-fold cross-validation")
    _data_args(e)
    e.add_argument("--folds", type=int, default=10, metavar="K")
    e.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    e.add_argument("--seed", type=int, default=0, metavar="N")
    e.add_argument("--format", choices=("text", "json"), default="text")

    c = sub.add_parser("crosstab", help="contingency table of one predictor against the response")
    _data_args(c)
    c.add_argument("--var", required=True, metavar="V")
    c.add_argument("--format", choices=("text", "csv", "json"), default="text")
    return p


def _data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", required=True, metavar="F", help="CSV file, or '-' for stdin")
    p.add_argument("--schema", default="builtin", metavar="S", help="'builtin' or a schema JSON file")
    p.add_argument("--skip-invalid", action="store_true", help="drop invalid rows instead of failing")


def _read_text(path: str, stdin: IO[str]) -> str:
    if path == "-":
        return stdin.read()
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


def _load_schema(arg: str) -> Schema:
    if arg == "builtin":
        return builtin_student_schema()
    with open(arg, encoding="utf-8") as fh:
        return Schema.from_json(fh.read())


def _load_data(path: str, schema: Schema, skip: bool, stdin: IO[str], stderr: IO[str], **kw) -> Dataset:
    data, skipped = read_csv(_read_text(path, stdin), schema, skip_invalid=skip, **kw)
    if skipped:
        for exc in skipped:
            print(f"skipped: {exc}", file=stderr)
        print(f"skipped {len(skipped)} invalid row(s)", file=stderr)
    return data


def _emit(text: str, out: str | None, stdout: IO[str]) -> None:
    if out is None:
        stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _cmd_schema(args, stdin, stdout, stderr) -> None:
    schema = _load_schema(args.file) if args.file else builtin_student_schema()
    stdout.write(schema.to_json())


def _cmd_gen(args, stdin, stdout, stderr) -> None:
    schema = _load_schema(args.schema)
    spec = default_plant_spec() if args.spec == "default" else PlantSpec.from_json(_read_text(args.spec, stdin))
    if args.seed is not None or args.n is not None:
        spec = PlantSpec(
            args.n if args.n is not None else spec.n,
            args.seed if args.seed is not None else spec.seed,
            spec.response_marginal,
            spec.planted,
            spec.missing_rate,
        )
    _emit(generate(schema, spec).to_csv(), args.out, stdout)


def _cmd_train(args, stdin, stdout, stderr) -> None:
    schema = _load_schema(args.schema)
    data = _load_data(args.data, schema, args.skip_invalid, stdin, stderr)
    payload = save_model(train(data, args.alpha)).decode("utf-8")
    _emit(payload, args.out, stdout)


def _cmd_predict(args, stdin, stdout, stderr) -> None:
    with open(args.model, "rb") as fh:
        model = load_model(fh.read())
    data = _load_data(args.data, model.schema, args.skip_invalid, stdin, stderr, require_response=False)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = model.schema.names
    w.writerow([*names, "predicted", *(f"p_{c}" for c in model.classes)])
    for rec in data.records:
        post = posterior(model, rec)
        w.writerow(
            [
                *(MISSING_TOKEN if rec[n] is None else rec[n] for n in names),
                post.argmax(),
                *(f"{post.probs[c]:.6f}" for c in model.classes),
            ]
        )
    _emit(buf.getvalue(), args.out, stdout)


def _cmd_rank(args, stdin, stdout, stderr) -> None:
    data = _load_data(args.data, _load_schema(args.schema), args.skip_invalid, stdin, stderr)
    ranking = rank_features(data, args.threshold)
    stdout.write(ranking.to_json() if args.format == "json" else ranking.to_text())


def _cmd_evaluate(args, stdin, stdout, stderr) -> None:
    data = _load_data(args.data, _load_schema(args.schema), args.skip_invalid, stdin, stderr)
    report = cross_validate(data, args.folds, args.alpha, args.seed)
    stdout.write(report.to_json() if args.format == "json" else report.to_text())


def _cmd_crosstab(args, stdin, stdout, stderr) -> None:
    data = _load_data(args.data, _load_schema(args.schema), args.skip_invalid, stdin, stderr)
    table = contingency(data, args.var)
    render = {"text": table.to_text, "csv": table.to_csv, "json": table.to_json}[args.format]
    stdout.write(render())


_COMMANDS = {
    "schema": _cmd_schema,
    "gen": _cmd_gen,
    "train": _cmd_train,
    "predict": _cmd_predict,
    "rank": _cmd_rank,
    "evaluate": _cmd_evaluate,
    "crosstab": _cmd_crosstab,
}


def run(
    argv: Sequence[str],
    stdin: IO[str] | None = None,
    stdout: IO[str] | None = None,
    stderr: IO[str] | None = None,
) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            try:
                args = build_parser().parse_args(list(argv))
            except SystemExit as exc:  # --help
                return int(exc.code or 0)
        _COMMANDS[args.command](args, stdin, stdout, stderr)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_VALIDATION
    except (FormatError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_IO
    except NBGradeError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
