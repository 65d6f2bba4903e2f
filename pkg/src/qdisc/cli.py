"""Command-line entry point.

    qdisc disc-fourier benchmark EXPERIMENT BACKEND [--output PATH] [--workers N]
    qdisc disc-fourier status INTERMEDIATE
    qdisc disc-fourier resolve INTERMEDIATE OUTPUT [--workers N]
    qdisc disc-fourier tabulate RESULTS CSV

Exit status: 0 on success, 1 on validation errors, 2 on I/O errors.
"""
from __future__ import annotations

import argparse
import logging
import sys

import pydantic
import yaml

from . import workflow
from .config import BackendConfig, ExperimentConfig, IntermediateDocument, ResultDocument
from .errors import QdiscError

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


def _write(text: str, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load(model, path):
    return model.model_validate(workflow.load_yaml(path))


def cmd_benchmark(args):
    experiment = _load(ExperimentConfig, args.experiment)
    backend = _load(BackendConfig, args.backend)
    doc = workflow.benchmark(experiment, backend, workers=args.workers)
    _write(workflow.dump_yaml(doc), args.output)


def _intermediate(path) -> IntermediateDocument:
    doc = workflow.read_document(path)
    if not isinstance(doc, IntermediateDocument):
        raise QdiscError(f"{path} holds resolved results, not submitted jobs")
    return doc


def cmd_status(args):
    counts = workflow.job_statuses(_intermediate(args.intermediate))
    sys.stdout.write(yaml.safe_dump(counts, default_flow_style=True))


def cmd_resolve(args):
    doc = workflow.read_document(args.intermediate)
    if isinstance(doc, IntermediateDocument):
        doc = workflow.resolve(doc, workers=args.workers)
    _write(workflow.dump_yaml(doc), args.output)


def cmd_tabulate(args):
    doc = workflow.read_document(args.results)
    if not isinstance(doc, ResultDocument):
        raise QdiscError(f"{args.results} holds unresolved jobs; run resolve first")
    _write(workflow.format_csv(workflow.tabulate(doc)), args.csv)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdisc", description=__doc__.split("\n")[0] if __doc__ else None)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    kinds = parser.add_subparsers(dest="benchmark_type", required=True)
    fourier = kinds.add_parser("disc-fourier", help="discrimination of the Fourier family of measurements")
    cmds = fourier.add_subparsers(dest="command", required=True)

    p = cmds.add_parser("benchmark", help="run or submit a benchmark")
    p.add_argument("experiment")
    p.add_argument("backend")
    p.add_argument("--output", default=None, help="write here instead of stdout")
    p.add_argument("--workers", type=int, default=1, help="parallel circuit executions")
    p.set_defaults(func=cmd_benchmark)

    p = cmds.add_parser("status", help="histogram of job statuses for submitted experiments")
    p.add_argument("intermediate")
    p.set_defaults(func=cmd_status)

    p = cmds.add_parser("resolve", help="run pending jobs and write the result file")
    p.add_argument("intermediate")
    p.add_argument("output")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_resolve)

    p = cmds.add_parser("tabulate", help="summarize results as CSV")
    p.add_argument("results")
    p.add_argument("csv")
    p.set_defaults(func=cmd_tabulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except (pydantic.ValidationError, QdiscError, ValueError, yaml.YAMLError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
