"""Command line entry point: ``olmap -m mapping.ttl -o output.xml``."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import __version__
from .engine import ExecutionConfig, PairingMode, execute
from .errors import OlmapError, UsageError
from .mapping import DEFAULT_NAMESPACE, MappingVocabulary
from .rdf.terms import is_absolute_iri

TIMEOUT_ENV = "MAPPER_ENDPOINT_TIMEOUT"
DEFAULT_TIMEOUT = 30.0

EXIT_OK = 0
EXIT_USAGE = 1


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(
        prog="olmap",
        description="Map RDF data into a new or existing XML document using a mapping document.",
    )
    p.add_argument("-m", "--mapping", metavar="PATH", help="mapping document (Turtle)")
    p.add_argument("-o", "--output", metavar="PATH",
                   help="XML document to create or update")
    p.add_argument("--pretty", action="store_true", help="indent element-only content")
    p.add_argument("--pairing", choices=["cartesian", "row"], default="cartesian",
                   help="insert every snippet into every container (cartesian, default) "
                        "or each row's snippet into its own containers (row)")
    strictness = p.add_mutually_exclusive_group()
    strictness.add_argument("--strict", dest="strict", action="store_true", default=True,
                            help="unbound template variables are errors (default)")
    strictness.add_argument("--lenient", dest="strict", action="store_false",
                            help="unbound template variables become empty strings")
    p.add_argument("--dry-run", action="store_true",
                   help="print the resulting XML to stdout and write nothing")
    p.add_argument("--vocab-ns", metavar="IRI", default=DEFAULT_NAMESPACE,
                   help=f"namespace of the mapping vocabulary (default {DEFAULT_NAMESPACE})")
    p.add_argument("--endpoint-timeout", metavar="SECONDS", type=float, default=None,
                   help=f"SPARQL endpoint timeout (default ${TIMEOUT_ENV} or {DEFAULT_TIMEOUT:g})")
    p.add_argument("-v", "--verbose", action="store_true", help="trace every row substitution")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def _timeout(args) -> float:
    value = args.endpoint_timeout
    if value is None:
        env = os.environ.get(TIMEOUT_ENV)
        if env is None:
            return DEFAULT_TIMEOUT
        try:
            value = float(env)
        except ValueError:
            raise UsageError(f"{TIMEOUT_ENV} is not a number: {env!r}") from None
    if not value > 0:
        raise UsageError("endpoint timeout must be positive")
    return value


def _config(args) -> ExecutionConfig:
    if not args.mapping:
        raise UsageError("the -m/--mapping argument is required")
    if not args.output and not args.dry_run:
        raise UsageError("the -o/--output argument is required unless --dry-run is given")
    if not is_absolute_iri(args.vocab_ns):
        raise UsageError(f"--vocab-ns is not an absolute IRI: {args.vocab_ns!r}")
    return ExecutionConfig(
        mapping_path=args.mapping,
        output_path=args.output,
        pairing=PairingMode(args.pairing),
        strict=args.strict,
        pretty=args.pretty,
        vocabulary=MappingVocabulary(args.vocab_ns),
        endpoint_timeout=_timeout(args),
        dry_run=args.dry_run,
    )


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    if not argv:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
        config = _config(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"olmap: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    logger = logging.getLogger("olmap")
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    logger.addHandler(handler)
    previous = logger.level
    logger.setLevel(logging.DEBUG if args.verbose else logging.WARNING)
    try:
        report = execute(config)
    except OlmapError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    finally:
        logger.removeHandler(handler)
        logger.setLevel(previous)

    for dm in report.datamaps:
        print(dm.summary(), file=sys.stderr)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if config.dry_run:
        sys.stdout.write(report.document)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
