"""Command line front end for mfa."""
from __future__ import annotations

import argparse
import functools
import json
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any, NoReturn, TextIO

import dacite
import voluptuous as vol

from .common.anticomm import (
    BDerivation,
    BEndomorphism,
    b_apply_endo,
    b_compose,
    b_jacobian,
    b_mul,
    derivation_jacobian,
    divergence,
    enumerate_basis,
    format_monomial,
    fox_b,
    ie_level,
    lift_to_free,
    quotient_to_A,
    tangent,
)
from .common.endomorphism import (
    AEndomorphism,
    Exact,
    InversionResult,
    apply_endo,
    chein,
    compose,
    ia_level,
    invert_ia,
    jacobian,
    rank2_rigidity_search,
)
from .common.field import FieldSpec
from .common.metabelian import a_mul, basis_monomial, basis_monomials, fox
from .const import (
    ALGEBRA_FREE,
    ALGEBRA_METABELIAN,
    ALGEBRAS,
    BUILTIN_SIGMA,
    BUILTIN_TAU,
    BUILTINS,
    CONF_ALGEBRA,
    CONF_FIELD,
    CONF_FORMAT,
    CONF_MAX_DEGREE,
    CONF_RANK,
    CONF_SEED,
    CONF_VERBOSE,
    DEFAULT_ALGEBRA,
    DEFAULT_FIELD,
    DEFAULT_FORMAT,
    DEFAULT_MAX_DEGREE,
    DEFAULT_RANK,
    DEFAULT_SEED,
    DOMAIN,
    EXIT_NEGATIVE,
    EXIT_OK,
    EXIT_USAGE,
    FORMAT_JSON,
    FORMATS,
    KIND_ENDOMORPHISM,
)
from .exceptions import ConfigError, MfaException, NotChein, NotIA, UsageError
from .mfa_typing import CertificatePayload, ErrorPayload, InversionPayload, RigidityPayload
from .textio import map_kind, parse_element, parse_map, print_canonical
from .utils import set_nested_dict, translate
from .wildness import WildnessCertificate, builtin_sigma, builtin_tau, certify_absolutely_wild

_LOGGER = logging.getLogger(__name__)

# Mathematical negatives exit with 1, every other kernel error with 2.
NEGATIVE_ERRORS = (NotChein, NotIA)


def _valid_field(value: Any) -> str:
    try:
        return str(FieldSpec.parse(str(value)))
    except MfaException as err:
        raise vol.Invalid(translate(f"error:{err.code}", **err.placeholders)) from err


CONFIG_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_RANK, default=DEFAULT_RANK): vol.All(vol.Coerce(int), vol.Range(min=1)),
        vol.Required(CONF_FIELD, default=DEFAULT_FIELD): _valid_field,
        vol.Required(CONF_ALGEBRA, default=DEFAULT_ALGEBRA): vol.In(ALGEBRAS),
        vol.Required(CONF_MAX_DEGREE, default=DEFAULT_MAX_DEGREE): vol.All(vol.Coerce(int), vol.Range(min=2)),
        vol.Required(CONF_SEED, default=DEFAULT_SEED): vol.Coerce(int),
        vol.Required(CONF_FORMAT, default=DEFAULT_FORMAT): vol.In(FORMATS),
        vol.Required(CONF_VERBOSE, default=False): bool,
    },
    extra=vol.REMOVE_EXTRA,
)


@dataclass
class CliConfig:
    """Validated global options."""

    rank: int
    field: FieldSpec
    algebra: str
    max_degree: int
    seed: int
    format: str
    verbose: bool = False


def build_config(options: dict[str, Any]) -> CliConfig:
    """Validate raw options and build the config; raises ConfigError."""
    try:
        data = CONFIG_SCHEMA(options)
    except vol.Invalid as err:
        raise ConfigError(reason=str(err)) from err
    return dacite.from_dict(
        data_class=CliConfig,
        data=data,
        config=dacite.Config(type_hooks={FieldSpec: FieldSpec.parse}),
    )


@dataclass
class Outcome:
    """What a command prints and how it exits."""

    code: int
    text: str
    payload: dict[str, Any]


def _global_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    parent.add_argument("--rank", dest=CONF_RANK, help=f"number of variables (default {DEFAULT_RANK})")
    parent.add_argument("--field", dest=CONF_FIELD, help="q or gf:P")
    parent.add_argument("--algebra", dest=CONF_ALGEBRA, help="metabelian or free")
    parent.add_argument("--max-degree", dest=CONF_MAX_DEGREE, help="truncation degree")
    parent.add_argument("--seed", dest=CONF_SEED, help="seed for randomized searches")
    parent.add_argument("--format", dest=CONF_FORMAT, help="human or json")
    parent.add_argument("-v", "--verbose", dest=CONF_VERBOSE, action="store_true", help="debug logging")
    return parent


class _ArgumentParser(argparse.ArgumentParser):
    """Raises UsageError instead of exiting; help goes to ``stream``."""

    def __init__(self, *args: Any, stream: TextIO | None = None, **kwargs: Any) -> None:
        """Initialize with the stream that receives help and usage text."""
        super().__init__(*args, **kwargs)
        self.stream = stream

    def _print_message(self, message: str, file: TextIO | None = None) -> None:
        if message:
            (self.stream or file or sys.stdout).write(message)

    def error(self, message: str) -> NoReturn:
        """Report a parse failure as a kernel error."""
        raise UsageError(reason=f"{self.prog}: {message}")


def build_parser(stream: TextIO | None = None) -> argparse.ArgumentParser:
    """Argument parser with one subcommand per kernel operation."""
    parent = _global_flags()
    parser = _ArgumentParser(prog=DOMAIN, parents=[parent], argument_default=argparse.SUPPRESS, stream=stream)
    commands = parser.add_subparsers(
        dest="command", required=True, parser_class=functools.partial(_ArgumentParser, stream=stream)
    )

    def add(name: str, handler: Callable[[CliConfig, argparse.Namespace], Outcome], help_text: str):
        command = commands.add_parser(name, parents=[parent], help=help_text, argument_default=argparse.SUPPRESS)
        command.set_defaults(handler=handler)
        return command

    add("normalize", _normalize, "print an element in canonical form").add_argument("expr")
    mul = add("mul", _mul, "multiply two elements")
    mul.add_argument("left")
    mul.add_argument("right")
    add("fox", _fox, "Fox derivatives of an element").add_argument("expr")
    add("basis", _basis, "basis monomials of one degree").add_argument("--degree", type=int, required=True)
    add("jacobian", _jacobian, "Jacobian matrix of a map").add_argument("file")
    compose_command = add("compose", _compose, "compose two endomorphisms")
    compose_command.add_argument("first")
    compose_command.add_argument("second")
    apply_command = add("apply", _apply, "apply an endomorphism to an element")
    apply_command.add_argument("file")
    apply_command.add_argument("expr")
    add("invert", _invert, "invert an IA-endomorphism of A").add_argument("file")
    chein_command = add("chein-check", _chein_check, "decide whether x_i -> x_i + f is an automorphism")
    chein_command.add_argument("-f", dest="expr", required=True)
    chein_command.add_argument("--position", type=int, default=1)
    add("ia-level", _ia_level, "IA filtration level of an endomorphism of A").add_argument("file")
    add("ie-level", _ie_level, "IE filtration level of an endomorphism of B").add_argument("file")
    add("tangent", _tangent, "tangent derivation of an endomorphism of B").add_argument("file")
    add("divergence", _divergence, "divergence of a derivation of B").add_argument("file")
    add("quotient", _quotient, "induced endomorphism of A").add_argument("file")
    wild = add("wild-cert", _wild_cert, "certify absolute wildness")
    target = wild.add_mutually_exclusive_group(required=True)
    target.add_argument("file", nargs="?")
    target.add_argument("--builtin", choices=BUILTINS)
    search = add("rank2-search", _rank2_search, "search for nonlinear rank 2 automorphisms")
    search.add_argument("--degree", type=int, required=True)
    search.add_argument("--samples", type=int, required=True)
    return parser


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _element(config: CliConfig, text: str, algebra: str | None = None):
    return parse_element(text, config.rank, algebra or config.algebra, config.field)


def _map(config: CliConfig, path: str, algebra: str | None = None, kind: str | None = None):
    return parse_map(_read(path), config.rank, algebra or config.algebra, config.field, kind)


def _free_map(config: CliConfig, path: str) -> BEndomorphism | BDerivation:
    text = _read(path)
    return parse_map(text, config.rank, ALGEBRA_FREE, config.field, map_kind(text))


def _value(value: Any, key: str = "value") -> Outcome:
    text = print_canonical(value)
    return Outcome(EXIT_OK, text, {key: text})


def _normalize(config: CliConfig, args: argparse.Namespace) -> Outcome:
    return _value(_element(config, args.expr))


def _mul(config: CliConfig, args: argparse.Namespace) -> Outcome:
    left = _element(config, args.left)
    right = _element(config, args.right)
    return _value(a_mul(left, right) if config.algebra == ALGEBRA_METABELIAN else b_mul(left, right))


def _fox(config: CliConfig, args: argparse.Namespace) -> Outcome:
    element = _element(config, args.expr)
    columns = fox(element) if config.algebra == ALGEBRA_METABELIAN else fox_b(element)
    rendered = [print_canonical(column) for column in columns]
    text = "\n".join(f"∂/∂x{i} = {column}" for i, column in enumerate(rendered, start=1))
    return Outcome(EXIT_OK, text, {"fox": rendered})


def _basis(config: CliConfig, args: argparse.Namespace) -> Outcome:
    n = config.rank
    if config.algebra == ALGEBRA_FREE:
        monomials = [format_monomial(u) for u in enumerate_basis(n, args.degree)]
    elif args.degree == 1:
        monomials = [f"x{i}" for i in range(1, n + 1)]
    else:
        monomials = [
            print_canonical(basis_monomial(i, j, word, n, config.field))
            for i, j, word in basis_monomials(n, args.degree)
        ]
    text = "\n".join([*monomials, f"count: {len(monomials)}"])
    return Outcome(EXIT_OK, text, {"count": len(monomials), "monomials": monomials})


def _jacobian(config: CliConfig, args: argparse.Namespace) -> Outcome:
    value = _map(config, args.file)
    if isinstance(value, BDerivation):
        matrix = derivation_jacobian(value)
    elif isinstance(value, BEndomorphism):
        matrix = b_jacobian(value)
    else:
        matrix = jacobian(value)
    rows = [[print_canonical(entry) for entry in row] for row in matrix.rows]
    return Outcome(EXIT_OK, print_canonical(matrix), {"jacobian": rows})


def _compose(config: CliConfig, args: argparse.Namespace) -> Outcome:
    first = _map(config, args.first, kind=KIND_ENDOMORPHISM)
    second = _map(config, args.second, kind=KIND_ENDOMORPHISM)
    if isinstance(first, BEndomorphism):
        return _value(b_compose(first, second), "map")
    return _value(compose(first, second), "map")


def _apply(config: CliConfig, args: argparse.Namespace) -> Outcome:
    endomorphism = _map(config, args.file, kind=KIND_ENDOMORPHISM)
    element = _element(config, args.expr)
    if isinstance(endomorphism, BEndomorphism):
        return _value(b_apply_endo(endomorphism, element))
    return _value(apply_endo(endomorphism, element))


def _inversion_payload(result: InversionResult) -> InversionPayload:
    if isinstance(result, Exact):
        return {"status": "exact", "map": print_canonical(result.inverse), "verified_degree": None}
    return {"status": "truncated", "map": print_canonical(result.partial), "verified_degree": result.verified_degree}


def _invert(config: CliConfig, args: argparse.Namespace) -> Outcome:
    endomorphism = _map(config, args.file, ALGEBRA_METABELIAN, KIND_ENDOMORPHISM)
    result = invert_ia(endomorphism, config.max_degree)
    payload = _inversion_payload(result)
    if isinstance(result, Exact):
        return Outcome(EXIT_OK, "exact\n" + payload["map"].rstrip("\n"), {"inversion": payload})
    text = f"truncated, verified through degree {result.verified_degree}\n" + payload["map"].rstrip("\n")
    return Outcome(EXIT_NEGATIVE, text, {"inversion": payload})


def _chein_check(config: CliConfig, args: argparse.Namespace) -> Outcome:
    f = _element(config, args.expr, ALGEBRA_METABELIAN)
    delta = chein(f, config.rank, args.position)
    text = print_canonical(delta)
    return Outcome(EXIT_OK, "accepted\n" + text.rstrip("\n"), {"accepted": True, "map": text})


def _ia_level(config: CliConfig, args: argparse.Namespace) -> Outcome:
    endomorphism = _map(config, args.file, ALGEBRA_METABELIAN, KIND_ENDOMORPHISM)
    level = ia_level(endomorphism, config.max_degree)
    return Outcome(EXIT_OK, str(level), {"level": level.level, "at_least": level.at_least})


def _ie_level(config: CliConfig, args: argparse.Namespace) -> Outcome:
    endomorphism = _map(config, args.file, ALGEBRA_FREE, KIND_ENDOMORPHISM)
    level = ie_level(endomorphism, config.max_degree)
    return Outcome(EXIT_OK, str(level), {"level": level.level, "at_least": level.at_least})


def _tangent(config: CliConfig, args: argparse.Namespace) -> Outcome:
    return _value(tangent(_map(config, args.file, ALGEBRA_FREE, KIND_ENDOMORPHISM)), "derivation")


def _divergence(config: CliConfig, args: argparse.Namespace) -> Outcome:
    value = _free_map(config, args.file)
    derivation = value if isinstance(value, BDerivation) else tangent(value)
    return _value(divergence(derivation), "divergence")


def _quotient(config: CliConfig, args: argparse.Namespace) -> Outcome:
    return _value(quotient_to_A(_map(config, args.file, ALGEBRA_FREE, KIND_ENDOMORPHISM)), "map")


def _verdict_label(certificate: WildnessCertificate) -> str:
    label = translate(f"verdict:{certificate.verdict}")
    if certificate.reason is None:
        return label
    return f"{label}({translate(f'verdict:{certificate.reason}', degree=certificate.reason_degree)})"


def certificate_payload(certificate: WildnessCertificate) -> CertificatePayload:
    """Every certificate field, as text or plain values."""
    payload: dict[str, Any] = {}
    set_nested_dict(payload, "verdict", _verdict_label(certificate))
    set_nested_dict(payload, "reason", certificate.reason)
    set_nested_dict(payload, "reason_degree", certificate.reason_degree)
    set_nested_dict(payload, "ie_level", certificate.ie_level)
    set_nested_dict(payload, "ideal_min_degree", certificate.ideal_min_degree)
    set_nested_dict(payload, "degree_check", certificate.degree_check)
    set_nested_dict(payload, "tangent", print_canonical(certificate.tangent))
    set_nested_dict(payload, "divergence", print_canonical(certificate.divergence_value))
    evidence = certificate.automorphism_evidence
    set_nested_dict(payload, "automorphism_evidence", None if evidence is None else _inversion_payload(evidence))
    set_nested_dict(payload, "jacobian_verified", certificate.jacobian_verified)
    set_nested_dict(payload, "induced", print_canonical(certificate.induced))
    set_nested_dict(payload, "max_degree", certificate.max_degree)
    return payload


def _indent(text: str) -> str:
    return "\n".join(f"  {line}" for line in text.rstrip("\n").splitlines())


def _certificate_text(certificate: WildnessCertificate, payload: CertificatePayload) -> str:
    lines = [
        f"verdict: {payload['verdict']}",
        f"ie_level: {certificate.ie_level}",
        f"degree_check: {str(certificate.degree_check).lower()} "
        f"({certificate.ie_level + 1} < {certificate.ideal_min_degree})",
        "tangent:",
        _indent(payload["tangent"]),
        f"divergence: {payload['divergence']}",
        "induced:",
        _indent(payload["induced"]),
    ]
    evidence = payload["automorphism_evidence"]
    if evidence is None:
        lines.append("automorphism: not IA")
    elif evidence["status"] == "exact":
        lines.extend(["automorphism: exact inverse", _indent(evidence["map"])])
    else:
        lines.append(f"automorphism: truncated, verified through degree {evidence['verified_degree']}")
    lines.append(f"jacobian_verified: {str(certificate.jacobian_verified).lower()}")
    return "\n".join(lines)


def _wild_cert(config: CliConfig, args: argparse.Namespace) -> Outcome:
    builtin = getattr(args, "builtin", None)
    if builtin == BUILTIN_SIGMA:
        endomorphism = builtin_sigma(config.rank, config.field)
    elif builtin == BUILTIN_TAU:
        endomorphism = lift_to_free(builtin_tau(config.rank, config.field))
    else:
        endomorphism = _map(config, args.file, kind=KIND_ENDOMORPHISM)
        if isinstance(endomorphism, AEndomorphism):
            endomorphism = lift_to_free(endomorphism)
    certificate = certify_absolutely_wild(endomorphism, config.max_degree)
    payload = certificate_payload(certificate)
    code = EXIT_OK if certificate.is_absolutely_wild else EXIT_NEGATIVE
    return Outcome(code, _certificate_text(certificate, payload), {"certificate": payload})


def _rank2_search(config: CliConfig, args: argparse.Namespace) -> Outcome:
    max_degree = config.max_degree if getattr(args, CONF_MAX_DEGREE, None) is not None else None
    report = rank2_rigidity_search(args.degree, args.samples, config.seed, config.field, max_degree)
    payload: RigidityPayload = {
        "degree_bound": report.degree_bound,
        "samples": report.samples,
        "seed": report.seed,
        "max_degree": report.max_degree,
        "candidates": report.candidates,
        "counterexamples": [print_canonical(c) for c in report.counterexamples],
        "shape_violations": [print_canonical(c) for c in report.shape_violations],
        "control_exact": report.control_exact,
    }
    lines = [
        f"candidates: {report.candidates}",
        f"max_degree: {report.max_degree}",
        f"counterexamples: {len(report.counterexamples)}",
        f"shape_violations: {len(report.shape_violations)}",
        f"control_exact: {str(report.control_exact).lower()}",
    ]
    lines.extend(_indent(c) for c in payload["counterexamples"])
    clean = report.control_exact and not report.counterexamples and not report.shape_violations
    return Outcome(EXIT_OK if clean else EXIT_NEGATIVE, "\n".join(lines), {"report": payload})


def _render(value: Any) -> Any:
    if isinstance(value, (int, str)) or value is None:
        return value
    try:
        return print_canonical(value)
    except MfaException:
        return str(value)


def error_payload(err: MfaException) -> ErrorPayload:
    """Code and rendered message of a kernel error."""
    placeholders = {key: _render(value) for key, value in err.placeholders.items()}
    return {"code": err.code, "message": translate(f"error:{err.code}", **placeholders)}


def _configure_logging(verbose: bool, stream: TextIO) -> logging.Handler:
    """Attach a handler writing to ``stream``; the caller removes it when done."""
    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger = logging.getLogger(DOMAIN)
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    return handler


def _requested_format(argv: Sequence[str]) -> str:
    """--format value scanned from raw arguments, for errors raised before parsing ends."""
    requested = DEFAULT_FORMAT
    for position, argument in enumerate(argv):
        if argument == "--format" and position + 1 < len(argv):
            requested = argv[position + 1]
        elif argument.startswith("--format="):
            requested = argument.partition("=")[2]
    return requested


def _emit(stream: TextIO, config_format: str, text: str, payload: dict[str, Any]) -> None:
    if config_format == FORMAT_JSON:
        stream.write(json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        stream.write(text.rstrip("\n") + "\n")


def run(argv: Sequence[str], stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    """Run one command; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    def fail(payload: ErrorPayload, config_format: str) -> int:
        _emit(stdout if config_format == FORMAT_JSON else stderr, config_format, payload["message"], {"error": payload})
        return EXIT_USAGE

    argv = list(argv)
    parser = build_parser(stdout)
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        return fail(error_payload(err), _requested_format(argv))
    except SystemExit as err:
        return EXIT_OK if err.code == 0 else EXIT_USAGE
    options = {key: value for key, value in vars(args).items() if key not in ("handler", "command")}
    try:
        config = build_config(options)
    except ConfigError as err:
        return fail(error_payload(err), options.get(CONF_FORMAT, DEFAULT_FORMAT))
    handler = _configure_logging(config.verbose, stderr)
    try:
        _LOGGER.debug("Running %s with %s", args.command, config)
        outcome = args.handler(config, args)
    except NEGATIVE_ERRORS as err:
        payload = error_payload(err)
        _emit(stdout, config.format, payload["message"], {"error": payload})
        return EXIT_NEGATIVE
    except MfaException as err:
        return fail(error_payload(err), config.format)
    except OSError as err:
        return fail(error_payload(UsageError(reason=str(err))), config.format)
    finally:
        logging.getLogger(DOMAIN).removeHandler(handler)
    _emit(stdout, config.format, outcome.text, outcome.payload)
    return outcome.code


def main() -> None:
    """Console entry point."""
    sys.exit(run(sys.argv[1:]))
