"""Module containing the command line interface."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from functools import partial

import anyio

from dotenv import load_dotenv

from .audit import async_empirical_chi_square, check_def3, privacy_equivalence
from .encodings import Encoding, EncodingId
from .errors import EXIT_INCONSISTENT, EXIT_INVALID_INPUT, EXIT_NO_SOLUTION, EXIT_OK, ConsistencyException, InvalidArgumentsException, exit_code_handler
from .extensions import async_dot_product, async_psi_intersect
from .family import build_family
from .field import as_prime
from .params import NoSolution, binary_minimal_family, binary_minimal_family_operators, solve_local_params
from .protocol import Mode, ProtocolConfig, async_run_protocol
from .seeding import default_seed

_LOGGER = logging.getLogger(__name__)

_MAX_FAMILY_PRIME = 97
_MAX_EXHAUSTIVE_AUDIT_PRIME = 13

# label tables of the three binary encodings, inputs (a, b) in row-major order
_BINARY_LABELS = [
    [(0, 0), (0, 1), (1, 0), (1, 1)],
    [(0, 1), (1, 0), (0, 0), (1, 1)],
    [(1, 0), (0, 0), (0, 1), (1, 1)],
]


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID_INPUT)


def _print_json(body: dict) -> None:
    print(json.dumps(body, indent=2))


def _seed(args: argparse.Namespace) -> int:
    return args.seed if args.seed is not None else default_seed()


def _parse_set(text: str) -> set[int]:
    tokens = [t.strip() for t in text.split(",") if t.strip()]
    try:
        return {int(t) for t in tokens}
    except ValueError as e:
        raise InvalidArgumentsException("Set must be a comma separated list of integers.", text=text) from e


def _parse_bits(text: str) -> list[int]:
    if any(c not in "01" for c in text):
        raise InvalidArgumentsException("Vector must be a string of 0 and 1.", text=text)
    return [int(c) for c in text]


def _cmd_run(args: argparse.Namespace) -> int:
    config = ProtocolConfig(args.p, Mode(args.mode), args.numeric)
    forced_id = EncodingId.parse(args.force_id, config.p) if args.force_id else None

    transcript = anyio.run(partial(async_run_protocol, args.a, args.b, config, _seed(args), forced_id))

    _print_json(transcript.as_dict())
    return EXIT_OK


def _cmd_family(args: argparse.Namespace) -> int:
    p = as_prime(args.p).p
    if p > _MAX_FAMILY_PRIME:
        raise InvalidArgumentsException("Family enumeration supports primes up to 97.", p=p)

    family = build_family(p)
    partition = family.partition()

    if args.export:
        with open(args.export, "w") as f:
            f.write(family.serialize())
        _LOGGER.debug("Exported %d members to %s", len(family), args.export)

    if args.json:
        _print_json({"p": p, "alpha": family.alpha.alpha.value, "size": len(family), "partition": partition})
    else:
        print(f"p = {p}, alpha = {family.alpha.alpha.value}")
        print(f"size = {len(family)}")
        print(f"H1 only = {partition['h1_only']}, H2 only = {partition['h2_only']}, intersection = {partition['intersection']}")

    return EXIT_OK


def _cmd_audit(args: argparse.Namespace) -> int:
    p = as_prime(args.p).p
    if p > _MAX_EXHAUSTIVE_AUDIT_PRIME:
        raise InvalidArgumentsException("Exhaustive audit supports primes up to 13.", p=p)

    family = build_family(p)
    report = check_def3(family)
    equivalent = privacy_equivalence(family)

    body = report.as_dict()
    body["privacy_equivalence"] = equivalent
    passed = report.passed and equivalent

    if args.empirical is not None:
        seed = _seed(args)
        config = ProtocolConfig(p)
        result = anyio.run(partial(async_empirical_chi_square, args.empirical, config, seed, args.product))

        body["seed"] = seed
        body["chi_square"] = result.as_dict()
        passed = passed and result.passed

    _print_json(body)
    return EXIT_OK if passed else EXIT_INCONSISTENT


def _cmd_solve(args: argparse.Namespace) -> int:
    try:
        with open(args.encoding) as f:
            encoding = Encoding.deserialize(f.read())
    except OSError as e:
        raise InvalidArgumentsException("Encoding file cannot be read.", path=args.encoding) from e

    if args.p is not None and as_prime(args.p).p != encoding.p:
        raise InvalidArgumentsException("Encoding belongs to a different field.", p=args.p, encoding_p=encoding.p)

    result = solve_local_params(encoding)

    if isinstance(result, NoSolution):
        if args.json:
            _print_json(result.as_dict())
        else:
            i, j, i2, j2 = result.witness
            print(f"no local parameters: {result.coordinate} coordinate violates the rectangle property at ({i}, {j}, {i2}, {j2})")
        return EXIT_NO_SOLUTION

    body = result.as_dict()
    if args.json:
        _print_json({"solvable": True, **body})
    else:
        for name in ["xA", "xB", "zA", "zB"]:
            print(f"{name} = {body[name]}")

    return EXIT_OK


def _cmd_psi(args: argparse.Namespace) -> int:
    seed = _seed(args)
    config = ProtocolConfig(2, Mode(args.mode))

    result = anyio.run(partial(async_psi_intersect, _parse_set(args.a), _parse_set(args.b), args.universe, config, seed))

    _print_json({"seed": seed, **result.as_dict()})
    return EXIT_OK


def _cmd_dot(args: argparse.Namespace) -> int:
    seed = _seed(args)
    config = ProtocolConfig(2, Mode(args.mode))

    result = anyio.run(partial(async_dot_product, _parse_bits(args.a), _parse_bits(args.b), config, seed))

    _print_json({"seed": seed, **result.as_dict()})
    return EXIT_OK


def _cmd_demo_binary(args: argparse.Namespace) -> int:
    operators = binary_minimal_family_operators()
    family = binary_minimal_family()

    for k, e in enumerate(family):
        if [e(a, b) for a in range(2) for b in range(2)] != _BINARY_LABELS[k]:
            raise ConsistencyException("Binary encoding does not reproduce its label table.", encoding=k + 1)

    rows = []
    for k, ((alice, bob), e) in enumerate(zip(operators, family), start=1):
        for a in range(2):
            for b in range(2):
                rows.append({
                    "encoding": k,
                    "input": [a, b],
                    "alice_op": alice[a].as_dict(),
                    "bob_op": bob[b].as_dict(),
                    "operator": f"{alice[a]} (x) {bob[b]}",
                    "label": list(e(a, b)),
                })

    if args.json:
        _print_json({"entries": rows})
        return EXIT_OK

    for k in range(1, len(family) + 1):
        print(f"encoding {k}")
        for row in rows:
            if row["encoding"] == k:
                a, b = row["input"]
                label = family[k - 1].label(a, b)
                print(f"  (a, b) = ({a}, {b}): {row['operator']:<10} -> {label}")

    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="private-product", description="Entanglement-assisted private product simulator and verifier.")
    parser.add_argument("--verbose", action="store_true", help="Log debug diagnostics to standard error.")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run one protocol instance and print its transcript.")
    run.add_argument("--p", type=int, required=True)
    run.add_argument("--a", type=int, required=True)
    run.add_argument("--b", type=int, required=True)
    run.add_argument("--seed", type=int)
    run.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.CLASSICAL.value)
    run.add_argument("--force-id", help="Use the encoding base:action:n:beta instead of sampling one.")
    run.add_argument("--numeric", action="store_true", help="Simulate amplitudes and check them against the symbolic label.")
    run.set_defaults(handler=_cmd_run)

    family = commands.add_parser("family", help="Enumerate the private product family.")
    family.add_argument("--p", type=int, required=True)
    family.add_argument("--export", metavar="PATH", help="Write the family as JSON.")
    family.add_argument("--json", action="store_true")
    family.set_defaults(handler=_cmd_family)

    audit = commands.add_parser("audit", help="Audit the family exhaustively and optionally by protocol runs.")
    audit.add_argument("--p", type=int, required=True)
    audit.add_argument("--empirical", type=int, metavar="N", help="Also run N protocol instances and apply a chi-square test.")
    audit.add_argument("--product", type=int, default=0, help="Product value the empirical runs are conditioned on.")
    audit.add_argument("--seed", type=int)
    audit.set_defaults(handler=_cmd_audit)

    solve = commands.add_parser("solve", help="Find local operators realizing an encoding.")
    solve.add_argument("--p", type=int)
    solve.add_argument("--encoding", metavar="PATH", required=True)
    solve.add_argument("--json", action="store_true")
    solve.set_defaults(handler=_cmd_solve)

    psi = commands.add_parser("psi", help="Binary private set intersection.")
    psi.add_argument("--universe", type=int, required=True)
    psi.add_argument("--a", default="")
    psi.add_argument("--b", default="")
    psi.add_argument("--seed", type=int)
    psi.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.CLASSICAL.value)
    psi.set_defaults(handler=_cmd_psi)

    dot = commands.add_parser("dot", help="Binary dot product.")
    dot.add_argument("--a", required=True)
    dot.add_argument("--b", required=True)
    dot.add_argument("--seed", type=int)
    dot.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.CLASSICAL.value)
    dot.set_defaults(handler=_cmd_dot)

    demo = commands.add_parser("demo-binary", help="Print the three binary encodings and their labels.")
    demo.add_argument("--json", action="store_true")
    demo.set_defaults(handler=_cmd_demo_binary)

    return parser


def main(argv: list[str] | None = None) -> int:
    load_dotenv()

    args = _build_parser().parse_args(argv)

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    with exit_code_handler():
        return args.handler(args)
