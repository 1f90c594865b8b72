"""Command-line frontend: normalize, verify, matrix, selftest.

Exit codes: 0 success (verify: operators equal), 1 verify found the
operators unequal (or selftest failures), 2 any error (parse, I/O,
configuration, size caps).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import circuits, oracle, rewriting
from .boolexpr import VarPool
from .rexpr import MultiplicativeModeError, TableSizeError
from .rings import Ring, UnsupportedConstantError, ring_by_name
from .sums import PathSum


def _default_max_bits() -> int:
    env = os.environ.get("PATHSUM_MAX_BITS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"PATHSUM_MAX_BITS={env!r} is not an integer") from None
    return 20


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--ring",
        default="dyadic-cyc8",
        help="coefficient ring: int, rational, dyadic-cyc8, cyc8-field, fp:<p>",
    )
    p.add_argument("--theory", choices=("ring", "field"), default="ring")
    p.add_argument(
        "--strategy", choices=("none", "cliff", "cliff+th"), default="none",
        help="rewrite-first reduction applied before normalization",
    )
    p.add_argument("--max-bits", type=int, default=None,
                   help="variable cap for normalization (env PATHSUM_MAX_BITS)")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathsum",
        description="Exact circuit equivalence checking via sums-over-paths",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_norm = sub.add_parser("normalize", help="print the unique normal form")
    p_norm.add_argument("circuit")
    p_norm.add_argument("--plot", metavar="FILE",
                        help="also render the amplitudes to an image file")
    _add_common(p_norm)

    p_verify = sub.add_parser("verify", help="decide equivalence of two circuits")
    p_verify.add_argument("left")
    p_verify.add_argument("right")
    _add_common(p_verify)

    p_matrix = sub.add_parser("matrix", help="dump the brute-force dense matrix")
    p_matrix.add_argument("circuit")
    p_matrix.add_argument("--plot", metavar="FILE",
                          help="also render the matrix to an image file")
    _add_common(p_matrix)

    p_self = sub.add_parser("selftest", help="run the built-in check battery")
    p_self.add_argument("--quiet", action="store_true")
    return parser


def _load(path: str, ring: Ring, pool: VarPool) -> PathSum:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    circ = circuits.parse_circuit(text, ring)
    return circuits.build(circ, ring, pool)


def _config(args: argparse.Namespace) -> rewriting.EquivalenceConfig:
    max_bits = args.max_bits if args.max_bits is not None else _default_max_bits()
    return rewriting.EquivalenceConfig(
        theory=args.theory, strategy=args.strategy, max_bits=max_bits
    )


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def cmd_normalize(args: argparse.Namespace) -> int:
    ring = ring_by_name(args.ring)
    psi = _load(args.circuit, ring, VarPool())
    config = _config(args)
    nf = rewriting.normal_form_of(psi, config)
    if args.json:
        payload = nf.to_json(ring)
        payload["ring"] = ring.name
        _emit_json(payload)
    else:
        for bits, entry in nf.nonzero(ring):
            print(f"{bits}\t{ring.format(entry)}")
    if args.plot:
        from . import plotting

        plotting.render_normal_form(nf, ring, args.plot, title=args.circuit)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    ring = ring_by_name(args.ring)
    pool = VarPool()
    lhs = _load(args.left, ring, pool)
    rhs = _load(args.right, ring, pool)
    result = rewriting.equivalent(lhs, rhs, _config(args))
    if args.json:
        payload = result.to_json()
        payload["ring"] = ring.name
        payload["circuits"] = [args.left, args.right]
        _emit_json(payload)
    elif result.equal:
        print("equal")
    else:
        index, left, right = result.counterexample
        bits = format(index, f"0{result.n_bits}b")
        print(f"not-equal at {bits}: {left} != {right}")
    return 0 if result.equal else 1


def cmd_matrix(args: argparse.Namespace) -> int:
    ring = ring_by_name(args.ring)
    psi = _load(args.circuit, ring, VarPool())
    max_bits = args.max_bits if args.max_bits is not None else _default_max_bits()
    mat = oracle.dense_matrix(psi, cap=max(22, max_bits))
    if args.json:
        payload = mat.to_json(ring)
        payload["ring"] = ring.name
        _emit_json(payload)
    else:
        for row in mat.rows:
            print("\t".join(ring.format(e) for e in row))
    if args.plot:
        from . import plotting

        plotting.render_matrix(mat, ring, args.plot, title=args.circuit)
    return 0


def cmd_selftest(args: argparse.Namespace) -> int:
    from .selftest import run_selftest

    return 0 if run_selftest(verbose=not args.quiet) else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "normalize": cmd_normalize,
        "verify": cmd_verify,
        "matrix": cmd_matrix,
        "selftest": cmd_selftest,
    }
    try:
        return handlers[args.command](args)
    except (
        circuits.CircuitError,
        TableSizeError,
        MultiplicativeModeError,
        UnsupportedConstantError,
        oracle.CapExceededError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
