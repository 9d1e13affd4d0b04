"""Command-line front end.

Exit codes: 0 success, 1 verification failed, 2 usage or parse error,
3 non-unitary input, 4 bad determinant prescription.  JSON results go to
--output (or stdout when omitted); human-readable reports go to stderr,
except for ``verify`` and ``gray`` whose report is the result itself.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import serialize
from .decompose import decompose, verify
from .errors import DimensionError, NotUnitaryError, PrescriptionError
from .gray import gray_code, gray_to_permutation
from .linalg import random_unitary
from .qgate import apply_circuit, gate_classes, synthesize_circuit, verify_circuit


def _parse_perm(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")


def _emit(doc, output: str | None) -> None:
    if output:
        serialize.dump(doc, output)
        print(f"wrote {output}", file=sys.stderr)
    else:
        import json

        json.dump(doc, sys.stdout, indent=1)
        sys.stdout.write("\n")


def _report(lines) -> None:
    for line in lines:
        print(line, file=sys.stderr)


def cmd_random(args) -> int:
    if args.d < 1:
        print("error: --d must be >= 1", file=sys.stderr)
        return 2
    u = random_unitary(args.d, args.seed)
    _emit(serialize.matrix_to_json(u), args.output)
    return 0


def cmd_gray(args) -> int:
    code = gray_code(args.qubits)
    print(",".join(code.seq))
    print(",".join(str(j) for j in gray_to_permutation(code)))
    return 0


def _resolve_perm(args, d: int) -> tuple[int, ...]:
    if args.perm is not None and args.qubits is not None:
        raise ValueError("--perm and --qubits are mutually exclusive")
    if args.qubits is not None:
        if d != 1 << args.qubits:
            raise DimensionError(f"matrix dimension {d} does not match 2^{args.qubits}")
        return gray_to_permutation(gray_code(args.qubits))
    if args.perm is not None:
        return args.perm
    return tuple(range(1, d + 1))


def cmd_decompose(args) -> int:
    u = serialize.matrix_from_json(serialize.load(args.input))
    perm = _resolve_perm(args, u.shape[0])
    mus = None
    if args.mode == "prescribed" or args.mus:
        if not args.mus:
            print("error: prescribed mode requires --mus", file=sys.stderr)
            return 2
        mus = serialize.mus_from_json(serialize.load(args.mus))
    dec = decompose(u, perm, mus=mus, tol=args.tol)
    report = verify(u, dec, tol=args.tol)
    _report(
        [
            f"d: {dec.d}  permutation: {','.join(map(str, dec.permutation))}  mode: {dec.mode}",
            f"factors: {len(dec.factors)}  non-identity: {dec.nonidentity_count}"
            f"  bound: {report.count_bound}",
            f"residual: {dec.residual:.3e}  (tol {report.residual_tol:.3e})",
            f"det product error: {report.det_product_error:.3e}",
            f"checks: {'PASS' if report.passed else 'FAIL: ' + '; '.join(report.failures())}",
        ]
    )
    _emit(serialize.decomposition_to_json(dec), args.output)
    return 0


def cmd_circuit(args) -> int:
    u = serialize.matrix_from_json(serialize.load(args.input))
    d = u.shape[0]
    n = d.bit_length() - 1
    if d < 2 or d != 1 << n:
        print(f"error: dimension {d} is not a power of two", file=sys.stderr)
        return 2
    circ = synthesize_circuit(u, n, tol=args.tol)
    classes = gate_classes(circ)
    _report(
        [
            f"qubits: {n}",
            f"gates: {len(circ.gates)}  bound: {(1 << (n - 1)) * ((1 << n) - 1)}",
            f"classes: {len(classes)}  bound: {(1 << n) - 1}",
        ]
    )
    _emit(serialize.circuit_to_json(circ), args.output)
    return 0


def cmd_verify(args) -> int:
    u = serialize.matrix_from_json(serialize.load(args.input))
    if args.factors:
        dec = serialize.decomposition_from_json(serialize.load(args.factors))
        report = verify(u, dec, tol=args.tol)
        print(f"residual: {report.residual:.3e}  (tol {report.residual_tol:.3e})")
        print(f"factors: {report.factor_count}  non-identity: {report.nonidentity_count}"
              f"  bound: {report.count_bound}")
        print(f"max factor unitarity error: {report.max_unitarity_error:.3e}")
        print(f"det product error: {report.det_product_error:.3e}")
    else:
        circ = serialize.circuit_from_json(serialize.load(args.circuit))
        report = verify_circuit(u, circ, tol=args.tol)
        print(f"residual: {report.residual:.3e}  (tol {report.residual_tol:.3e})")
        print(f"gates: {report.gate_count}  bound: {report.gate_bound}")
        print(f"classes: {report.class_count}  bound: {report.class_bound}")
        print(f"max gate unitarity error: {report.max_unitarity_error:.3e}")
    if report.passed:
        print("verification: PASS")
        return 0
    for line in report.failures():
        print(f"verification failure: {line}")
    return 1


def cmd_simulate(args) -> int:
    circ = serialize.circuit_from_json(serialize.load(args.circuit))
    state = serialize.state_from_json(serialize.load(args.state))
    in_norm = float(np.linalg.norm(state))
    if abs(in_norm - 1.0) > 1e-10:
        print(f"warning: input state norm {in_norm:.6g} is not 1; proceeding", file=sys.stderr)
    out = apply_circuit(circ, state)
    out_norm = float(np.linalg.norm(out))
    ratio = out_norm / in_norm if in_norm > 0 else float("nan")
    _report([f"input norm: {in_norm:.12g}  output norm: {out_norm:.12g}  ratio: {ratio:.12g}"])
    _emit(serialize.state_to_json(out), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twolevel",
        description="Two-level decomposition of unitary matrices and controlled-gate synthesis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("random", help="generate a seeded random unitary matrix")
    p.add_argument("--d", type=int, required=True, help="matrix dimension")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="matrix JSON path (stdout if omitted)")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("decompose", help="factor a unitary into two-level factors")
    p.add_argument("--input", required=True, help="matrix JSON path")
    p.add_argument("--output", help="decomposition JSON path (stdout if omitted)")
    p.add_argument("--perm", type=_parse_perm, help="elimination order, e.g. 1,2,4,3")
    p.add_argument("--qubits", type=int, help="use the n-qubit Gray-code ordering")
    p.add_argument("--mode", choices=("auto", "prescribed"), default="auto")
    p.add_argument("--mus", help="JSON array of [re,im] prescribed determinants")
    p.add_argument("--tol", type=float, help="unitarity/residual tolerance (default 1e-10*d)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="re-check a decomposition or circuit against its matrix")
    p.add_argument("--input", required=True, help="matrix JSON path")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--factors", help="decomposition JSON path")
    group.add_argument("--circuit", help="circuit JSON path")
    p.add_argument("--tol", type=float, help="residual tolerance (default 1e-10*d)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gray", help="print the reflected Gray code and its ordering")
    p.add_argument("--qubits", type=int, required=True)
    p.set_defaults(func=cmd_gray)

    p = sub.add_parser("circuit", help="synthesize fully controlled gates for a 2^n unitary")
    p.add_argument("--input", required=True, help="matrix JSON path")
    p.add_argument("--output", help="circuit JSON path (stdout if omitted)")
    p.add_argument("--tol", type=float, help="unitarity tolerance (default 1e-10*d)")
    p.set_defaults(func=cmd_circuit)

    p = sub.add_parser("simulate", help="apply a circuit to a state vector")
    p.add_argument("--circuit", required=True, help="circuit JSON path")
    p.add_argument("--state", required=True, help="state JSON path (array of [re,im])")
    p.add_argument("--output", help="output state JSON path (stdout if omitted)")
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except NotUnitaryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except PrescriptionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())
