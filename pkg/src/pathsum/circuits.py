"""Circuit description files: one gate per line, hash comments, 0-based wires.

Fixed-arity lines look like `X 0`, `H 1`, `CX 0 1`, `CCX 0 1 2`, `CH 0 1`.
Generator lines `ZSPIDER alpha n m q1 .. qn` and `HBOX alpha n m q1 .. qn`
consume the n listed wires and splice their m output legs in at the first
consumed slot, so sums may change width mid-circuit.  The register width is
inferred from the largest wire index used.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .boolexpr import VarPool
from .rings import Ring, RingElem
from .sums import (
    GATE_BUILDERS,
    GATE_NEEDS,
    PathSum,
    compose,
    embed,
    embed_rect,
    h_box,
    identity,
    z_spider,
)


class CircuitError(ValueError):
    """A circuit file failed to parse or build; carries the line number."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class GateOp:
    name: str
    qubits: tuple[int, ...]
    param: Optional[RingElem] = None
    legs: Optional[tuple[int, int]] = None
    line: int = 0


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[GateOp, ...]


def _check_ring_support(name: str, needs: set[str], ring: Ring, line: int) -> None:
    if "omega" in needs and not ring.has_omega:
        raise CircuitError(
            line, f"gate {name} needs a primitive eighth root of unity; "
            f"ring {ring.name} has none"
        )
    if "half" in needs and not ring.has_half:
        raise CircuitError(line, f"gate {name} needs 1/2; ring {ring.name} has none")


def parse_circuit(text: str, ring: Ring) -> Circuit:
    """Parse and validate a circuit file against the chosen ring."""
    gates: list[GateOp] = []
    max_index = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        name = tokens[0].upper()
        if name in GATE_BUILDERS:
            arity = GATE_BUILDERS[name][0]
            if len(tokens) - 1 != arity:
                raise CircuitError(
                    lineno, f"{name} takes {arity} qubit indices, got {len(tokens) - 1}"
                )
            try:
                qubits = tuple(int(t) for t in tokens[1:])
            except ValueError:
                raise CircuitError(lineno, f"bad qubit index in {line!r}") from None
            _check_ring_support(name, GATE_NEEDS[name], ring, lineno)
            op = GateOp(name, qubits, line=lineno)
        elif name in ("ZSPIDER", "HBOX"):
            if len(tokens) < 4:
                raise CircuitError(lineno, f"{name} needs: param n m q1..qn")
            try:
                param = ring.parse(tokens[1])
            except Exception as exc:
                raise CircuitError(
                    lineno, f"unparsable parameter {tokens[1]!r}: {exc}"
                ) from None
            try:
                n, m = int(tokens[2]), int(tokens[3])
                qubits = tuple(int(t) for t in tokens[4:])
            except ValueError:
                raise CircuitError(lineno, f"bad integer in {line!r}") from None
            if n < 1 or m < 0:
                raise CircuitError(lineno, f"{name} in a circuit needs n >= 1, m >= 0")
            if len(qubits) != n:
                raise CircuitError(
                    lineno, f"{name} with {n} input legs needs {n} indices, "
                    f"got {len(qubits)}"
                )
            needs = set(GATE_NEEDS[name]) if name != "ZSPIDER" else (
                {"half"} if n >= 1 else set()
            )
            _check_ring_support(name, needs, ring, lineno)
            op = GateOp(name, qubits, param=param, legs=(n, m), line=lineno)
        else:
            raise CircuitError(lineno, f"unknown gate {tokens[0]!r}")
        if len(set(op.qubits)) != len(op.qubits):
            raise CircuitError(lineno, f"repeated qubit index in {line!r}")
        if any(q < 0 for q in op.qubits):
            raise CircuitError(lineno, f"negative qubit index in {line!r}")
        max_index = max(max_index, max(op.qubits, default=-1))
        gates.append(op)
    return Circuit(max(max_index + 1, 1), tuple(gates))


def build(circuit: Circuit, ring: Ring, pool: VarPool) -> PathSum:
    """Compose a circuit into one path sum, first gate applied first."""
    width = circuit.n_qubits
    acc = identity(width, ring, pool)
    for op in circuit.gates:
        try:
            if op.name in GATE_BUILDERS:
                g = GATE_BUILDERS[op.name][1](ring, pool)
                layer = embed(g, op.qubits, width)
            elif op.name == "ZSPIDER":
                g = z_spider(op.param, *op.legs, ring, pool)
                layer = embed_rect(g, op.qubits, width)
                width = width - op.legs[0] + op.legs[1]
            else:
                g = h_box(op.param, *op.legs, ring, pool)
                layer = embed_rect(g, op.qubits, width)
                width = width - op.legs[0] + op.legs[1]
        except ValueError as exc:
            raise CircuitError(op.line, str(exc)) from None
        acc = compose(layer, acc)
    return acc
