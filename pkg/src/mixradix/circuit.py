"""Logical circuit representation, the line-oriented text format and ASAP layering."""

from __future__ import annotations

from dataclasses import dataclass, field

ARITY = {"x": 1, "h": 1, "z": 1, "rz": 1, "cx": 2, "swap": 2, "ccx": 3}
SINGLE_QUBIT = frozenset({"x", "h", "z", "rz"})
TWO_QUBIT = frozenset({"cx", "swap"})


class CircuitParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        if self.name not in ARITY:
            raise ValueError(f"unknown gate {self.name!r}")
        if len(self.qubits) != ARITY[self.name]:
            raise ValueError(f"{self.name} takes {ARITY[self.name]} operands, got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.name} operands must be distinct: {self.qubits}")
        if (self.name == "rz") != (self.angle is not None):
            raise ValueError("only rz carries an angle")

    @property
    def is_two_qubit(self) -> bool:
        return self.name in TWO_QUBIT


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.num_qubits < 0:
            raise ValueError("num_qubits must be non-negative")
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"operand {q} out of range for {self.num_qubits} qubits")

    def __len__(self) -> int:
        return len(self.gates)

    def two_qubit_gates(self) -> list[tuple[int, Gate]]:
        return [(i, g) for i, g in enumerate(self.gates) if g.is_two_qubit]


def parse_circuit(text: str) -> Circuit:
    num_qubits = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0].lower()
        if head == "qubits":
            if num_qubits is not None:
                raise CircuitParseError("duplicate qubits header", lineno)
            if len(tokens) != 2:
                raise CircuitParseError("expected 'qubits <N>'", lineno)
            num_qubits = _int(tokens[1], lineno)
            if num_qubits < 0:
                raise CircuitParseError("qubit count must be non-negative", lineno)
            continue
        if num_qubits is None:
            raise CircuitParseError("gate before 'qubits' header", lineno)
        if head not in ARITY:
            raise CircuitParseError(f"unknown gate {head!r}", lineno)
        args = tokens[1:]
        angle = None
        if head == "rz":
            if not args:
                raise CircuitParseError("rz needs an angle", lineno)
            try:
                angle = float(args[0])
            except ValueError:
                raise CircuitParseError(f"bad angle {args[0]!r}", lineno) from None
            args = args[1:]
        if len(args) != ARITY[head]:
            raise CircuitParseError(f"{head} takes {ARITY[head]} operands, got {len(args)}", lineno)
        qubits = tuple(_int(a, lineno) for a in args)
        for q in qubits:
            if not 0 <= q < num_qubits:
                raise CircuitParseError(f"operand {q} out of range", lineno)
        try:
            gates.append(Gate(head, qubits, angle))
        except ValueError as exc:
            raise CircuitParseError(str(exc), lineno) from None
    if num_qubits is None:
        raise CircuitParseError("missing 'qubits' header")
    return Circuit(num_qubits, tuple(gates))


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise CircuitParseError(f"expected integer, got {token!r}", lineno) from None


def emit_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.num_qubits}"]
    for g in c.gates:
        ops = " ".join(str(q) for q in g.qubits)
        if g.name == "rz":
            # repr round-trips a binary float exactly
            lines.append(f"rz {g.angle!r} {ops}")
        else:
            lines.append(f"{g.name} {ops}")
    return "\n".join(lines)


def dependency_predecessors(c: Circuit) -> list[list[int]]:
    """For each gate, indices of the gates that last touched each of its operands."""
    last: dict[int, int] = {}
    preds = []
    for i, g in enumerate(c.gates):
        p = sorted({last[q] for q in g.qubits if q in last})
        preds.append(p)
        for q in g.qubits:
            last[q] = i
    return preds


def asap_layers(c: Circuit) -> list[int]:
    """1-based ASAP dependency level of every gate, indexed like ``c.gates``."""
    depth = [0] * c.num_qubits
    layers = []
    for g in c.gates:
        s = 1 + max(depth[q] for q in g.qubits)
        for q in g.qubits:
            depth[q] = s
        layers.append(s)
    return layers
