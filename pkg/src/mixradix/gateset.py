"""Physical gate library for mixed qubit/ququart devices.

Kind names follow ``<gate><control><target>``: ``q`` is a bare qubit operand
and ``0``/``1`` the slot of an encoded ququart, e.g. ``CX0q`` has the slot-0
qubit of a ququart controlling a bare qubit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum


class Kind(str, Enum):
    X = "X"
    X0 = "X0"
    X1 = "X1"
    X01 = "X01"
    CX0 = "CX0"
    CX1 = "CX1"
    SWAPin = "SWAPin"
    ENC = "ENC"
    DEC = "DEC"
    CX2 = "CX2"
    SWAP2 = "SWAP2"
    CX0q = "CX0q"
    CX1q = "CX1q"
    CXq0 = "CXq0"
    CXq1 = "CXq1"
    SWAPq0 = "SWAPq0"
    SWAPq1 = "SWAPq1"
    CX00 = "CX00"
    CX01 = "CX01"
    CX10 = "CX10"
    CX11 = "CX11"
    SWAP00 = "SWAP00"
    SWAP01 = "SWAP01"
    SWAP11 = "SWAP11"
    SWAP4 = "SWAP4"

    def __str__(self) -> str:
        return self.value


# operand classes in emission order; 'q' bare, '0'/'1' encoded slot, 'U' whole unit
OPERAND_CLASSES: dict[Kind, tuple[str, ...]] = {
    Kind.X: ("q",), Kind.X0: ("0",), Kind.X1: ("1",), Kind.X01: ("0", "1"),
    Kind.CX0: ("0", "1"), Kind.CX1: ("1", "0"), Kind.SWAPin: ("0", "1"),
    Kind.CX2: ("q", "q"), Kind.SWAP2: ("q", "q"),
    Kind.CX0q: ("0", "q"), Kind.CX1q: ("1", "q"), Kind.CXq0: ("q", "0"), Kind.CXq1: ("q", "1"),
    Kind.SWAPq0: ("q", "0"), Kind.SWAPq1: ("q", "1"),
    Kind.CX00: ("0", "0"), Kind.CX01: ("0", "1"), Kind.CX10: ("1", "0"), Kind.CX11: ("1", "1"),
    Kind.SWAP00: ("0", "0"), Kind.SWAP01: ("0", "1"), Kind.SWAP11: ("1", "1"),
    Kind.SWAP4: ("U", "U"), Kind.ENC: ("U", "U"), Kind.DEC: ("U", "U"),
}

SINGLE_UNIT = frozenset({Kind.X, Kind.X0, Kind.X1, Kind.X01, Kind.CX0, Kind.CX1, Kind.SWAPin})
TWO_UNIT = frozenset(Kind) - SINGLE_UNIT
SWAP_KINDS = frozenset({Kind.SWAPin, Kind.SWAP2, Kind.SWAPq0, Kind.SWAPq1, Kind.SWAP00,
                        Kind.SWAP01, Kind.SWAP11, Kind.SWAP4})
CX_KINDS = frozenset(k for k in Kind if k.value.startswith("CX"))
SINGLE_QUBIT_KINDS = frozenset({Kind.X, Kind.X0, Kind.X1, Kind.X01})

# nanoseconds
DURATIONS_NS: dict[Kind, float] = {
    Kind.X: 35, Kind.X1: 66, Kind.X0: 87, Kind.X01: 86,
    Kind.CX0: 83, Kind.CX1: 84, Kind.SWAPin: 78,
    Kind.CX2: 251, Kind.SWAP2: 504,
    Kind.CX0q: 560, Kind.CX1q: 632, Kind.CXq1: 812, Kind.CXq0: 880,
    Kind.SWAPq0: 680, Kind.SWAPq1: 792, Kind.ENC: 608,
    Kind.CX00: 544, Kind.CX01: 544, Kind.CX10: 700, Kind.CX11: 700,
    Kind.SWAP00: 916, Kind.SWAP01: 892, Kind.SWAP11: 964, Kind.SWAP4: 1184,
    Kind.DEC: 608,
}

SINGLE_UNIT_FIDELITY = 0.999
TWO_UNIT_FIDELITY = 0.99

T1_QUBIT_US = 163.5


@dataclass(frozen=True)
class GateSpec:
    kind: Kind
    duration: float
    fidelity: float

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("duration must be non-negative")
        if not 0 < self.fidelity <= 1:
            raise ValueError("fidelity must lie in (0, 1]")


@dataclass(frozen=True)
class CoherenceParams:
    t1_qubit: float = T1_QUBIT_US
    t1_ququart: float = T1_QUBIT_US / 3

    def __post_init__(self):
        if self.t1_qubit <= 0 or self.t1_ququart <= 0:
            raise ValueError("T1 times must be positive")

    @classmethod
    def from_ratio(cls, t1_qubit: float = T1_QUBIT_US, ratio: float = 1 / 3) -> CoherenceParams:
        return cls(t1_qubit, t1_qubit * ratio)

    def t1(self, radix: str) -> float:
        return self.t1_ququart if radix == "ququart" else self.t1_qubit


def default_spec(kind: Kind) -> GateSpec:
    fid = SINGLE_UNIT_FIDELITY if kind in SINGLE_UNIT else TWO_UNIT_FIDELITY
    return GateSpec(kind, float(DURATIONS_NS[kind]), fid)


class GateLibrary:
    """Kind -> GateSpec table, defaulting to the built-in values."""

    def __init__(self, overrides: dict[Kind, GateSpec] | None = None):
        self._specs = {k: default_spec(k) for k in Kind}
        for k, s in (overrides or {}).items():
            self._specs[Kind(k)] = replace(s, kind=Kind(k))

    def __getitem__(self, kind: Kind) -> GateSpec:
        return self._specs[kind]

    def __iter__(self):
        return iter(self._specs.values())

    def __len__(self) -> int:
        return len(self._specs)

    def duration(self, kind: Kind) -> float:
        return self._specs[kind].duration

    def fidelity(self, kind: Kind) -> float:
        return self._specs[kind].fidelity

    @classmethod
    def from_override_text(cls, text: str) -> GateLibrary:
        overrides = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tok = line.split()
            if len(tok) != 4 or tok[0] != "gate":
                raise ValueError(f"line {lineno}: expected 'gate <kind> <duration_ns> <fidelity>'")
            try:
                kind = Kind(tok[1])
            except ValueError:
                raise ValueError(f"line {lineno}: unknown gate kind {tok[1]!r}") from None
            overrides[kind] = GateSpec(kind, float(tok[2]), float(tok[3]))
        return cls(overrides)


DEFAULT_LIBRARY = GateLibrary()


def gate_spec(kind: Kind) -> GateSpec:
    return DEFAULT_LIBRARY[Kind(kind)]


def gate_success(spec: GateSpec, operand_radix, coh: CoherenceParams) -> float:
    """F * prod_operands exp(-T / T1(radix)); T in ns, T1 in us."""
    return math.exp(log_gate_success(spec, operand_radix, coh))


def log_gate_success(spec: GateSpec, operand_radix, coh: CoherenceParams) -> float:
    radices = list(operand_radix)
    if len(radices) not in (1, 2):
        raise ValueError("gate_success takes one or two operand radices")
    t_us = spec.duration * 1e-3
    return math.log(spec.fidelity) - sum(t_us / coh.t1(r) for r in radices)
