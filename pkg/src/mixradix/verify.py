"""Dense mixed-radix statevector simulation for checking compiled circuits.

A unit hosting two logical qubits stores them as level ``2*q0 + q1``; a unit
hosting one qubit stores it in levels 0/1. Each physical kind is simulated from
its own operand classes, independently of the router's bookkeeping, so a
misclassified or misrouted op shows up as a decoding mismatch.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate
from .gateset import OPERAND_CLASSES, Kind
from .mapper import Mapping
from .router import Layout, PhysicalOp

MAX_LOGICAL_QUBITS = 12
MAX_PHYSICAL_DIM = 4096

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


class SimulationCapError(ValueError):
    pass


def gate_matrix(g: Gate) -> np.ndarray:
    if g.name == "x":
        return _X
    if g.name == "h":
        return _H
    if g.name == "z":
        return _Z
    if g.name == "rz":
        return np.diag([np.exp(-0.5j * g.angle), np.exp(0.5j * g.angle)])
    if g.name == "cx":
        return CX
    if g.name == "swap":
        return SWAP
    raise ValueError(f"no matrix for {g.name}")


def _apply(state: np.ndarray, mat: np.ndarray, axes: list[int]) -> np.ndarray:
    k = len(axes)
    dims = [state.shape[a] for a in axes]
    m = mat.reshape(dims + dims)
    out = np.tensordot(m, state, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def simulate_logical(c: Circuit, initial) -> np.ndarray:
    """Qubit statevector after ``c``. ``initial`` is a basis index or a vector.

    Qubit 0 is the most significant bit of the basis index.
    """
    n = c.num_qubits
    if n > MAX_LOGICAL_QUBITS:
        raise SimulationCapError(f"{n} qubits exceeds the logical cap of {MAX_LOGICAL_QUBITS}")
    psi = _initial_vector(initial, 2 ** n).reshape([2] * n if n else [1])
    for g in c.gates:
        if g.name == "ccx":
            ccx = np.eye(8, dtype=complex)
            ccx[[6, 7]] = ccx[[7, 6]]
            psi = _apply(psi, ccx, list(g.qubits))
        else:
            psi = _apply(psi, gate_matrix(g), list(g.qubits))
    return psi.reshape(-1)


def _initial_vector(initial, size: int) -> np.ndarray:
    if isinstance(initial, (int, np.integer)):
        v = np.zeros(size, dtype=complex)
        v[initial] = 1.0
        return v
    v = np.asarray(initial, dtype=complex).reshape(-1)
    if v.size != size:
        raise ValueError("initial vector has the wrong size")
    return v.copy()


# --- local operators -------------------------------------------------------------------

def _bit_of(level: int, cls: str, dim: int):
    if cls == "q":
        return level if level < 2 else None
    if dim != 4:
        raise AssertionError("encoded operand on a two-level unit")
    return (level >> 1) if cls == "0" else (level & 1)


def _set_bit(level: int, cls: str, bit: int) -> int:
    if cls == "q":
        return bit
    if cls == "0":
        return (bit << 1) | (level & 1)
    return (level & 2) | bit


def unitary_for(op: PhysicalOp, dims: dict[int, int]) -> tuple[np.ndarray, list[int]]:
    """Local unitary of ``op`` over its units (in ``op.units`` order)."""
    units = list(op.units)
    ldims = [dims[u] for u in units]
    size = int(np.prod(ldims))
    kind = op.kind
    basis = list(itertools.product(*[range(d) for d in ldims]))
    index = {b: i for i, b in enumerate(basis)}
    M = np.zeros((size, size), dtype=complex)

    if kind == Kind.SWAP4:
        if ldims != [4, 4]:
            raise AssertionError("SWAP4 between units that are not both four-level")
        for b in basis:
            M[index[(b[1], b[0])], index[b]] = 1
        return M, units
    if kind in (Kind.ENC, Kind.DEC):
        if ldims[0] != 4:
            raise AssertionError("ENC/DEC host unit must be four-level")
        valid = [(a, r) for a in range(2) for r in range(2)]
        image = {(a, r): (2 * a + r, 0) for a, r in valid}
        rest_in = [b for b in basis if b not in image]
        rest_out = [b for b in basis if b not in set(image.values())]
        image.update(zip(rest_in, rest_out))
        for b, o in image.items():
            M[index[o], index[b]] = 1
        return (M if kind == Kind.ENC else M.T.copy()), units

    classes = OPERAND_CLASSES[kind]
    where = [units.index(s.unit) for s in op.slots]
    if kind in (Kind.X, Kind.X0, Kind.X1):
        U = gate_matrix(op.gates[0])
    elif kind == Kind.X01:
        U = np.kron(gate_matrix(op.gates[0]), gate_matrix(op.gates[1]))
    elif kind.value.startswith("CX"):
        U = CX
    else:
        U = SWAP
    k = len(classes)
    for b in basis:
        bits = [_bit_of(b[w], c, ldims[w]) for w, c in zip(where, classes)]
        col = index[b]
        if any(x is None for x in bits):
            M[col, col] = 1
            continue
        x = int("".join(map(str, bits)), 2)
        for y in range(2 ** k):
            amp = U[y, x]
            if amp == 0:
                continue
            ybits = [(y >> (k - 1 - t)) & 1 for t in range(k)]
            lv = list(b)
            for w, c, bit in zip(where, classes, ybits):
                lv[w] = _set_bit(lv[w], c, bit)
            M[index[tuple(lv)], col] += amp
    return M, units


# --- physical simulation ---------------------------------------------------------------

@dataclass
class MixedRadixState:
    units: list[int]
    dims: list[int]
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _ops_of(s) -> list[PhysicalOp]:
    if hasattr(s, "ops") and s.ops and hasattr(s.ops[0], "op"):
        return [o.op for o in s.ops]
    if hasattr(s, "ops"):
        return list(s.ops)
    return list(s)


def simulation_dims(ops: list[PhysicalOp], m0: Mapping) -> dict[int, int]:
    """Largest dimension each unit reaches while ``ops`` run."""
    layout = Layout(m0)
    dims = {u: (4 if c == 2 else 2) for u, c in enumerate(layout.occ) if c > 0}
    for op in ops:
        layout.apply(op)
        for u in op.units:
            d = 4 if layout.occ[u] == 2 else 2
            dims[u] = max(dims.get(u, 2), d)
    return dims


def embed(psi: np.ndarray, m: Mapping, units: list[int], dims: list[int]) -> np.ndarray:
    n = len(m)
    out = np.zeros(int(np.prod(dims)), dtype=complex)
    idx = _physical_indices(m, units, dims, n)
    out[idx] = psi
    return out


def _physical_indices(m: Mapping, units: list[int], dims: list[int], n: int) -> np.ndarray:
    """Physical basis index of every logical basis state under mapping ``m``."""
    occ = m.occupancy()
    strides = np.cumprod([1] + dims[::-1][:-1])[::-1]
    upos = {u: i for i, u in enumerate(units)}
    xs = np.arange(2 ** n)
    idx = np.zeros(2 ** n, dtype=np.int64)
    for q, s in enumerate(m.slots):
        bit = (xs >> (n - 1 - q)) & 1
        if occ[s.unit] == 2:
            weight = 2 if s.slot == 0 else 1
        else:
            weight = 1
        idx += bit * weight * strides[upos[s.unit]]
    return idx


def _resize(state: np.ndarray, axis: int, dim: int) -> tuple[np.ndarray, float]:
    """Pad a unit axis to ``dim`` levels, or truncate it and report the dropped norm."""
    cur = state.shape[axis]
    if dim == cur:
        return state, 0.0
    if dim > cur:
        pad = [(0, 0)] * state.ndim
        pad[axis] = (0, dim - cur)
        return np.pad(state, pad), 0.0
    keep = np.take(state, range(dim), axis=axis)
    lost = np.take(state, range(dim, cur), axis=axis)
    return keep, float(np.linalg.norm(lost))


def simulate_physical(s, m0: Mapping, initial) -> MixedRadixState:
    """Apply physical ops to the embedded logical state.

    A unit is four-level only while it holds two qubits; when it drops back to
    one qubit its upper levels are truncated and any amplitude there counts as
    leakage (an :class:`AssertionError` above 1e-9).
    """
    ops = _ops_of(s)
    layout = Layout(m0)
    units = sorted(simulation_dims(ops, m0))
    axis = {u: i for i, u in enumerate(units)}
    dims = [4 if layout.occ[u] == 2 else 2 for u in units]
    n = len(m0)
    psi = _initial_vector(initial, 2 ** n)
    state = embed(psi, m0, units, dims).reshape(dims)
    for op in ops:
        before = {u: layout.occ[u] for u in op.units}
        layout.apply(op)
        for u in op.units:
            if 2 in (before[u], layout.occ[u]):
                state, _ = _resize(state, axis[u], 4)
        if state.size > MAX_PHYSICAL_DIM:
            raise SimulationCapError(f"physical dimension {state.size} exceeds {MAX_PHYSICAL_DIM}")
        cur = {u: state.shape[axis[u]] for u in units}
        M, ou = unitary_for(op, cur)
        state = _apply(state, M, [axis[u] for u in ou])
        for u in op.units:
            if layout.occ[u] < 2 and state.shape[axis[u]] == 4:
                state, lost = _resize(state, axis[u], 2)
                if lost > 1e-9:
                    raise AssertionError(f"amplitude {lost:.3g} left in upper levels after {op.kind}")
    return MixedRadixState(units, list(state.shape), state.reshape(-1))


def decode(state: MixedRadixState, m: Mapping) -> np.ndarray:
    idx = _physical_indices(m, state.units, state.dims, len(m))
    return state.amplitudes[idx]


@dataclass
class Equivalence:
    equivalent: bool
    max_deviation: float


def _phase_deviation(a: np.ndarray, b: np.ndarray) -> float:
    """max |a - e^{i phi} b| with the phase fixed on b's largest amplitude."""
    k = int(np.argmax(np.abs(b)))
    if abs(b[k]) < 1e-15:
        return float(np.max(np.abs(a)))
    phase = a[k] / b[k]
    phase = phase / abs(phase) if abs(phase) > 1e-15 else 1.0
    return float(np.max(np.abs(a - phase * b)))


def check_equivalence(c: Circuit, s, m0: Mapping, mfinal: Mapping, trials: int = 4,
                      seed: int = 0, tol: float = 1e-9) -> Equivalence:
    n = c.num_qubits
    rng = np.random.default_rng(seed)
    inputs = [int(x) for x in rng.integers(0, 2 ** n, size=trials)] if n else [0] * trials
    for _ in range(2):
        v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
        inputs.append(v / np.linalg.norm(v))
    worst = 0.0
    for init in inputs:
        want = simulate_logical(c, init)
        phys = simulate_physical(s, m0, init)
        got = decode(phys, mfinal)
        leak = abs(1.0 - float(np.vdot(got, got).real))
        worst = max(worst, _phase_deviation(got, want), leak)
    return Equivalence(worst < tol, worst)
