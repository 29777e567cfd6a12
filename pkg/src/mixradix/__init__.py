"""Mixed-radix compilation of qubit circuits onto ququart-capable hardware."""

from .circuit import Circuit, Gate, parse_circuit, emit_circuit
from .pipeline import CompileResult, CompressionPlan, Context, StrategyConfig, compile_circuit

__all__ = [
    "Circuit", "Gate", "parse_circuit", "emit_circuit",
    "CompileResult", "CompressionPlan", "Context", "StrategyConfig", "compile_circuit",
]
__version__ = "0.1.0"
