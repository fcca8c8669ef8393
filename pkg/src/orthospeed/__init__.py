"""Orthogonality dynamics of two qubits dephased by an XY spin chain with DM interaction."""

__version__ = "0.1.0"
