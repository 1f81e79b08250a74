"""Topological classes of Hamiltonian flows on the sphere and the disk."""

__version__ = "0.1.0"
