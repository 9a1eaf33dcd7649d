"""Simulation and analysis of the two-photon six-qubit hyperentangled cluster state."""

__version__ = "0.1.0"
