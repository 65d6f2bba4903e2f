"""Benchmark quantum devices by discriminating two single-qubit von Neumann measurements."""
