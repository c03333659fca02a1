"""Simulated energy spectroscopy of a particle in a finite square well.

The package splits into a numeric core (statevec, grid, qft, evolution,
phaseest, oracle), a service layer exposing the pipelines over HTTP
(schemas, pipelines, server), and a thin command-line client (cli).
"""

__version__ = "0.1.0"
