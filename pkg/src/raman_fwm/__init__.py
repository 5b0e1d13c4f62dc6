"""Quantum-optical model of counterpropagating Raman four-wave mixing.

Submodules: ``params`` (couplings and regimes), ``scattering`` (input-output
pair), ``gaussian`` (two-mode Gaussian states), ``fock`` (truncated
Fock-space oracle), ``config``/``sweep``/``cli`` (sweeps and CSV output).
"""

__version__ = "0.1.0"
