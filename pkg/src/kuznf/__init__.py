"""Computable ingredients of a Kuznetsov-type sum formula over Q and quadratic fields.

Subpackages and modules:

- ``numberfield``: exact field/ideal arithmetic, units, narrow classes
- ``kloosterman``: generalized Kloosterman sums with the classical oracle
- ``specialfun``: complex-order Bessel functions, Whittaker functions,
  SU(2) matrix coefficients, the Bessel kernels of the sum formula
- ``jacquet``: Jacquet integral, Goodman-Wallach operator, complex
  Whittaker normalization and the lambda factors
- ``spectral``: spectral measure, admissible weight family, Bessel transform
- ``formula``: assembly of the geometric and spectral sides
- ``ingest``: coefficient dataset loading and remote fetch
- ``cli``: the ``kuznf`` command-line entry point
"""

__version__ = "0.1.0"
