"""Exact Grothendieck classes of banana, melonic, and necklace graphs.

The class of the complement of a graph hypersurface is represented as an
integer polynomial in the class S of the projective line minus three
points (with T = S + 1 and L = S + 2 as alternate bases).  Subpackages:

- poly: exact integer polynomial arithmetic and basis conversion
- families: the recursive polynomial families f, g, h, b and the
  necklace / clasped-necklace closed forms
- melonic: melonic constructions, their graphs, and the recursive
  class algorithm
- graphalg: Kirchhoff polynomials and finite-field point counting
- concavity: log-concavity, ULC, ULC(m), unimodality checkers
- cli: command-line interface (entry point `melon`)
"""

from .poly import Basis, ClassPoly, IntPoly

__all__ = ["Basis", "ClassPoly", "IntPoly"]

__version__ = "0.1.0"
