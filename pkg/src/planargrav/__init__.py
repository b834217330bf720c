"""Combinatorial and stochastic machinery of planar pure 2D gravity.

Subpackages cover: half-edge rooted maps and their moves (``map_core``),
exact enumeration (``enumeration``), the algebraic generating-function
analysis (``gf_algebraic``), boundary-growth dynamics
(``boundary_dynamics``), the quadratic measure process
(``nonlinear_process``), the tree bijection (``tree_codec``), bulk
re-triangulation dynamics (``internal_dynamics``), and one-dimensional
gravity (``one_dim``).
"""

__version__ = "0.1.0"
