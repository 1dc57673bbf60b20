"""Homology of finite topological spaces with coefficients in diagrams.

Submodules: ``algebra`` (exact linear algebra over Z, Q and F_p), ``finspace``
(finite preorders as Alexandroff spaces), ``diagrams`` (functors, sheaves and
precosheaves), ``bar`` (bar complexes and higher limits), ``nerve`` (order
complexes, Čech complexes and Mayer–Vietoris), ``tower`` (pro-homology
towers), ``spectral`` (bicomplexes and their spectral sequences) and ``cli``.
"""

__version__ = "0.1.0"
