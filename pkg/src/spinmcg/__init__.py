"""Tools for even spin mapping class groups.

Subpackages cover: quadratic forms over GF(2) and their symplectic orbits
(gf2), the integral symplectic representation of twist words (symplectic),
finitely presented group bookkeeping (fpgroups), the encoded presentation
corpus with its shorthand expander (corpus), the genus-1 spin curve graph
(torus), and a command line front end (cli).
"""

__version__ = "0.1.0"
