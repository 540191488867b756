"""Bundled finite-domain SMT solver, spoken to over SMT-LIB 2 stdio.

Run as ``python -m ssv.smtfd``; this is the default solver command when no
external solver is configured. It decides the fragment the program compiler
emits (enum datatypes, booleans, bounded sums) and answers ``unknown``
conservatively outside it.
"""

from .bitblast import Blaster, Unsupported
from .cdcl import SatSolver
