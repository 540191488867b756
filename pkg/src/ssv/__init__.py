"""Self-verifying logical reasoning over multiple-choice problems.

Formalizes a natural-language task into a segmented solver program, checks
the formalization against concrete instantiations with an SMT solver,
repairs failures, and answers with a verified flag.
"""

__version__ = "0.1.0"
