"""
laurent-lab: numerical toolkit for Laurent operators on weighted
rearrangement-invariant sequence spaces.
"""

__version__ = "1.0.0"
