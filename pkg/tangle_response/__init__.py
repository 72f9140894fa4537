"""
tangle-response - linear response of entanglement under W-type noise.

Closed-form decay rates for two-qubit concurrence and symmetric three-qubit
three-tangle, cross-checked against a numerical convex-roof oracle.
"""

__version__ = "1.0.0"
