"""Numeric tolerances used by every floating-point check in the package.

Exact (rational) code paths never consult these.
"""

# Operator-level invariants: idempotence, unit spectrum, eigenvalue floors.
OPERATOR_ATOL = 1e-10

# Scalar bookkeeping: traces, Hermiticity residues, probability sums.
TRACE_ATOL = 1e-12
