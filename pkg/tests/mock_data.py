"""Mock data for mfa tests."""
from __future__ import annotations

# x1 -> x1 + (x3x2)x1, the wild automorphism of A of rank 3
TAU_MAP = """\
# wild automorphism
kind: endomorphism
x1 -> x1 + (x3*x2)*x1
x2 -> x2
x3 -> x3
"""

TAU_CANONICAL = """\
kind: endomorphism
x1 -> x1 + ((x3*x2)*x1)
x2 -> x2
x3 -> x3
"""

TAU_INVERSE_CANONICAL = """\
kind: endomorphism
x1 -> x1 - ((x3*x2)*x1)
x2 -> x2
x3 -> x3
"""

TAU_SQUARED_CANONICAL = """\
kind: endomorphism
x1 -> x1 + 2*((x3*x2)*x1)
x2 -> x2
x3 -> x3
"""

IDENTITY_MAP = """\
kind: endomorphism
x1 -> x1
x2 -> x2
x3 -> x3
"""

ELEMENTARY_MAP = """\
kind: endomorphism
x1 -> x1 + x3*x2
x2 -> x2
x3 -> x3
"""

QUARTIC_MAP = """\
kind: endomorphism
x1 -> x1 + ((x3*x2)*x1)*x1
x2 -> x2
x3 -> x3
"""

# Rank 2: (x1 + x2x1, x2) has no exact inverse
RANK2_MAP = """\
kind: endomorphism
x1 -> x1 + x2*x1
x2 -> x2
"""

NOT_IA_MAP = """\
kind: endomorphism
x1 -> 2*x1
x2 -> x2
x3 -> x3
"""

TANGENT_SIGMA_MAP = """\
kind: derivation
x1 -> (x3*x2)*x1
x2 -> 0
x3 -> 0
"""

TANGENT_SIGMA_CANONICAL = """\
kind: derivation
x1 -> ((x3*x2)*x1)
x2 -> 0
x3 -> 0
"""

MISSING_ROW_MAP = """\
kind: endomorphism
x1 -> x1
x3 -> x3
"""

DUPLICATE_ROW_MAP = """\
kind: endomorphism
x1 -> x1
x2 -> x2
x2 -> x2 + x3*x1
x3 -> x3
"""

BAD_HEADER_MAP = """\
kind: automorphism
x1 -> x1
x2 -> x2
x3 -> x3
"""

NO_HEADER_MAP = """\
x1 -> x1
x2 -> x2
x3 -> x3
"""

# x7 sits on line 3, column 12
BAD_VARIABLE_MAP = """\
kind: endomorphism
x1 -> x1
x2 -> x2 + x7
x3 -> x3
"""

SIGMA_DIVERGENCE = "-[R[(x3*x2)]]"
CHEIN_WITNESS = "-z2"

JACOBIAN_TAU = """\
[1, 0, 0]
[-z3*z1, 1, 0]
[z2*z1, 0, 1]"""

DIMENSIONS_B_RANK_3 = {1: 3, 2: 3, 3: 9, 4: 30, 5: 117}
