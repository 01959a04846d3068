"""
Big-integer backend selection.

Fibonacci values are held in MPZ, which is gmpy2.mpz when gmpy2 is
importable and plain int otherwise. gmpy2 brings GMP's subquadratic
multiplication and radix conversion, which the streaming runs lean on.
Set FIBNORMAL_NOGMPY to force the pure-Python backend.
"""

import os

gmpy = None
BACKEND = 'python'
MPZ = int

if 'FIBNORMAL_NOGMPY' not in os.environ:
    try:
        import gmpy2 as gmpy
        BACKEND = 'gmpy'
        MPZ = gmpy.mpz
    except ImportError:
        gmpy = None

MPZ_ZERO = MPZ(0)
MPZ_ONE = MPZ(1)

# Largest radix gmpy2's mpz.digits() accepts
GMPY_MAX_BASE = 62
