"""
Fibonacci generation, radix conversion and classical arithmetic functions
"""

from fibnormal.sequence.digits import digit_string, digit_bytes, from_digits, MAX_BASE
from fibnormal.sequence.fibonacci import (
    fib_pair,
    fib_stream,
    initial_pair,
    digit_length,
    digit_length_predicted,
    counting_function,
    pisano_period,
    total_digits,
    criterion_conditions,
)
from fibnormal.sequence.arithmetic import (
    factorize,
    divisors,
    is_prime,
    sigma,
    euler_phi,
    carmichael_lambda,
    sigma_preimages,
    phi_preimages,
    lambda_witness,
    FACTOR_LIMIT,
)

__all__ = [
    "digit_string", "digit_bytes", "from_digits", "MAX_BASE",
    "fib_pair", "fib_stream", "initial_pair", "digit_length", "digit_length_predicted",
    "counting_function", "pisano_period", "total_digits", "criterion_conditions",
    "factorize", "divisors", "is_prime", "sigma", "euler_phi", "carmichael_lambda",
    "sigma_preimages", "phi_preimages", "lambda_witness", "FACTOR_LIMIT",
]
