"""
Data structures for fibnormal
"""

from typing import List, Dict, Any, Optional
from dataclasses import dataclass

from fibnormal.errors import InvalidInputError

CATEGORIES = ("leading", "trailing", "middle", "boundary")

_SYMBOLS = "0123456789abcdefghijklmnopqrstuvwxyz"


def block_label(code: int, k: int, base: int) -> str:
    """
    Render the block with integer code `code` (most significant digit first)
    as a fixed-width label, so that lexicographic order of labels is the
    numeric order of codes.

    Bases up to 36 use one symbol per digit; larger bases write each digit
    as three decimal places separated by dots.
    """
    digits = []
    for _ in range(k):
        code, d = divmod(code, base)
        digits.append(d)
    digits.reverse()
    if base <= len(_SYMBOLS):
        return "".join(_SYMBOLS[d] for d in digits)
    return ".".join(f"{d:03d}" for d in digits)


@dataclass(frozen=True)
class FibPair:
    """Consecutive Fibonacci values (F_n, F_{n+1})"""
    n: int
    f_n: Any
    f_n1: Any

    def advance(self) -> "FibPair":
        """Step the recurrence by one index"""
        return FibPair(self.n + 1, self.f_n1, self.f_n + self.f_n1)

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "f_n": str(int(self.f_n)), "f_n1": str(int(self.f_n1))}


@dataclass(frozen=True)
class DigitString:
    """
    Digits of a non-negative integer, most significant first.

    `digits` holds one byte per digit whose value is the digit itself
    (not an ASCII character), which is why bases stop at 256.
    """
    base: int
    digits: bytes

    def __post_init__(self):
        if self.base < 2:
            raise InvalidInputError(f"invalid base {self.base}: must be at least 2")
        if not self.digits:
            raise InvalidInputError("a digit string has at least one digit")
        if len(self.digits) > 1 and self.digits[0] == 0:
            raise InvalidInputError("digit string has a leading zero")
        if self.base < 256 and max(self.digits) >= self.base:
            raise InvalidInputError(f"digit out of range for base {self.base}")

    def __len__(self) -> int:
        return len(self.digits)

    @property
    def leading_digit(self) -> int:
        return self.digits[0]

    @property
    def trailing_digit(self) -> int:
        return self.digits[-1]

    def to_list(self) -> List[int]:
        return list(self.digits)

    def label(self) -> str:
        """Human-readable rendering (same symbols as block labels)"""
        if self.base <= len(_SYMBOLS):
            return "".join(_SYMBOLS[d] for d in self.digits)
        return ".".join(f"{d:03d}" for d in self.digits)


@dataclass
class FibCursor:
    """
    Exact streaming position inside the concatenation F_1 F_2 F_3 ...

    `pair` holds (F_n, F_{n+1}) for the next term to emit; `suffix_carry`
    holds the last min(k_max - 1, digits emitted) digits of the stream.
    """
    base: int
    n: int
    pair: FibPair
    pos_in_term: int = 0
    suffix_carry: bytes = b""

    @property
    def terms_done(self) -> int:
        return self.n - 1


@dataclass(frozen=True)
class BlockPosition:
    """Where a k-block starts relative to the term that holds its first digit"""
    n: int
    offset: int
    length: int
    straddle: bool = False


@dataclass
class StatReport:
    """Uniformity statistics for the k-block counts of one digit stream"""
    base: int
    k: int
    D: int
    total_blocks: int
    naive_chi2: float
    naive_df: int
    p_naive: float
    good_delta_chi2: Optional[float]
    good_df: Optional[int]
    p_good: Optional[float]
    max_abs_deviation: float
    argmax_block: str
    mean_abs_deviation: float = 0.0
    max_abs_z: float = 0.0
    bonferroni_critical: float = 0.0
    category: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": self.base,
            "k": self.k,
            "D": self.D,
            "category": self.category,
            "total_blocks": self.total_blocks,
            "naive_chi2": self.naive_chi2,
            "naive_df": self.naive_df,
            "p_naive": self.p_naive,
            "good_delta_chi2": self.good_delta_chi2,
            "good_df": self.good_df,
            "p_good": self.p_good,
            "max_abs_deviation": self.max_abs_deviation,
            "argmax_block": self.argmax_block,
            "mean_abs_deviation": self.mean_abs_deviation,
            "max_abs_z": self.max_abs_z,
            "bonferroni_critical": self.bonferroni_critical,
        }


@dataclass(frozen=True)
class RegressionFit:
    """Power-law fit dev ≈ coefficient · D^exponent"""
    coefficient: float
    exponent: float
    r_squared: float
    points: int = 0

    def predict(self, D: float) -> float:
        return self.coefficient * D ** self.exponent

    def to_dict(self) -> Dict[str, Any]:
        return {
            "coefficient": self.coefficient,
            "exponent": self.exponent,
            "r_squared": self.r_squared,
            "points": self.points,
        }


@dataclass(frozen=True)
class TermDelta:
    """Maximum k-block frequency deviation inside one Fibonacci number"""
    n: int
    digit_length: int
    k: int
    delta: float

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "digit_length": self.digit_length, "k": self.k, "delta": self.delta}


@dataclass(frozen=True)
class CensusRow:
    epsilon: float
    count: int
    fraction: float

    def to_dict(self) -> Dict[str, Any]:
        return {"epsilon": self.epsilon, "count": self.count, "fraction": self.fraction}


@dataclass(frozen=True)
class BaselineRatio:
    """Observed δ_{n,1} relative to the iid expectation, over long terms"""
    base: int
    min_length: int
    terms: int
    mean: float
    std: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": self.base,
            "min_length": self.min_length,
            "terms": self.terms,
            "mean": self.mean,
            "std": self.std,
        }


@dataclass(frozen=True)
class EvolutionRow:
    """One row of the deviation-versus-N table"""
    N: int
    D: int
    max_abs_deviation: float
    chi2: float
    p_value: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "N": self.N,
            "D": self.D,
            "max_abs_deviation": self.max_abs_deviation,
            "chi2": self.chi2,
            "p_value": self.p_value,
        }


@dataclass(frozen=True)
class CriterionCheck:
    """Growth conditions (i) and (ii) of the concatenation criterion at prefix m"""
    m: int
    base: int
    total_digits: int
    asymptotic_total: float
    max_length: int
    condition_i_ratio: float
    condition_ii_ratio: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "base": self.base,
            "total_digits": self.total_digits,
            "asymptotic_total": self.asymptotic_total,
            "max_length": self.max_length,
            "condition_i_ratio": self.condition_i_ratio,
            "condition_ii_ratio": self.condition_ii_ratio,
        }


@dataclass(frozen=True)
class RaggedColumn:
    """Column n of the row-uniform counterexample: digit n mod 10, n times"""
    n: int

    @property
    def type_digit(self) -> int:
        return self.n % 10

    @property
    def length(self) -> int:
        return self.n

    def digits(self) -> bytes:
        return bytes([self.type_digit]) * self.length


@dataclass
class CounterexampleStats:
    """Digit statistics of the concatenated ragged columns 1..N"""
    N: int
    L_N: int
    single_freqs: List[float]
    diagonal_masses: List[float]
    off_diagonal_count: int
    off_diagonal_bound: int

    @property
    def max_single_deviation(self) -> float:
        return max(abs(f - 0.1) for f in self.single_freqs)

    @property
    def max_diagonal_deviation(self) -> float:
        return max(abs(f - 0.1) for f in self.diagonal_masses)

    @property
    def frequency_bound(self) -> float:
        # O(N)/L_N with L_N = N(N+1)/2
        return 2.0 / (self.N + 1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "N": self.N,
            "L_N": self.L_N,
            "single_freqs": self.single_freqs,
            "diagonal_masses": self.diagonal_masses,
            "off_diagonal_count": self.off_diagonal_count,
            "off_diagonal_bound": self.off_diagonal_bound,
            "max_single_deviation": self.max_single_deviation,
            "max_diagonal_deviation": self.max_diagonal_deviation,
            "frequency_bound": self.frequency_bound,
        }


@dataclass(frozen=True)
class SigmaWitness:
    """Whether v is a value of the sum-of-divisors function"""
    value: int
    in_range: bool
    witness: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"value": self.value, "in_range": self.in_range, "witness": self.witness}


@dataclass(frozen=True)
class SigmaCensusRow:
    n: int
    fib: int
    witness: SigmaWitness
    index_multiple_of_6: bool
    value_multiple_of_6: bool
    exception: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "F_n": self.fib,
            "in_range": self.witness.in_range,
            "witness": self.witness.witness,
            "index_multiple_of_6": self.index_multiple_of_6,
            "multiple_of_6": self.value_multiple_of_6,
            "exception": self.exception,
        }


@dataclass(frozen=True)
class ReachabilityFlags:
    """Whether v is a value of Euler's φ and of Carmichael's λ"""
    value: int
    phi: bool
    phi_witness: Optional[int]
    carmichael: bool
    carmichael_witness: Optional[int]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "phi": self.phi,
            "phi_witness": self.phi_witness,
            "lambda": self.carmichael,
            "lambda_witness": self.carmichael_witness,
        }


@dataclass
class GoldenCheck:
    """One comparison of the built-in acceptance suite"""
    name: str
    expected: Any
    observed: Any
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "expected": self.expected, "observed": self.observed,
                "passed": self.passed}
