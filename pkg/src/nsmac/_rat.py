"""Exact rational scalar type.

gmpy2.mpq when available (much faster pivoting), fractions.Fraction otherwise.
Both interoperate with ints and with each other through numbers.Rational.
"""

from fractions import Fraction

try:  # pragma: no cover - environment dependent
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover
    Rat = Fraction


def as_rat(x):
    """Coerce ints, Fractions, mpq, floats and 'p/q' strings to the Rat type.

    Floats are converted exactly (the binary value, not a re-rounding), so a
    channel entered in doubles still has a well-defined rational lift.
    """
    if isinstance(x, float):
        x = Fraction(x)
    if isinstance(x, str):
        x = Fraction(x)
    return Rat(x)


def rat_to_str(x):
    """Canonical 'p' or 'p/q' text form."""
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
