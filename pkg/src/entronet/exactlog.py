"""Exact arithmetic on rational combinations of logarithms of primes.

All entropies and capacities in this package are numbers of the form
``sum(q_p * log(p))`` with rational coefficients ``q_p`` over finitely many
primes ``p``.  Because logarithms of distinct primes are linearly independent
over the rationals, such a number is zero exactly when all coefficients are
zero, and equality is decidable by comparing coefficient maps.  The sign of a
nonzero value is decided by interval evaluation at increasing precision.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

import mpmath

RationalLike = Union[int, Fraction]

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = 67
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> Dict[int, int]:
    """Prime factorization of a positive integer (trial division)."""
    if n < 1:
        raise ValueError(f"cannot factorize non-positive integer {n}")
    out: Dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 67
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    val = Fraction(man) * (Fraction(2) ** exp)
    return -val if sign else val


class LogScalar:
    """The exact real number ``sum(q_p * log(p))`` over primes p.

    Immutable and hashable.  Supports addition, subtraction, negation and
    scaling by rationals; total order via :meth:`sign` of differences.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, RationalLike] | None = None):
        clean: Dict[int, Fraction] = {}
        if terms:
            for p, q in terms.items():
                if not is_prime(p):
                    raise ValueError(f"LogScalar keys must be prime, got {p}")
                qf = Fraction(q)
                if qf != 0:
                    clean[p] = qf
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "LogScalar":
        return cls()

    @classmethod
    def log_int(cls, n: int) -> "LogScalar":
        """log(n) for a positive integer n."""
        return cls(factorize(n))

    @classmethod
    def log_fraction(cls, num: int, den: int = 1) -> "LogScalar":
        """log(num/den) for positive integers."""
        terms = {p: Fraction(e) for p, e in factorize(num).items()}
        for p, e in factorize(den).items():
            terms[p] = terms.get(p, Fraction(0)) - e
        return cls(terms)

    # -- accessors ---------------------------------------------------------

    @property
    def terms(self) -> Dict[int, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    # -- arithmetic --------------------------------------------------------

    def _merge(self, other: "LogScalar", sign: int) -> "LogScalar":
        terms = dict(self._terms)
        for p, q in other._terms.items():
            terms[p] = terms.get(p, Fraction(0)) + sign * q
        return LogScalar(terms)

    def __add__(self, other: "LogScalar") -> "LogScalar":
        if not isinstance(other, LogScalar):
            return NotImplemented
        return self._merge(other, +1)

    def __sub__(self, other: "LogScalar") -> "LogScalar":
        if not isinstance(other, LogScalar):
            return NotImplemented
        return self._merge(other, -1)

    def __neg__(self) -> "LogScalar":
        return LogScalar({p: -q for p, q in self._terms.items()})

    def __mul__(self, c: RationalLike) -> "LogScalar":
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        return LogScalar({p: q * c for p, q in self._terms.items()})

    __rmul__ = __mul__

    # -- comparisons -------------------------------------------------------

    def sign(self) -> int:
        """-1, 0 or +1.  Zero exactly when the term map is empty."""
        if not self._terms:
            return 0
        # fast path: all mass on a single prime (or all coefficients share
        # the sign) avoids interval evaluation entirely
        signs = {1 if q > 0 else -1 for q in self._terms.values()}
        if len(signs) == 1:
            return signs.pop()
        prec = 64
        while True:
            lo, hi = self._bounds(prec)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            prec *= 2

    def _bounds(self, prec: int) -> Tuple[Fraction, Fraction]:
        old = mpmath.iv.prec
        try:
            mpmath.iv.prec = prec
            total = mpmath.iv.mpf(0)
            for p, q in self._terms.items():
                total += (mpmath.iv.mpf(q.numerator) / q.denominator) * mpmath.iv.log(p)
            lo = _mpf_to_fraction(total.a)
            hi = _mpf_to_fraction(total.b)
        finally:
            mpmath.iv.prec = old
        return lo, hi

    def rational_bounds(self, prec: int = 128) -> Tuple[Fraction, Fraction]:
        """Rational enclosure [lo, hi] of the value at the given precision."""
        if not self._terms:
            return Fraction(0), Fraction(0)
        return self._bounds(prec)

    def to_float(self) -> float:
        import math

        return sum(float(q) * math.log(p) for p, q in self._terms.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LogScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __lt__(self, other: "LogScalar") -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: "LogScalar") -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: "LogScalar") -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: "LogScalar") -> bool:
        return (self - other).sign() >= 0

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "LogScalar(0)"
        parts = [f"{q}*log{p}" for p, q in sorted(self._terms.items())]
        return "LogScalar(" + " + ".join(parts) + ")"

    # -- serialization -----------------------------------------------------

    def to_json(self) -> Dict[str, str]:
        return {str(p): str(q) for p, q in sorted(self._terms.items())}

    @classmethod
    def from_json(cls, obj: Mapping[str, str]) -> "LogScalar":
        return cls({int(p): Fraction(q) for p, q in obj.items()})


ZERO = LogScalar.zero()


def log2_units(coeff: RationalLike) -> LogScalar:
    """coeff * log(2) — the conventional 'bits' unit."""
    return LogScalar({2: Fraction(coeff)})


def entropy_of_counts(counts: Iterable[int]) -> LogScalar:
    """Exact entropy of a distribution given by positive integer counts.

    With total T and counts c_i, H = log T - (1/T) * sum(c_i * log c_i).
    """
    counts = list(counts)
    total = sum(counts)
    if total <= 0 or any(c <= 0 for c in counts):
        raise ValueError("counts must be positive integers")
    h = LogScalar.log_int(total)
    for c in counts:
        if c > 1:
            h = h - LogScalar.log_int(c) * Fraction(c, total)
    return h
