"""Exact rational functions of one variable t over the rationals.

A RationalGF is N(t) / prod (1 - q t)^e with the denominator kept factored.
Poles q are integers for raw generating functions and may be rational
after normalization (t -> t/|G|).  Values are immutable and always held in
reduced form, so structural equality is equality of functions.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple, Union
import math

from .errors import InvalidParameters

Scalar = Union[int, Fraction]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Polynomial:
    """Dense polynomial in t, coefficients listed from the constant term up"""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c: Scalar) -> "Polynomial":
        return cls([c])

    @classmethod
    def linear_factor(cls, q: Scalar, e: int = 1) -> "Polynomial":
        """(1 - q t)^e"""
        q = _frac(q)
        return cls([math.comb(e, k) * (-q) ** k for k in range(e + 1)])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __add__(self, other) -> "Polynomial":
        other = other if isinstance(other, Polynomial) else Polynomial.constant(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[k] + other[k] for k in range(size))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "Polynomial":
        return self + (-other if isinstance(other, Polynomial) else -_frac(other))

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = _frac(other)
            return Polynomial(a * c for a in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> "Polynomial":
        """Multiply by t^k"""
        return Polynomial([0] * k + list(self.coeffs)) if self.coeffs else Polynomial()

    def evaluate(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def scale_variable(self, c: Scalar) -> "Polynomial":
        """p(c t)"""
        c = _frac(c)
        return Polynomial(a * c ** k for k, a in enumerate(self.coeffs))

    def compose_linear(self, a: Scalar, b: Scalar) -> "Polynomial":
        """p(a + b u) as a polynomial in u"""
        inner = Polynomial([a, b])
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def divide_by_linear(self, q: Fraction) -> "Polynomial":
        """Exact quotient by (1 - q t); the caller guarantees p(1/q) = 0"""
        d = self.degree
        quotient = []
        carry = Fraction(0)
        for k in range(d):
            carry = self.coeffs[k] + q * carry
            quotient.append(carry)
        if self.coeffs[d] + q * carry != 0:
            raise ArithmeticError(f"(1 - {q}t) does not divide the numerator")
        return Polynomial(quotient)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def render(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = _fmt(mag)
            else:
                power = var if k == 1 else f"{var}^{k}"
                body = power if mag == 1 else f"{_fmt(mag)}{power}" if mag.denominator == 1 else f"({_fmt(mag)}){power}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Polynomial({self.render()})"


def _series_reciprocal(den: Polynomial, terms: int) -> List[Fraction]:
    """First coefficients of 1/den, den(0) != 0"""
    c0 = den[0]
    out: List[Fraction] = []
    for k in range(terms):
        acc = Fraction(1 if k == 0 else 0)
        for j in range(1, min(k, den.degree) + 1):
            acc -= den[j] * out[k - j]
        out.append(acc / c0)
    return out


def _pole_factor(q: Fraction, e: int = 1) -> str:
    """(1 - q t)^e as text, unit coefficients dropped"""
    base = f"({Polynomial.linear_factor(q).render()})"
    return base if e == 1 else f"{base}^{e}"


def _pole_json(q: Fraction):
    return q.numerator if q.denominator == 1 else _fmt(q)


class RationalGF:
    """numerator / prod (1 - q t)^e in reduced form"""

    __slots__ = ("numerator", "poles", "normalized")

    def __init__(self, numerator: Polynomial, poles: Dict[Scalar, int] = None, normalized: bool = False):
        merged: Dict[Fraction, int] = {}
        for q, e in (poles or {}).items():
            q = _frac(q)
            if e < 0:
                raise InvalidParameters(f"negative pole exponent {e}")
            if q != 0 and e:
                merged[q] = merged.get(q, 0) + e
        if not normalized:
            odd = [q for q in merged if q.denominator != 1]
            if odd:
                raise InvalidParameters(f"rational poles {odd} need a normalized function")
        num = numerator
        if num.is_zero():
            merged = {}
        for q in sorted(merged):
            while merged[q] and num.evaluate(1 / q) == 0:
                num = num.divide_by_linear(q)
                merged[q] -= 1
        self.numerator = num
        self.poles: Tuple[Tuple[Fraction, int], ...] = tuple((q, e) for q, e in sorted(merged.items()) if e)
        self.normalized = normalized

    # constructors

    @classmethod
    def constant(cls, c: Scalar, normalized: bool = False) -> "RationalGF":
        return cls(Polynomial.constant(c), normalized=normalized)

    @classmethod
    def geometric(cls, q: Scalar, coefficient: Scalar = 1, exponent: int = 1, normalized: bool = False) -> "RationalGF":
        """coefficient / (1 - q t)^exponent"""
        return cls(Polynomial.constant(coefficient), {q: exponent}, normalized=normalized)

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Scalar, Scalar, int]], normalized: bool = False) -> "RationalGF":
        """Sum of coefficient / (1 - q t)^e over (coefficient, q, e) triples"""
        total = cls.constant(0, normalized=normalized)
        for c, q, e in terms:
            total = total + cls.geometric(q, c, e, normalized=normalized)
        return total

    # structure

    @property
    def pole_map(self) -> Dict[Fraction, int]:
        return dict(self.poles)

    def denominator(self) -> Polynomial:
        acc = Polynomial.constant(1)
        for q, e in self.poles:
            acc = acc * Polynomial.linear_factor(q, e)
        return acc

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    # arithmetic

    def _lift(self, other) -> "RationalGF":
        if isinstance(other, RationalGF):
            return other
        return RationalGF.constant(other, normalized=self.normalized)

    def __add__(self, other) -> "RationalGF":
        other = self._lift(other)
        common = dict(self.poles)
        for q, e in other.poles:
            common[q] = max(common.get(q, 0), e)
        num = Polynomial()
        for part in (self, other):
            scale = Polynomial.constant(1)
            own = part.pole_map
            for q, e in common.items():
                if e - own.get(q, 0):
                    scale = scale * Polynomial.linear_factor(q, e - own.get(q, 0))
            num = num + part.numerator * scale
        return RationalGF(num, common, normalized=self.normalized or other.normalized)

    __radd__ = __add__

    def __neg__(self) -> "RationalGF":
        return RationalGF(-self.numerator, self.pole_map, normalized=self.normalized)

    def __sub__(self, other) -> "RationalGF":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "RationalGF":
        return self._lift(other) + (-self)

    def __mul__(self, other) -> "RationalGF":
        if not isinstance(other, RationalGF):
            return RationalGF(self.numerator * _frac(other), self.pole_map, normalized=self.normalized)
        poles = dict(self.poles)
        for q, e in other.poles:
            poles[q] = poles.get(q, 0) + e
        return RationalGF(self.numerator * other.numerator, poles, normalized=self.normalized or other.normalized)

    __rmul__ = __mul__

    def __truediv__(self, c: Scalar) -> "RationalGF":
        return self * (1 / _frac(c))

    def times_t(self, k: int = 1) -> "RationalGF":
        return RationalGF(self.numerator.shift(k), self.pole_map, normalized=self.normalized)

    def scale_variable(self, c: Scalar, normalized: bool = True) -> "RationalGF":
        """f(c t)"""
        c = _frac(c)
        poles = {q * c: e for q, e in self.poles}
        return RationalGF(self.numerator.scale_variable(c), poles, normalized=normalized or self.normalized)

    def normalize(self, order: int) -> "RationalGF":
        if order < 1:
            raise InvalidParameters(f"order must be positive, got {order}")
        return self.scale_variable(Fraction(1, order))

    # series

    def coefficients(self, n: int) -> List[Fraction]:
        """Taylor coefficients of t^0..t^n"""
        series = [self.numerator[k] for k in range(n + 1)]
        for q, e in self.poles:
            for _ in range(e):
                for k in range(1, n + 1):
                    series[k] += q * series[k - 1]
        return series

    def coefficient(self, n: int) -> Fraction:
        return self.coefficients(n)[n]

    def integer_coefficients(self, n: int) -> List[int]:
        out = []
        for k, c in enumerate(self.coefficients(n)):
            if c.denominator != 1:
                raise ArithmeticError(f"coefficient {k} is not an integer: {c}")
            out.append(c.numerator)
        return out

    # comparison and display

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalGF):
            if isinstance(other, (int, Fraction)):
                other = RationalGF.constant(other, normalized=True)
            else:
                return NotImplemented
        return self.numerator == other.numerator and self.poles == other.poles

    def __hash__(self):
        return hash((self.numerator, self.poles))

    def to_dict(self) -> Dict:
        return {
            "numerator": [_fmt(c) for c in self.numerator.coeffs],
            "denominator": [[_pole_json(q), e] for q, e in self.poles],
        }

    def render(self) -> str:
        num = self.numerator.render()
        if not self.poles:
            return num
        factors = [_pole_factor(q, e) for q, e in self.poles]
        if len(self.numerator.coeffs) > 1:
            num = f"({num})"
        return f"{num}/{''.join(factors) if len(factors) == 1 else '(' + ''.join(factors) + ')'}"

    def __repr__(self):
        return f"RationalGF({self.render()})"

    def partial_fractions(self) -> "PartialFractions":
        return partial_fractions(self)


@dataclass(frozen=True)
class PartialFractionTerm:
    coefficient: Fraction
    pole: Fraction
    exponent: int

    def as_gf(self, normalized: bool = True) -> RationalGF:
        return RationalGF.geometric(self.pole, self.coefficient, self.exponent, normalized=normalized)


@dataclass(frozen=True)
class PartialFractions:
    terms: Tuple[PartialFractionTerm, ...]
    polynomial: Polynomial
    normalized: bool = False

    def recombine(self) -> RationalGF:
        total = RationalGF(self.polynomial, normalized=self.normalized)
        for term in self.terms:
            total = total + term.as_gf(self.normalized)
        return total

    def to_list(self) -> List[Tuple]:
        """(num, den, m, e) quadruples; m is an int, or "a/b" for a rational pole"""
        return [
            (t.coefficient.numerator, t.coefficient.denominator, _pole_json(t.pole), t.exponent)
            for t in self.terms
        ]

    def to_dict(self) -> Dict:
        return {
            "terms": [list(q) for q in self.to_list()],
            "polynomial": [_fmt(c) for c in self.polynomial.coeffs],
        }

    def render(self) -> str:
        parts = []
        for t in self.terms:
            base = _pole_factor(t.pole, t.exponent)
            parts.append(f"{_fmt(t.coefficient)}/{base}" if t.coefficient.denominator == 1 else f"({_fmt(t.coefficient)})/{base}")
        if not self.polynomial.is_zero():
            parts.append(self.polynomial.render())
        return " + ".join(parts) if parts else "0"


def partial_fractions(f: RationalGF) -> PartialFractions:
    """Exact decomposition into coefficient / (1 - q t)^k terms plus a polynomial part.

    Around each pole q the substitution u = 1 - q t turns the principal part
    into the first e Taylor coefficients of N / D_other in u.
    """
    terms: List[PartialFractionTerm] = []
    for q, e in f.poles:
        a, b = 1 / q, -1 / q  # t = (1 - u) / q
        num_u = f.numerator.compose_linear(a, b)
        other_u = Polynomial.constant(1)
        for q2, e2 in f.poles:
            if q2 != q:
                other_u = other_u * Polynomial.linear_factor(q2, e2).compose_linear(a, b)
        recip = _series_reciprocal(other_u, e)
        for j in range(e):
            c = sum((num_u[i] * recip[j - i] for i in range(j + 1)), Fraction(0))
            if c:
                terms.append(PartialFractionTerm(c, q, e - j))
    terms.sort(key=lambda t: (t.pole, t.exponent))

    remainder = f
    for t in terms:
        remainder = remainder - t.as_gf(normalized=True)
    if remainder.poles:
        raise ArithmeticError(f"partial fractions left poles {remainder.poles}")
    return PartialFractions(tuple(terms), remainder.numerator, normalized=f.normalized)
