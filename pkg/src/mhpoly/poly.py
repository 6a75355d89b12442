"""Exact sparse polynomials in t, u, v with nonnegative integer coefficients.

Terms are keyed by exponent triples ``(k, a, b)`` where ``k`` is the
homological degree and ``a = -p``, ``b = -q`` are the negated Hodge
indices of the homology convention, so every exponent is nonnegative.
Evaluation is exact over :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping

__all__ = [
    "MHPolynomial",
    "RationalPoint",
    "Box",
    "RationalInterval",
    "UniPoly",
    "ZERO",
    "ONE",
    "add",
    "mul",
    "pow",
    "scale",
    "evaluate",
    "eval_box",
    "specialize_t",
    "degrees",
    "to_fraction",
]

Exponent = tuple[int, int, int]

# Binomials up to this exponent are raised by iterated multiplication;
# everything larger goes through repeated squaring.
POW_ITERATED_MAX_TERMS = 2
POW_ITERATED_MAX_EXP = 16


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions or exact strings ("11/10", "1.1") to a Fraction.

    Floats are rejected so no inexact value sneaks in.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {value!r}") from exc
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


class MHPolynomial:
    """Immutable sparse polynomial sum c * t^k u^a v^b.

    Coefficients are Python ints (arbitrary precision) and strictly positive;
    zero coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, int] | Iterable[tuple[Exponent, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Exponent, int] = {}
        for exp, coeff in items:
            exp = tuple(exp)
            if len(exp) != 3 or any(not isinstance(e, int) or isinstance(e, bool) for e in exp):
                raise ValueError(f"exponent must be a triple of ints, got {exp!r}")
            if min(exp) < 0:
                raise ValueError(f"negative exponent in {exp!r}")
            if not isinstance(coeff, int) or isinstance(coeff, bool):
                raise TypeError(f"coefficient must be an int, got {coeff!r}")
            if coeff < 0:
                raise ValueError(f"negative coefficient {coeff} at {exp!r}")
            total = clean.get(exp, 0) + coeff
            if total:
                clean[exp] = total
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Exponent, int]) -> MHPolynomial:
        # trusted constructor: terms already validated, positive, any order
        obj = cls.__new__(cls)
        obj._terms = dict(sorted(terms.items()))
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, k: int, a: int = 0, b: int = 0, coeff: int = 1) -> MHPolynomial:
        return cls({(k, a, b): coeff})

    @classmethod
    def from_records(cls, records) -> MHPolynomial:
        """Parse ``[[k, a, b, "coeff"], ...]``; order is irrelevant, duplicates are errors."""
        terms: dict[Exponent, int] = {}
        for rec in records:
            if not isinstance(rec, (list, tuple)) or len(rec) != 4:
                raise ValueError(f"term record must be [k, a, b, coeff], got {rec!r}")
            k, a, b, c = rec
            exp = (k, a, b)
            if any(not isinstance(e, int) or isinstance(e, bool) for e in exp):
                raise ValueError(f"exponents must be integers in {rec!r}")
            if isinstance(c, str):
                if not c.strip().isdigit():
                    raise ValueError(f"coefficient must be a nonnegative decimal string in {rec!r}")
                c = int(c)
            elif not isinstance(c, int) or isinstance(c, bool):
                raise ValueError(f"coefficient must be a decimal string in {rec!r}")
            if exp in terms:
                raise ValueError(f"duplicate exponent {exp!r}")
            if c == 0:
                raise ValueError(f"zero coefficient stored at {exp!r}")
            terms[exp] = c
        return cls(terms)

    def to_records(self) -> list[list]:
        return [[k, a, b, str(c)] for (k, a, b), c in self._terms.items()]

    # mapping-ish access

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponent, int]]:
        return iter(self._terms.items())

    def coeff(self, k: int, a: int = 0, b: int = 0) -> int:
        return self._terms.get((k, a, b), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MHPolynomial):
            return self._terms == other._terms
        if isinstance(other, int) and not isinstance(other, bool):
            return self._terms == ({(0, 0, 0): other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __add__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = MHPolynomial({(0, 0, 0): other})
        if not isinstance(other, MHPolynomial):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return scale(self, other)
        if not isinstance(other, MHPolynomial):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MHPolynomial:
        return pow(self, n)

    def __call__(self, t, u=1, v=1) -> Fraction:
        return evaluate(self, RationalPoint(t, u, v))

    @property
    def total(self) -> int:
        """Sum of all coefficients, i.e. the value at (1, 1, 1)."""
        return sum(self._terms.values())

    def format(self, convention: str = "homology") -> str:
        """Human readable form, e.g. ``1 + t^2uv``.

        ``convention="cohomology"`` prints ``u^p v^q`` with ``p = -a``.
        """
        if convention not in ("homology", "cohomology"):
            raise ValueError(f"unknown convention {convention!r}")
        if not self._terms:
            return "0"
        sign = -1 if convention == "cohomology" else 1
        parts = []
        for (k, a, b), c in self._terms.items():
            body = _var("t", k) + _var("u", sign * a) + _var("v", sign * b)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            else:
                parts.append(f"{c}{body}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"MHPolynomial({self.format()!r})"


def _var(name: str, e: int) -> str:
    if e == 0:
        return ""
    if e == 1:
        return name
    if e < 0:
        return f"{name}^({e})"
    return f"{name}^{e}"


ZERO = MHPolynomial()
ONE = MHPolynomial({(0, 0, 0): 1})


@dataclass(frozen=True)
class RationalPoint:
    t: Fraction
    u: Fraction = Fraction(1)
    v: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("t", "u", "v"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))

    @classmethod
    def parse(cls, text: str) -> RationalPoint:
        """Parse ``"t,u,v"`` with exact rational components."""
        parts = [p for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected three comma separated rationals, got {text!r}")
        return cls(*(to_fraction(p) for p in parts))

    @classmethod
    def diagonal(cls, x) -> RationalPoint:
        return cls(x, x, x)

    def __iter__(self):
        return iter((self.t, self.u, self.v))

    def __le__(self, other: RationalPoint) -> bool:
        return all(x <= y for x, y in zip(self, other))


@dataclass(frozen=True)
class Box:
    lo: RationalPoint
    hi: RationalPoint

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"box corners out of order: {self.lo} > {self.hi}")

    @classmethod
    def cube(cls, lo, hi) -> Box:
        return cls(RationalPoint.diagonal(lo), RationalPoint.diagonal(hi))

    def contains(self, pt: RationalPoint) -> bool:
        return self.lo <= pt <= self.hi

    @property
    def widths(self) -> tuple[Fraction, Fraction, Fraction]:
        return tuple(h - l for l, h in zip(self.lo, self.hi))

    def is_positive(self) -> bool:
        return all(x > 0 for x in self.lo)

    def bisect(self, axis: int) -> tuple[Box, Box]:
        lo, hi = list(self.lo), list(self.hi)
        mid = (lo[axis] + hi[axis]) / 2
        left_hi = hi.copy()
        left_hi[axis] = mid
        right_lo = lo.copy()
        right_lo[axis] = mid
        return (Box(self.lo, RationalPoint(*left_hi)), Box(RationalPoint(*right_lo), self.hi))


@dataclass(frozen=True)
class RationalInterval:
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate integer polynomial; ``coeffs[i]`` multiplies t^i."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __call__(self, t) -> Fraction:
        t = to_fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            body = _var("t", i)
            parts.append(str(c) if not body else (body if c == 1 else f"{c}{body}"))
        return " + ".join(parts) or "0"


def add(P: MHPolynomial, Q: MHPolynomial) -> MHPolynomial:
    if not Q:
        return P
    if not P:
        return Q
    out = dict(P._terms)
    for exp, c in Q._terms.items():
        out[exp] = out.get(exp, 0) + c
    return MHPolynomial._raw(out)


def scale(P: MHPolynomial, n: int) -> MHPolynomial:
    """Multiply every coefficient by the nonnegative integer ``n``."""
    if n < 0:
        raise ValueError("scalar must be nonnegative")
    if n == 0:
        return ZERO
    return MHPolynomial._raw({e: c * n for e, c in P._terms.items()})


def mul(P: MHPolynomial, Q: MHPolynomial) -> MHPolynomial:
    if len(P) > len(Q):
        P, Q = Q, P
    out: dict[Exponent, int] = {}
    q_items = list(Q._terms.items())
    for (k1, a1, b1), c1 in P._terms.items():
        for (k2, a2, b2), c2 in q_items:
            e = (k1 + k2, a1 + a2, b1 + b2)
            out[e] = out.get(e, 0) + c1 * c2
    return MHPolynomial._raw(out)


def pow(P: MHPolynomial, n: int) -> MHPolynomial:
    """``P**n`` by repeated squaring; tiny polynomials use iterated products."""
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"exponent must be a nonnegative integer, got {n!r}")
    if n == 0:
        return ONE
    if len(P) == 1:
        ((k, a, b), c), = P._terms.items()
        return MHPolynomial._raw({(k * n, a * n, b * n): c**n})
    if n <= 2 or (len(P) <= POW_ITERATED_MAX_TERMS and n <= POW_ITERATED_MAX_EXP):
        acc = P
        for _ in range(n - 1):
            acc = mul(acc, P)
        return acc
    result = None
    base = P
    while n:
        if n & 1:
            result = base if result is None else mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def evaluate(P: MHPolynomial, pt: RationalPoint) -> Fraction:
    """Exact value of P at ``pt``."""
    t, u, v = pt
    cache: dict[tuple[int, int], Fraction] = {}

    def power(axis: int, base: Fraction, e: int) -> Fraction:
        key = (axis, e)
        if key not in cache:
            cache[key] = base**e
        return cache[key]

    total = Fraction(0)
    for (k, a, b), c in P._terms.items():
        total += c * power(0, t, k) * power(1, u, a) * power(2, v, b)
    return total


def eval_box(P: MHPolynomial, box: Box) -> RationalInterval:
    """Exact range of P over a box in the closed nonnegative orthant.

    P is nondecreasing in each coordinate there, so the corners are extremal.
    """
    if any(x < 0 for x in box.lo):
        raise ValueError("eval_box needs a box inside the nonnegative orthant")
    return RationalInterval(evaluate(P, box.lo), evaluate(P, box.hi))


def specialize_t(P: MHPolynomial) -> UniPoly:
    """Set u = v = 1 and collect coefficients by degree in t."""
    if not P:
        return UniPoly()
    top = max(k for k, _, _ in P._terms)
    coeffs = [0] * (top + 1)
    for (k, _, _), c in P._terms.items():
        coeffs[k] += c
    return UniPoly(tuple(coeffs))


def degrees(P: MHPolynomial) -> tuple[int, int, int]:
    if not P:
        raise ValueError("degrees of the zero polynomial are undefined")
    exps = P._terms.keys()
    return (max(e[0] for e in exps), max(e[1] for e in exps), max(e[2] for e in exps))
