"""Free graded-commutative algebras over Q with an optional differential.

A monomial is a tuple of exponents indexed by generator; trailing zeros are
stripped so monomials stay valid when generators are appended. Odd
generators are exterior (exponent at most 1), even ones polynomial.
Elements are dicts ``monomial -> Fraction`` without zero values.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

Monomial = tuple[int, ...]
Element = dict[Monomial, Fraction]

UNIT: Monomial = ()


class BasisTooLarge(RuntimeError):
    """A graded piece exceeded the configured dimension limit."""


def _strip(exps: Iterable[int]) -> Monomial:
    e = list(exps)
    while e and e[-1] == 0:
        e.pop()
    return tuple(e)


class FreeGCA:
    def __init__(self, degrees: Iterable[int] = (), names: Iterable[str] | None = None,
                 max_basis: int = 50_000):
        self.degrees: list[int] = []
        self.names: list[str] = []
        self.diff: list[Element] = []
        self.max_basis = max_basis
        self._basis_cache: dict[int, list[Monomial]] = {}
        self._d_cache: dict[Monomial, Element] = {}
        names = list(names) if names is not None else None
        for i, deg in enumerate(degrees):
            self.add_generator(deg, names[i] if names else None)

    # generators

    @property
    def ngens(self) -> int:
        return len(self.degrees)

    def add_generator(self, degree: int, name: str | None = None,
                      differential: Element | None = None) -> int:
        if degree < 1:
            raise ValueError(f"generator degree must be positive, got {degree}")
        d = dict(differential or {})
        for m in d:
            if self.degree_of(m) != degree + 1:
                raise ValueError("differential is not of degree +1")
        self.degrees.append(degree)
        self.names.append(name or f"g{len(self.degrees) - 1}")
        self.diff.append(d)
        self._basis_cache.clear()
        return len(self.degrees) - 1

    def generator(self, i: int) -> Element:
        return {tuple([0] * i + [1]): Fraction(1)}

    def degree_of(self, m: Monomial) -> int:
        return sum(e * self.degrees[i] for i, e in enumerate(m))

    # bases

    def basis(self, degree: int) -> list[Monomial]:
        """Monomials of the given degree, in a fixed canonical order."""
        if degree < 0:
            return []
        if degree not in self._basis_cache:
            out: list[Monomial] = []
            exps = [0] * self.ngens

            def rec(i: int, remaining: int) -> None:
                if remaining == 0:
                    out.append(_strip(exps))
                    if len(out) > self.max_basis:
                        raise BasisTooLarge(
                            f"degree {degree} basis exceeds {self.max_basis} monomials; "
                            "lower the cutoff or raise the limit")
                    return
                if i == self.ngens:
                    return
                deg = self.degrees[i]
                top = remaining // deg
                if deg % 2:
                    top = min(top, 1)
                for e in range(top, -1, -1):
                    exps[i] = e
                    rec(i + 1, remaining - e * deg)
                exps[i] = 0

            rec(0, degree)
            self._basis_cache[degree] = out
        return self._basis_cache[degree]

    def index(self, degree: int) -> dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.basis(degree))}

    def to_vector(self, x: Element, degree: int) -> list[Fraction]:
        idx = self.index(degree)
        vec = [Fraction(0)] * len(idx)
        for m, c in x.items():
            vec[idx[m]] += c
        return vec

    def from_vector(self, vec, degree: int) -> Element:
        return {m: Fraction(c) for m, c in zip(self.basis(degree), vec) if c}

    # products

    def mono_mul(self, m1: Monomial, m2: Monomial) -> tuple[int, Monomial] | None:
        """Product of two monomials as (sign, monomial), or None if it vanishes."""
        n = max(len(m1), len(m2))
        sign = 1
        odd_in_m1_after = 0  # odd factors of m1 with index > current
        # count pairs (i in m1, j in m2, both odd, j < i): moving m2's factor left past them
        odd_m1 = [i for i, e in enumerate(m1) if e and self.degrees[i] % 2]
        out = []
        for i in range(n):
            e1 = m1[i] if i < len(m1) else 0
            e2 = m2[i] if i < len(m2) else 0
            if self.degrees[i] % 2 and e1 and e2:
                return None
            out.append(e1 + e2)
        for j, e in enumerate(m2):
            if e and self.degrees[j] % 2:
                odd_in_m1_after = sum(1 for i in odd_m1 if i > j)
                if odd_in_m1_after % 2:
                    sign = -sign
        return sign, _strip(out)

    def mul(self, x: Element, y: Element) -> Element:
        out: Element = {}
        for m1, c1 in x.items():
            for m2, c2 in y.items():
                r = self.mono_mul(m1, m2)
                if r is None:
                    continue
                s, m = r
                v = out.get(m, 0) + s * c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out

    def add(self, x: Element, y: Element, scale=1) -> Element:
        out = dict(x)
        for m, c in y.items():
            v = out.get(m, 0) + scale * c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return out

    def pow(self, x: Element, n: int) -> Element:
        out: Element = {UNIT: Fraction(1)}
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def degree(self, x: Element) -> int | None:
        """Common degree of a homogeneous element; None for zero; raises if mixed."""
        degs = {self.degree_of(m) for m in x}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"element is not homogeneous (degrees {sorted(degs)})")
        return degs.pop()

    # differential

    def d_monomial(self, m: Monomial) -> Element:
        if m in self._d_cache:
            return self._d_cache[m]
        first = next((i for i, e in enumerate(m) if e), None)
        if first is None:
            result: Element = {}
        else:
            g = tuple([0] * first + [1])
            rest = list(m)
            rest[first] -= 1
            rest = _strip(rest)
            # d(g * rest) = dg * rest + (-1)^|g| g * d(rest); g * rest is already canonical
            result = self.mul(self.diff[first], {rest: Fraction(1)})
            d_rest = self.d_monomial(rest)
            if d_rest:
                sign = -1 if self.degrees[first] % 2 else 1
                result = self.add(result, self.mul({g: Fraction(1)}, d_rest), sign)
        self._d_cache[m] = result
        return result

    def d(self, x: Element) -> Element:
        out: Element = {}
        for m, c in x.items():
            out = self.add(out, self.d_monomial(m), c)
        return out

    def d_matrix(self, degree: int) -> list[list[Fraction]]:
        """Rows are images of the degree basis, in coordinates of degree + 1."""
        return [self.to_vector(self.d_monomial(m), degree + 1) for m in self.basis(degree)]

    def format(self, x: Element) -> str:
        if not x:
            return "0"
        parts = []
        for m, c in sorted(x.items()):
            body = "*".join(
                self.names[i] if e == 1 else f"{self.names[i]}^{e}"
                for i, e in enumerate(m) if e)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")
