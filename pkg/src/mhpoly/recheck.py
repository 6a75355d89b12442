"""Independent re-verification of serialized threshold certificates.

Works from the JSON document alone and shares no code with the producer:
polynomials are re-read from their term records, every bound is
re-evaluated with exact rationals, and subdivision trees are checked to be
exact bisections of the certified region.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

_RATIONAL = re.compile(r"-?[0-9]+/[0-9]+")
MAX_THROUGH_GAP = 1_000_000


class Reject(Exception):
    pass


@dataclass
class RecheckResult:
    ok: bool
    variant: str | None
    n0: int | None
    errors: list[str] = field(default_factory=list)
    leaves_checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def _rat(s) -> Fraction:
    if not isinstance(s, str) or not _RATIONAL.fullmatch(s):
        raise Reject(f"not a serialized rational: {s!r}")
    num, den = s.split("/")
    if int(den) == 0:
        raise Reject(f"zero denominator in {s!r}")
    return Fraction(int(num), int(den))


def _point(xs) -> tuple[Fraction, Fraction, Fraction]:
    if not isinstance(xs, list) or len(xs) != 3:
        raise Reject(f"expected a point [t, u, v], got {xs!r}")
    return tuple(_rat(x) for x in xs)


def _terms(records) -> list[tuple[int, int, int, int]]:
    if not isinstance(records, list):
        raise Reject("polynomial must be a list of term records")
    out = []
    for rec in records:
        if not isinstance(rec, list) or len(rec) != 4:
            raise Reject(f"bad term record {rec!r}")
        k, a, b, c = rec
        if not all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in (k, a, b)):
            raise Reject(f"bad exponents in {rec!r}")
        if not isinstance(c, str) or not c.isdigit() or int(c) == 0:
            raise Reject(f"bad coefficient in {rec!r}")
        out.append((k, a, b, int(c)))
    return out


def _value(terms, pt) -> Fraction:
    t, u, v = pt
    return sum((c * t**k * u**a * v**b for k, a, b, c in terms), Fraction(0))


def _tower(A: Fraction, B: Fraction, n0: int, through: int, where: str) -> None:
    """n·B < A^n for n0 ≤ n ≤ through, then B ≤ A^through·(A − 1) with A ≥ 1."""
    if through < n0 or through - n0 > MAX_THROUGH_GAP:
        raise Reject(f"{where}: bad induction index {through} for n0 = {n0}")
    if A < 1:
        raise Reject(f"{where}: A = {A} < 1, the induction step is invalid")
    An = A ** n0
    for n in range(n0, through + 1):
        if not n * B < An:
            raise Reject(f"{where}: base inequality {n}*{B} < {A}^{n} fails")
        if n < through:
            An *= A
    if not B <= An * (A - 1):
        raise Reject(f"{where}: induction step {B} <= {A}^{through}*({A} - 1) fails")


def _check_tree(node, lo, hi, mh, mh_pi, n0, path="root") -> int:
    if _point(node.get("lo")) != lo or _point(node.get("hi")) != hi:
        raise Reject(f"{path}: box does not match its parent's bisection")
    children = node.get("children")
    if children:
        axis = node.get("axis")
        if axis not in (0, 1, 2) or len(children) != 2:
            raise Reject(f"{path}: malformed split")
        mid = (lo[axis] + hi[axis]) / 2
        if lo[axis] == hi[axis]:
            raise Reject(f"{path}: split along a degenerate axis")
        left_hi = tuple(mid if i == axis else hi[i] for i in range(3))
        right_lo = tuple(mid if i == axis else lo[i] for i in range(3))
        return (_check_tree(children[0], lo, left_hi, mh, mh_pi, n0, path + ".0")
                + _check_tree(children[1], right_lo, hi, mh, mh_pi, n0, path + ".1"))
    A, B = _value(mh, lo), _value(mh_pi, hi)
    if "A_lo" in node and _rat(node["A_lo"]) != A:
        raise Reject(f"{path}: recorded A_lo differs from MH at the low corner")
    if "B_hi" in node and _rat(node["B_hi"]) != B:
        raise Reject(f"{path}: recorded B_hi differs from MHpi at the high corner")
    through = node.get("through", n0)
    if not isinstance(through, int):
        raise Reject(f"{path}: bad through index")
    _tower(A, B, n0, max(through, n0), path)
    return 1


def _specialized(terms) -> tuple[int, int]:
    """(degree in t, coefficient sum) at u = v = 1; degree -1 for zero."""
    return (max((k for k, *_ in terms), default=-1), sum(c for *_, c in terms))


def recheck(doc) -> RecheckResult:
    """Accept or reject a certificate dictionary; never raises on bad input."""
    variant = doc.get("variant") if isinstance(doc, dict) else None
    n0 = doc.get("n0") if isinstance(doc, dict) else None
    result = RecheckResult(False, variant, n0 if isinstance(n0, int) else None)
    try:
        result.leaves_checked = _recheck(doc)
        result.ok = True
    except Reject as exc:
        result.errors.append(str(exc))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        result.errors.append(f"malformed certificate: {exc!r}")
    return result


def _recheck(doc: dict) -> int:
    variant = doc["variant"]
    if variant not in ("point", "cube", "halfline"):
        raise Reject(f"unknown variant {variant!r}")
    n0 = doc["n0"]
    if not isinstance(n0, int) or isinstance(n0, bool) or n0 < 1:
        raise Reject(f"n0 must be a positive integer, got {n0!r}")
    mh, mh_pi = _terms(doc["mh"]), _terms(doc["mh_pi"])
    if sum(c for k, a, b, c in mh if (k, a, b) == (0, 0, 0)) != 1:
        raise Reject("MH must have constant term 1")
    lo = _point(doc["region"]["lo"])
    if not all(x > 0 for x in lo):
        raise Reject("region must lie in the open positive orthant")
    hi_raw = doc["region"]["hi"]

    if variant == "halfline":
        if hi_raw is not None:
            raise Reject("half-line region must be unbounded")
        if lo[1] != 1 or lo[2] != 1:
            raise Reject("half-line certificates live on u = v = 1")
        count = _recheck_halfline(doc, mh, mh_pi, lo, n0)
        hi = None
    else:
        hi = _point(hi_raw)
        if not all(a <= b for a, b in zip(lo, hi)):
            raise Reject("region corners out of order")
        if variant == "point" and lo != hi:
            raise Reject("point certificate with a non-degenerate region")
        if _rat(doc["A_lo"]) != _value(mh, lo) or _rat(doc["B_hi"]) != _value(mh_pi, hi):
            raise Reject("recorded corner values do not match the polynomials")
        if doc.get("subdivision"):
            count = _check_tree(doc["subdivision"], lo, hi, mh, mh_pi, n0)
        else:
            base = doc["base_check"]
            if base["n"] != n0:
                raise Reject("base check is not at n0")
            _tower(_value(mh, lo), _value(mh_pi, hi), n0, base.get("through", n0), "region")
            count = 1

    if doc.get("minimal") and n0 > 1:
        w = doc.get("minimality_witness")
        if not w:
            raise Reject("minimality claimed without a witness")
        if w["n"] != n0 - 1:
            raise Reject(f"minimality witness is for n = {w['n']}, expected {n0 - 1}")
        p = _point(w["point"])
        inside = all(a <= x for a, x in zip(lo, p)) and (
            hi is None and p[1] == 1 and p[2] == 1 or hi is not None and all(x <= b for x, b in zip(p, hi)))
        if not inside:
            raise Reject("minimality witness lies outside the region")
        m = w["n"]
        if not m * _value(mh_pi, p) >= _value(mh, p) ** m:
            raise Reject("minimality witness does not violate the inequality")
    return count


def _recheck_halfline(doc, mh, mh_pi, lo, n0) -> int:
    deg_pi, coef_sum = _specialized(mh_pi)
    if deg_pi < 0:
        # n·0 < P(t)^n holds for every positive t
        return 0
    deg_p, _ = _specialized(mh)
    tail = doc.get("tail")
    if not tail:
        raise Reject("half-line certificate without a tail bound")
    t_star = _rat(tail["t_star"])
    exponent = n0 * deg_p - deg_pi
    if t_star < 2 or exponent <= 0:
        raise Reject("tail bound needs t* >= 2 and n0*deg P > deg Ppi")
    if not coef_sum * n0 < t_star ** exponent:
        raise Reject(f"tail bound {coef_sum}*{n0} < {t_star}^{exponent} fails")
    if t_star < lo[0]:
        raise Reject("tail split point lies below eps")
    tree = doc.get("subdivision")
    if not tree:
        raise Reject("half-line certificate without a subdivision of [eps, t*]")
    return _check_tree(tree, lo, (t_star, Fraction(1), Fraction(1)), mh, mh_pi, n0)
