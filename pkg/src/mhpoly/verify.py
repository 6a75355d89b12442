"""Inequality checks and threshold certificates for powers of a space.

For a space X with A = MH_X and B = MHπ_X evaluated at a point, the n-th
power satisfies ``MHπ_{X^n} = n·B`` and ``MH_{X^n} = A^n``. The map
n ↦ A^n − n·B is convex, so once ``n·B < A^n`` and ``B ≤ A^n (A − 1)`` both
hold at some n they hold for every larger n. On a box, monotonicity of
polynomials with nonnegative coefficients gives the corner bounds
``A ≥ MH(lo)`` and ``B ≤ MHπ(hi)``, which reduce a box to a point check.

All checks are strict and exact: equality counts as failure.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .catalog import CatalogError, Space, euler, euler_pi, poincare, poincare_pi
from .poly import Box, MHPolynomial, RationalPoint, evaluate, specialize_t, to_fraction

log = logging.getLogger(__name__)

__all__ = [
    "HodgeDataError",
    "CertificationError",
    "Comparison",
    "CornerThreshold",
    "SubdivisionNode",
    "SubdivisionProof",
    "TailBound",
    "Witness",
    "ThresholdCertificate",
    "ProbeReport",
    "hilali",
    "euler_compare",
    "margin",
    "corner_threshold",
    "point_threshold",
    "cube_threshold",
    "verify_cube_at_n",
    "halfline_threshold",
    "conjecture_probe",
    "PROBE_LABEL",
]

PROBE_LABEL = "exploration - does not decide the conjecture"
DEFAULT_MAX_N = 1_000_000
DEFAULT_HALFLINE_DEPTH = 60
DEFAULT_MAX_NODES = 200_000


class HodgeDataError(ValueError):
    """Hodge-graded evaluation requested for a space with placeholder (a, b) data."""


class CertificationError(RuntimeError):
    """No certificate could be produced within the configured limits."""


def _check_hodge(X: Space, points: Sequence[RationalPoint]) -> None:
    if X.hodge_graded:
        return
    if any(p.u != 1 or p.v != 1 for p in points):
        raise HodgeDataError(
            f"{X} contains atoms without Hodge-graded data; only u = v = 1 can be evaluated")


@dataclass(frozen=True)
class Comparison:
    left: Fraction
    right: Fraction
    relation: str
    label: str = ""

    def __post_init__(self):
        expected = "<" if self.left < self.right else ("=" if self.left == self.right else ">")
        if self.relation != expected:
            raise ValueError(f"relation {self.relation!r} inconsistent with {self.left} vs {self.right}")

    @classmethod
    def of(cls, left, right, label: str = "") -> Comparison:
        left, right = to_fraction(left), to_fraction(right)
        rel = "<" if left < right else ("=" if left == right else ">")
        return cls(left, right, rel, label)

    @property
    def strict(self) -> bool:
        return self.relation == "<"

    def __str__(self) -> str:
        return f"{self.label}: {self.left} {self.relation} {self.right}"


_ONE = RationalPoint(1, 1, 1)


def hilali(X: Space) -> Comparison:
    """Total homotopy rank against total Betti number."""
    return Comparison.of(evaluate(X.mh_pi, _ONE), evaluate(X.mh, _ONE), f"hilali({X})")


def euler_compare(X: Space) -> Comparison:
    """χπ(X) against χ(X); anything but strict < means the atom data is wrong."""
    cmp = Comparison.of(euler_pi(X), euler(X), f"euler({X})")
    if not cmp.strict:
        offenders = sorted({a.name for a in X.atoms()
                            if not _atom_euler_ok(a)}) or [str(X)]
        raise CatalogError(
            f"chi_pi = {cmp.left} is not below chi = {cmp.right} for {X}; "
            f"declared data is inconsistent for: {', '.join(offenders)}")
    return cmp


def _atom_euler_ok(atom) -> bool:
    return specialize_t(atom.mh_pi)(-1) < specialize_t(atom.mh)(-1)


def margin(X: Space, pt: RationalPoint) -> Fraction:
    """MH_X(pt) − MHπ_X(pt); a positive value is a strict local inequality at pt."""
    _check_hodge(X, [pt])
    return evaluate(X.mh, pt) - evaluate(X.mh_pi, pt)


# scalar thresholds


@dataclass(frozen=True)
class CornerThreshold:
    """Result of scanning n for fixed values A (lower bound) and B (upper bound).

    ``n0`` is minimal with ``n·B < A^n`` for all n ≥ n0. ``through`` is the
    first n ≥ n0 at which the induction step ``B ≤ A^n (A − 1)`` holds; the
    base inequality holds on the whole range [n0, through].
    """

    A: Fraction
    B: Fraction
    n0: int
    through: int

    @property
    def last_failure(self) -> int | None:
        return self.n0 - 1 if self.n0 > 1 else None


def corner_threshold(A, B, max_n: int = DEFAULT_MAX_N) -> CornerThreshold:
    A, B = to_fraction(A), to_fraction(B)
    if B < 0:
        raise ValueError("homotopical value must be nonnegative")
    if A < 1 or (A == 1 and B > 0):
        raise CatalogError(
            f"impossible values A = {A}, B = {B}: a connected space has MH >= 1 at positive "
            "points, with MH > 1 whenever MHpi > 0; the atom data is corrupt")
    last_fail = 0
    An = A
    n = 1
    while True:
        base = n * B < An
        if not base:
            last_fail = n
        elif B <= An * (A - 1):
            return CornerThreshold(A, B, last_fail + 1, n)
        if n >= max_n:
            raise CertificationError(f"no threshold found below n = {max_n} (A = {A}, B = {B})")
        n += 1
        An *= A


# box subdivision


@dataclass
class SubdivisionNode:
    box: Box
    axis: int | None = None
    children: tuple[SubdivisionNode, ...] = ()
    A_lo: Fraction | None = None
    B_hi: Fraction | None = None
    passed: bool | None = None
    through: int | None = None

    def leaves(self) -> Iterator[SubdivisionNode]:
        if not self.children:
            yield self
        else:
            for c in self.children:
                yield from c.leaves()

    def depth(self) -> int:
        return 0 if not self.children else 1 + max(c.depth() for c in self.children)

    def to_json(self) -> dict:
        out = {"lo": [_q(x) for x in self.box.lo], "hi": [_q(x) for x in self.box.hi]}
        if self.children:
            out["axis"] = self.axis
            out["children"] = [c.to_json() for c in self.children]
        else:
            out["A_lo"] = _q(self.A_lo)
            out["B_hi"] = _q(self.B_hi)
            out["passed"] = bool(self.passed)
            if self.through is not None:
                out["through"] = self.through
        return out


@dataclass(frozen=True)
class Witness:
    """A point where ``n·MHπ < MH^n`` genuinely fails."""

    n: int
    point: RationalPoint
    lhs: Fraction
    rhs: Fraction

    def to_json(self) -> dict:
        return {"n": self.n, "point": [_q(x) for x in self.point], "lhs": _q(self.lhs),
                "rhs": _q(self.rhs)}


@dataclass
class SubdivisionProof:
    root: SubdivisionNode
    n: int
    depth_limit: int
    all_larger: bool
    complete: bool
    unresolved: list[Box] = field(default_factory=list)
    witness: Witness | None = None

    @property
    def leaves(self) -> list[SubdivisionNode]:
        return list(self.root.leaves())

    def to_json(self) -> dict:
        return self.root.to_json()


def _witness_at(X: Space, n: int, pt: RationalPoint) -> Witness | None:
    lhs = n * evaluate(X.mh_pi, pt)
    rhs = evaluate(X.mh, pt) ** n
    return Witness(n, pt, lhs, rhs) if lhs >= rhs else None


def verify_cube_at_n(X: Space, n: int, box: Box, depth: int, all_larger: bool = False,
                     max_nodes: int = DEFAULT_MAX_NODES) -> SubdivisionProof:
    """Adaptive bisection proving ``n·MHπ_X < MH_X^n`` on every point of ``box``.

    A leaf passes when the corner bounds satisfy the inequality. With
    ``all_larger`` a leaf must also certify every exponent above n (its corner
    threshold is at most n). Failing leaves are bisected along their widest
    side until ``depth`` is exhausted; unresolved leaves are reported, and a
    corner that genuinely violates the inequality stops the search.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not box.is_positive():
        raise ValueError("box must lie in the open positive orthant")
    _check_hodge(X, [box.lo, box.hi])
    budget = [max_nodes]
    unresolved: list[Box] = []
    found: list[Witness] = []

    def check(node: SubdivisionNode) -> None:
        lo, hi = node.box.lo, node.box.hi
        node.A_lo = evaluate(X.mh, lo)
        node.B_hi = evaluate(X.mh_pi, hi)
        if all_larger:
            try:
                ct = corner_threshold(node.A_lo, node.B_hi)
            except CatalogError:
                node.passed = False
            else:
                node.passed = ct.n0 <= n
                node.through = max(ct.through, n)
        else:
            node.passed = n * node.B_hi < node.A_lo ** n

    def explore(node: SubdivisionNode, level: int) -> None:
        budget[0] -= 1
        if budget[0] < 0:
            raise CertificationError(f"subdivision exceeded {max_nodes} boxes")
        check(node)
        if node.passed:
            return
        for corner in (node.box.lo, node.box.hi):
            w = _witness_at(X, n, corner)
            if w is not None:
                found.append(w)
                unresolved.append(node.box)
                return
        widths = node.box.widths
        axis = max(range(3), key=lambda i: (widths[i], -i))
        if level >= depth or widths[axis] == 0:
            unresolved.append(node.box)
            return
        node.axis = axis
        node.children = tuple(SubdivisionNode(b) for b in node.box.bisect(axis))
        for child in node.children:
            explore(child, level + 1)
            if found:
                return

    root = SubdivisionNode(box)
    explore(root, 0)
    complete = not unresolved
    return SubdivisionProof(root, n, depth, all_larger, complete, unresolved,
                            found[0] if found else None)


def _uniform_tree(box: Box, levels: int) -> SubdivisionNode:
    """Bisect along t, u, v in turn, ``levels`` full rounds."""
    node = SubdivisionNode(box)
    if levels == 0:
        return node

    def split(n: SubdivisionNode, axis: int) -> None:
        if axis == 3:
            sub = _uniform_tree(n.box, levels - 1)
            n.axis, n.children = sub.axis, sub.children
            return
        if n.box.widths[axis] == 0:
            split(n, axis + 1)
            return
        n.axis = axis
        n.children = tuple(SubdivisionNode(b) for b in n.box.bisect(axis))
        for c in n.children:
            split(c, axis + 1)

    split(node, 0)
    return node


# certificates


def _q(x) -> str | None:
    if x is None:
        return None
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class TailBound:
    """``S·n < t*^(n·deg P − deg Pπ)`` with S the coefficient sum of Pπ."""

    t_star: Fraction
    coef_sum: int
    deg_p: int
    deg_p_pi: int
    n: int

    @property
    def exponent(self) -> int:
        return self.n * self.deg_p - self.deg_p_pi

    @property
    def lhs(self) -> int:
        return self.coef_sum * self.n

    @property
    def rhs(self) -> Fraction:
        return self.t_star ** self.exponent

    @property
    def holds(self) -> bool:
        return self.t_star >= 2 and self.exponent > 0 and self.lhs < self.rhs

    def to_json(self) -> dict:
        return {"t_star": _q(self.t_star), "coef_sum": str(self.coef_sum), "deg_P": self.deg_p,
                "deg_P_pi": self.deg_p_pi, "n": self.n, "lhs": _q(self.lhs), "rhs": _q(self.rhs),
                "holds": self.holds}


@dataclass
class ThresholdCertificate:
    variant: str  # "point" | "cube" | "halfline"
    space: str
    mh: MHPolynomial
    mh_pi: MHPolynomial
    n0: int
    region_lo: RationalPoint
    region_hi: RationalPoint | None  # None: t unbounded (halfline)
    A_lo: Fraction
    B_hi: Fraction
    through: int | None = None
    minimal: bool = False
    minimality_witness: Witness | None = None
    subdivision: SubdivisionNode | None = None
    tail: TailBound | None = None
    notes: tuple[str, ...] = ()

    @property
    def base_check(self) -> tuple[int, Fraction, Fraction]:
        return (self.n0, self.n0 * self.B_hi, self.A_lo ** self.n0)

    @property
    def induction_check(self) -> tuple[Fraction, Fraction]:
        n = self.through or self.n0
        return (self.B_hi, self.A_lo ** n * (self.A_lo - 1))

    def to_json(self) -> dict:
        out = {
            "variant": self.variant,
            "space": self.space,
            "mh": self.mh.to_records(),
            "mh_pi": self.mh_pi.to_records(),
            "region": {
                "lo": [_q(x) for x in self.region_lo],
                "hi": None if self.region_hi is None else [_q(x) for x in self.region_hi],
            },
            "n0": self.n0,
            "A_lo": _q(self.A_lo),
            "B_hi": _q(self.B_hi),
            "minimal": self.minimal,
        }
        if self.subdivision is None:
            n, lhs, rhs = self.base_check
            through = self.through or self.n0
            out["base_check"] = {"n": n, "through": through, "lhs": _q(lhs), "rhs": _q(rhs),
                                 "holds": lhs < rhs}
            il, ir = self.induction_check
            out["induction_check"] = {"n": through, "lhs": _q(il), "rhs": _q(ir), "holds": il <= ir}
        else:
            out["base_check"] = None
            out["induction_check"] = None
            out["subdivision"] = self.subdivision.to_json()
        out["minimality_witness"] = (self.minimality_witness.to_json()
                                     if self.minimality_witness else None)
        if self.tail is not None:
            out["tail"] = self.tail.to_json()
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def point_threshold(X: Space, pt: RationalPoint, max_n: int = DEFAULT_MAX_N) -> ThresholdCertificate:
    """Minimal n0 with ``n·MHπ_X(pt) < MH_X(pt)^n`` for every n ≥ n0."""
    if not all(x > 0 for x in pt):
        raise ValueError("point_threshold needs strictly positive coordinates")
    _check_hodge(X, [pt])
    A, B = evaluate(X.mh, pt), evaluate(X.mh_pi, pt)
    ct = corner_threshold(A, B, max_n)
    witness = None
    if ct.n0 > 1:
        m = ct.n0 - 1
        witness = Witness(m, pt, m * B, A ** m)
    return ThresholdCertificate("point", str(X), X.mh, X.mh_pi, ct.n0, pt, pt, A, B,
                                through=ct.through, minimal=True, minimality_witness=witness,
                                notes=X.notes)


def cube_threshold(X: Space, eps, r, refine_depth: int = 0,
                   max_n: int = DEFAULT_MAX_N) -> ThresholdCertificate:
    """Sound n0 for the cube [eps, r]^3 from corner bounds.

    ``refine_depth`` rounds of bisection along every axis replace the single
    corner bound by the worst per-subcube threshold. Minimality is claimed
    only when the cube is a single point.
    """
    eps, r = to_fraction(eps), to_fraction(r)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if r < eps:
        raise ValueError("r must be at least eps")
    if refine_depth < 0:
        raise ValueError("refine_depth must be nonnegative")
    box = Box.cube(eps, r)
    _check_hodge(X, [box.lo, box.hi])
    A, B = evaluate(X.mh, box.lo), evaluate(X.mh_pi, box.hi)

    if eps == r:
        cert = point_threshold(X, box.lo, max_n)
        cert.variant = "cube"
        return cert

    if refine_depth == 0:
        ct = corner_threshold(A, B, max_n)
        return ThresholdCertificate("cube", str(X), X.mh, X.mh_pi, ct.n0, box.lo, box.hi, A, B,
                                    through=ct.through, notes=X.notes)

    tree = _uniform_tree(box, refine_depth)
    n0, leaf_results = 1, []
    for leaf in tree.leaves():
        leaf.A_lo = evaluate(X.mh, leaf.box.lo)
        leaf.B_hi = evaluate(X.mh_pi, leaf.box.hi)
        ct = corner_threshold(leaf.A_lo, leaf.B_hi, max_n)
        leaf_results.append((leaf, ct))
        n0 = max(n0, ct.n0)
    for leaf, ct in leaf_results:
        leaf.passed = True
        leaf.through = max(ct.through, n0)
    return ThresholdCertificate("cube", str(X), X.mh, X.mh_pi, n0, box.lo, box.hi, A, B,
                                subdivision=tree, notes=X.notes)


def _tail_start(coef_sum: int, deg_p: int, deg_p_pi: int, n: int, floor: Fraction) -> TailBound:
    t = Fraction(2)
    while t < floor:
        t *= 2
    tail = TailBound(t, coef_sum, deg_p, deg_p_pi, n)
    while not tail.holds:
        t *= 2
        tail = TailBound(t, coef_sum, deg_p, deg_p_pi, n)
    return tail


def halfline_threshold(X: Space, eps, depth: int = DEFAULT_HALFLINE_DEPTH,
                       max_n: int = 10_000,
                       max_nodes: int = DEFAULT_MAX_NODES) -> ThresholdCertificate:
    """n0 with ``n·Pπ_X(t) < P_X(t)^n`` for all t ≥ eps and all n ≥ n0.

    Beyond a power-of-two split point t* the leading terms dominate; the
    bounded part [eps, t*] is certified by bisection, each leaf covering
    every exponent from n0 upwards.
    """
    eps = to_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    P, Ppi = poincare(X), poincare_pi(X)
    lo = RationalPoint(eps, 1, 1)
    if not Ppi.coeffs:
        A = evaluate(X.mh, lo)
        return ThresholdCertificate("halfline", str(X), X.mh, X.mh_pi, 1, lo, None, A,
                                    Fraction(0), through=1, minimal=True, notes=X.notes)
    if P.degree < 1:
        raise CatalogError(f"{X}: Poincare polynomial is constant but homotopy is not; "
                           "the atom data is corrupt")
    coef_sum = sum(Ppi.coeffs)

    start = corner_threshold(P(eps), Ppi(eps), max_n)
    witness = None
    if start.n0 > 1:
        m = start.n0 - 1
        witness = Witness(m, lo, m * Ppi(eps), P(eps) ** m)

    for n in range(start.n0, max_n + 1):
        if n * P.degree <= Ppi.degree:
            witness = _tail_witness(X, n)
            continue
        tail = _tail_start(coef_sum, P.degree, Ppi.degree, n, eps)
        box = Box(lo, RationalPoint(tail.t_star, 1, 1))
        proof = verify_cube_at_n(X, n, box, depth, all_larger=True, max_nodes=max_nodes)
        if proof.complete:
            minimal = n == 1 or (witness is not None and witness.n == n - 1)
            log.debug("halfline n0=%d for %s with %d leaves", n, X, len(proof.leaves))
            return ThresholdCertificate(
                "halfline", str(X), X.mh, X.mh_pi, n, lo, None,
                evaluate(X.mh, box.lo), evaluate(X.mh_pi, box.hi),
                minimal=minimal, minimality_witness=witness if minimal else None,
                subdivision=proof.root, tail=tail, notes=X.notes)
        witness = proof.witness
    raise CertificationError(f"no half-line threshold certified up to n = {max_n}")


def _tail_witness(X: Space, n: int) -> Witness | None:
    t = Fraction(2)
    for _ in range(64):
        w = _witness_at(X, n, RationalPoint(t, 1, 1))
        if w is not None:
            return w
        t *= 2
    return None


@dataclass
class ProbeReport:
    space: str
    eps: Fraction
    certificates: list[ThresholdCertificate]
    label: str = PROBE_LABEL

    @property
    def n0_values(self) -> list[int]:
        return [c.n0 for c in self.certificates]

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "space": self.space,
            "eps": _q(self.eps),
            "r_values": [_q(c.region_hi.t) for c in self.certificates],
            "n0_values": self.n0_values,
            "certificates": [c.to_json() for c in self.certificates],
        }


def conjecture_probe(X: Space, eps, r_schedule: Sequence, refine_depth: int = 0) -> ProbeReport:
    """Cube certificates for a growing family of cubes [eps, r]^3.

    The unbounded region [eps, ∞)^3 is never certified; this only shows how
    n0 evolves as r grows.
    """
    eps = to_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    rs = [to_fraction(r) for r in r_schedule]
    if any(b <= a for a, b in zip(rs, rs[1:])):
        raise ValueError("r schedule must be strictly increasing")
    certs = [cube_threshold(X, eps, r, refine_depth) for r in rs]
    return ProbeReport(str(X), eps, certs)
