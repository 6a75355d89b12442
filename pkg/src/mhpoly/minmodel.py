"""Minimal Sullivan models of formal simply connected spaces.

The target is a cohomology algebra ``H = Q[gens]/(relations)`` with zero
differential. The model ``(ΛV, d)`` is built one degree at a time: in
degree k we first add closed generators mapping onto the part of ``H^k``
the current model misses, then generators whose differentials kill the
classes in ``H^{k+1}(ΛV)`` that map to zero. All choices come from exact
row reduction in a fixed monomial order, so the output is reproducible.

Homotopy ranks read off the model equal ``dim π_k ⊗ Q`` only for formal
spaces; the builder treats every input as formal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .gca import BasisTooLarge, Element, FreeGCA, Monomial, UNIT
from .linalg import EchelonBasis, nullspace, rank
from .parsing import ParseError, parse_polynomial

__all__ = [
    "PresentationError",
    "BasisTooLarge",
    "CohomologyPresentation",
    "TargetCohomology",
    "MinimalModel",
    "ModelGenerator",
    "QuasiIsoReport",
    "build_minimal_model",
    "homotopy_ranks",
    "cohomology_dims",
    "check_quasi_iso",
    "check_dd_zero",
    "check_minimality",
    "projective_space_presentation",
    "sphere_presentation",
    "point_presentation",
]

DEFAULT_MAX_BASIS = 50_000
TOP_DEGREE_SCAN_LIMIT = 512


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class CohomologyPresentation:
    """Generators ``(name, degree)`` and relation strings such as ``"x^3"``.

    ``max_degree`` optionally bounds the scan for the top nonzero degree.
    """

    generators: tuple[tuple[str, int], ...] = ()
    relations: tuple[str, ...] = ()
    max_degree: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple((str(n), int(d)) for n, d in self.generators))
        object.__setattr__(self, "relations", tuple(self.relations))
        names = [n for n, _ in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError("generator names must be unique")
        for name, deg in self.generators:
            if deg < 2:
                raise PresentationError(
                    f"generator {name!r} has degree {deg}; only simply connected presentations "
                    "(all degrees >= 2) are supported")

    @classmethod
    def from_json(cls, data) -> CohomologyPresentation:
        if isinstance(data, (bytes, str)):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise PresentationError(f"malformed JSON: {exc}") from exc
        try:
            gens = [(g["name"], g["degree"]) for g in data.get("generators", [])]
            rels = list(data.get("relations", []))
        except (KeyError, TypeError, AttributeError) as exc:
            raise PresentationError(f"malformed presentation: {exc}") from exc
        if not all(isinstance(r, str) for r in rels):
            raise PresentationError("relations must be strings")
        if not all(isinstance(d, int) and not isinstance(d, bool) for _, d in gens):
            raise PresentationError("generator degrees must be integers")
        return cls(tuple(gens), tuple(rels), data.get("max_degree"))

    def to_json(self) -> dict:
        out = {
            "generators": [{"name": n, "degree": d} for n, d in self.generators],
            "relations": list(self.relations),
        }
        if self.max_degree is not None:
            out["max_degree"] = self.max_degree
        return out


def projective_space_presentation(n: int) -> CohomologyPresentation:
    if n < 1:
        raise PresentationError("projective space needs n >= 1")
    return CohomologyPresentation((("x", 2),), (f"x^{n + 1}",))


def sphere_presentation(n: int) -> CohomologyPresentation:
    if n < 2:
        raise PresentationError("only simply connected spheres (n >= 2) are supported")
    return CohomologyPresentation((("x", n),), ("x^2",))


def point_presentation() -> CohomologyPresentation:
    return CohomologyPresentation()


class _Ops:
    def __init__(self, alg: FreeGCA):
        self.alg = alg

    def const(self, n):
        return {UNIT: Fraction(n)} if n else {}

    def add(self, x, y):
        return self.alg.add(x, y)

    def neg(self, x):
        return {m: -c for m, c in x.items()}

    def mul(self, x, y):
        return self.alg.mul(x, y)

    def pow(self, x, n):
        return self.alg.pow(x, n)


class TargetCohomology:
    """The quotient algebra of a presentation, computed degree by degree.

    In each degree the ideal is spanned by (monomial * relation); the
    quotient basis is the set of non-pivot monomials of its echelon form.
    """

    def __init__(self, pres: CohomologyPresentation, max_basis: int = DEFAULT_MAX_BASIS):
        self.pres = pres
        self.alg = FreeGCA([d for _, d in pres.generators], [n for n, _ in pres.generators],
                           max_basis=max_basis)
        index = {n: i for i, (n, _) in enumerate(pres.generators)}

        self.relations: list[tuple[Element, int]] = []
        for text in pres.relations:
            def lookup(name, offset, text=text):
                if name not in index:
                    raise ParseError(f"unknown generator {name!r}", offset, text)
                return self.alg.generator(index[name])

            try:
                rel = parse_polynomial(text, lookup, _Ops(self.alg))
            except ParseError as exc:
                raise PresentationError(f"bad relation {text!r}: {exc}") from exc
            if not rel:
                continue  # e.g. x^2 for odd x is already zero
            try:
                deg = self.alg.degree(rel)
            except ValueError as exc:
                raise PresentationError(f"relation {text!r} is not homogeneous") from exc
            if deg == 0:
                raise PresentationError(f"relation {text!r} is a nonzero constant")
            self.relations.append((rel, deg))
        self._ideal: dict[int, EchelonBasis] = {}

    def ideal(self, degree: int) -> EchelonBasis:
        if degree not in self._ideal:
            basis = self.alg.basis(degree)
            ech = EchelonBasis(len(basis))
            for rel, rdeg in self.relations:
                for m in self.alg.basis(degree - rdeg):
                    ech.add(self.alg.to_vector(self.alg.mul({m: Fraction(1)}, rel), degree))
            self._ideal[degree] = ech
        return self._ideal[degree]

    def standard_monomials(self, degree: int) -> list[Monomial]:
        basis = self.alg.basis(degree)
        return [basis[j] for j in self.ideal(degree).free_columns()]

    def dim(self, degree: int) -> int:
        return len(self.alg.basis(degree)) - self.ideal(degree).rank

    def dims(self, through: int) -> dict[int, int]:
        return {d: self.dim(d) for d in range(through + 1)}

    def coords(self, x: Element, degree: int) -> list[Fraction]:
        """Coordinates of the class of ``x`` in the standard monomial basis."""
        ech = self.ideal(degree)
        rem = ech.reduce(self.alg.to_vector(x, degree))
        return [rem[j] for j in ech.free_columns()]

    def top_degree(self) -> int:
        """Largest degree with nonzero cohomology.

        Once a window as wide as the largest generator degree is zero, every
        higher degree is zero too (each monomial factors through the window).
        """
        if not self.alg.degrees:
            return 0
        width = max(self.alg.degrees)
        limit = self.pres.max_degree if self.pres.max_degree is not None else TOP_DEGREE_SCAN_LIMIT
        top, zeros = 0, 0
        for d in range(1, limit + width + 1):
            if self.dim(d):
                top, zeros = d, 0
            else:
                zeros += 1
                if zeros >= width:
                    return top
        raise PresentationError(
            f"cohomology is not finite below degree {limit}; supply an explicit cutoff")


@dataclass(frozen=True)
class ModelGenerator:
    name: str
    degree: int
    index: int
    differential: tuple[tuple[Monomial, Fraction], ...]


@dataclass
class MinimalModel:
    generators: list[ModelGenerator]
    cutoff: int
    algebra: FreeGCA = field(repr=False)
    # image of each generator in the target algebra (lifted representative)
    images: list[Element] = field(repr=False, default_factory=list)

    def differential(self, i: int) -> Element:
        return dict(self.generators[i].differential)

    def format_differential(self, i: int) -> str:
        return self.algebra.format(self.differential(i))

    def to_json(self) -> dict:
        return {
            "cutoff": self.cutoff,
            "generators": [
                {
                    "name": g.name,
                    "degree": g.degree,
                    "index": g.index,
                    "differential": [
                        [list(m), _frac_str(c)] for m, c in g.differential
                    ],
                    "differential_text": self.format_differential(g.index),
                }
                for g in self.generators
            ],
            "homotopy_ranks": {str(k): v for k, v in homotopy_ranks(self).items()},
        }


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _apply_map(model: FreeGCA, images: list[Element], target: FreeGCA, x: Element) -> Element:
    out: Element = {}
    for m, c in x.items():
        val: Element = {UNIT: Fraction(1)}
        for i, e in enumerate(m):
            for _ in range(e):
                val = target.mul(val, images[i])
                if not val:
                    break
            if not val:
                break
        out = target.add(out, val, c)
    return out


def _cocycles(alg: FreeGCA, degree: int) -> list[list[Fraction]]:
    n = len(alg.basis(degree))
    if n == 0:
        return []
    rows = alg.d_matrix(degree)
    m = len(alg.basis(degree + 1))
    # kernel of the map sending basis vector i to rows[i]
    cols = [[rows[i][j] for i in range(n)] for j in range(m)]
    return nullspace(cols, n)


def build_minimal_model(pres: CohomologyPresentation, cutoff: int | None = None,
                        max_basis: int = DEFAULT_MAX_BASIS) -> MinimalModel:
    """Minimal model of a formal space with the given cohomology, through ``cutoff``.

    The default cutoff is ``2 * top + 1`` where ``top`` is the top nonzero
    cohomological degree.
    """
    target = TargetCohomology(pres, max_basis=max_basis)
    if cutoff is None:
        cutoff = max(2, 2 * target.top_degree() + 1)
    if cutoff < 2:
        raise ValueError(f"cutoff must be at least 2, got {cutoff}")

    alg = FreeGCA(max_basis=max_basis)
    images: list[Element] = []
    per_degree: dict[int, int] = {}

    def new_gen(degree: int, diff: Element, image: Element) -> None:
        per_degree[degree] = per_degree.get(degree, 0) + 1
        alg.add_generator(degree, f"x{degree}_{per_degree[degree]}", diff)
        images.append(image)

    for k in range(2, cutoff + 1):
        # closed generators for the cokernel of H^k(model) -> H^k(target)
        qdim = target.dim(k)
        if qdim:
            hit = EchelonBasis(qdim)
            for z in _cocycles(alg, k):
                hit.add(target.coords(_apply_map(alg, images, target.alg, alg.from_vector(z, k)), k))
            for j, mono in enumerate(target.standard_monomials(k)):
                unit = [Fraction(0)] * qdim
                unit[j] = Fraction(1)
                if hit.add(unit):
                    new_gen(k, {}, {mono: Fraction(1)})

        # generators killing the kernel of H^{k+1}(model) -> H^{k+1}(target)
        zs = _cocycles(alg, k + 1)
        if not zs:
            continue
        nb = len(alg.basis(k + 1))
        img_cols = [target.coords(_apply_map(alg, images, target.alg, alg.from_vector(z, k + 1)), k + 1)
                    for z in zs]
        tq = target.dim(k + 1)
        # combinations sum c_i z_i whose image vanishes
        rows = [[img_cols[i][r] for i in range(len(zs))] for r in range(tq)]
        kernel = nullspace(rows, len(zs))
        if not kernel:
            continue
        exact = EchelonBasis(nb)
        for row in alg.d_matrix(k):
            exact.add(row)
        for coeffs in kernel:
            vec = [sum((c * z[j] for c, z in zip(coeffs, zs) if c), Fraction(0)) for j in range(nb)]
            if exact.add(vec):
                new_gen(k, alg.from_vector(vec, k + 1), {})

    gens = [
        ModelGenerator(alg.names[i], alg.degrees[i], i, tuple(sorted(alg.diff[i].items())))
        for i in range(alg.ngens)
    ]
    return MinimalModel(gens, cutoff, alg, images)


def homotopy_ranks(mm: MinimalModel) -> dict[int, int]:
    """Number of generators in each degree (only nonzero entries)."""
    out: dict[int, int] = {}
    for g in mm.generators:
        out[g.degree] = out.get(g.degree, 0) + 1
    return dict(sorted(out.items()))


def cohomology_dims(mm: MinimalModel, through: int) -> dict[int, int]:
    if through > mm.cutoff:
        raise ValueError(f"model is only valid through degree {mm.cutoff}, asked for {through}")
    alg = mm.algebra
    ranks = {}

    def d_rank(deg: int) -> int:
        if deg not in ranks:
            ranks[deg] = rank(alg.d_matrix(deg), len(alg.basis(deg + 1))) if deg >= 0 and alg.basis(deg) else 0
        return ranks[deg]

    return {d: len(alg.basis(d)) - d_rank(d) - d_rank(d - 1) for d in range(through + 1)}


@dataclass(frozen=True)
class QuasiIsoReport:
    ok: bool
    rows: tuple[tuple[int, int, int], ...]  # (degree, model dim, target dim)
    first_mismatch: int | None

    def __bool__(self) -> bool:
        return self.ok


def check_quasi_iso(mm: MinimalModel, pres: CohomologyPresentation, through: int) -> QuasiIsoReport:
    model_dims = cohomology_dims(mm, through)
    target = TargetCohomology(pres)
    rows = tuple((d, model_dims[d], target.dim(d)) for d in range(through + 1))
    bad = next((d for d, a, b in rows if a != b), None)
    return QuasiIsoReport(bad is None, rows, bad)


def check_dd_zero(mm: MinimalModel) -> bool:
    return all(not mm.algebra.d(mm.differential(g.index)) for g in mm.generators)


def check_minimality(mm: MinimalModel) -> bool:
    """No differential has a linear (single generator) term."""
    return all(sum(m) >= 2 for g in mm.generators for m, _ in g.differential)

